"""Ingestion and time-alignment of the external forecast signals.

Forecast files are delimiter-separated text with a header row and ISO-8601
UTC timestamps. A per-signal column schema binds file columns and units so
that provider exports can be ingested without code changes. All series are
aggregated or validated to a common hourly timeline before evaluation.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

__all__ = [
    "ForecastError",
    "SignalSchema",
    "ForecastSeries",
    "ForecastSet",
    "parse_forecast_file",
    "aggregate_to_hourly",
    "assemble_forecast_set",
    "constant_series",
    "HOURLY",
    "CO2_GAS_DEFAULT",
]

HOURLY = 3600  # seconds

# Yearly Danish Energy Agency estimate for gas, kg CO2 per MWh of fuel.
CO2_GAS_DEFAULT = 204.0

# Multiplicative conversions into the canonical unit of each dimension.
_UNIT_CONVERSIONS: dict[tuple[str, str], float] = {
    ("W", "W"): 1.0,
    ("kW", "W"): 1e3,
    ("MW", "W"): 1e6,
    ("EUR/MWh", "EUR/MWh"): 1.0,
    ("EUR/kWh", "EUR/MWh"): 1e3,
    ("kg/MWh", "kg/MWh"): 1.0,
    ("g/kWh", "kg/MWh"): 1.0,
}

# Canonical unit per known signal name; unknown signals pass through unconverted.
SIGNAL_UNITS: dict[str, str] = {
    "heat_demand": "W",
    "el_demand": "W",
    "el_price": "EUR/MWh",
    "gas_price": "EUR/MWh",
    "dh_price": "EUR/MWh",
    "co2_el": "kg/MWh",
    "co2_dh": "kg/MWh",
    "co2_gas": "kg/MWh",
}

REQUIRED_SIGNALS = (
    "heat_demand",
    "el_demand",
    "el_price",
    "gas_price",
    "dh_price",
    "co2_el",
    "co2_dh",
    "co2_gas",
)


class ForecastError(ValueError):
    """Malformed, misaligned, or insufficient forecast data."""


@dataclass(frozen=True)
class SignalSchema:
    """Binds one signal to the columns and unit of a provider file."""

    name: str
    value_column: str
    timestamp_column: str = "timestamp"
    unit: str = ""
    delimiter: str = ","


@dataclass(frozen=True)
class ForecastSeries:
    """Evenly spaced time series; spacing is validated at construction."""

    name: str
    start: datetime
    resolution: int  # seconds between consecutive values
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.resolution <= 0:
            raise ForecastError(f"{self.name}: resolution must be positive")
        if not self.values:
            raise ForecastError(f"{self.name}: series has no values")
        if self.start.tzinfo is None:
            object.__setattr__(self, "start", self.start.replace(tzinfo=timezone.utc))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> datetime:
        """First timestamp after the covered span."""
        return self.start + timedelta(seconds=self.resolution * len(self.values))

    def timestamps(self) -> list[datetime]:
        step = timedelta(seconds=self.resolution)
        return [self.start + i * step for i in range(len(self.values))]

    def window(self, start: datetime, count: int) -> "ForecastSeries":
        """Crop to `count` values beginning at `start` (must lie on the grid)."""
        offset_s = (start - self.start).total_seconds()
        steps = offset_s / self.resolution
        if steps != int(steps):
            raise ForecastError(
                f"{self.name}: window start {start.isoformat()} is off the "
                f"{self.resolution}s grid"
            )
        i = int(steps)
        if i < 0 or i + count > len(self.values):
            want_to = start + timedelta(seconds=self.resolution * count)
            if i < 0:
                gap = f"[{start.isoformat()}, {min(want_to, self.start).isoformat()})"
            else:
                gap = f"[{max(start, self.end).isoformat()}, {want_to.isoformat()})"
            raise ForecastError(
                f"{self.name}: coverage gap, requested "
                f"[{start.isoformat()}, {want_to.isoformat()}) but series covers "
                f"[{self.start.isoformat()}, {self.end.isoformat()}); missing {gap}"
            )
        return ForecastSeries(self.name, start, self.resolution,
                              self.values[i:i + count])

    def to_csv(self) -> str:
        """Serialize as `timestamp,<name>` rows; inverse of parse_forecast_file."""
        out = io.StringIO()
        out.write(f"timestamp,{self.name}\r\n")
        for ts, v in zip(self.timestamps(), self.values):
            out.write(f"{_format_ts(ts)},{v!r}\r\n")
        return out.getvalue()


def _format_ts(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _parse_ts(text: str) -> datetime:
    raw = text.strip()
    if raw.endswith("Z"):
        raw = raw[:-1] + "+00:00"
    ts = datetime.fromisoformat(raw)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def parse_forecast_file(
    data: bytes | str,
    schema: SignalSchema,
    target_unit: str | None = None,
) -> ForecastSeries:
    """Parse one signal from delimiter-separated text into a validated series.

    The row spacing is inferred from the first two timestamps and enforced on
    every subsequent row. When `target_unit` is given, values are converted
    from `schema.unit`; an unknown conversion is a unit mismatch.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")

    scale = 1.0
    if target_unit is not None and schema.unit:
        key = (schema.unit, target_unit)
        if key not in _UNIT_CONVERSIONS:
            raise ForecastError(
                f"{schema.name}: unit mismatch, cannot convert "
                f"{schema.unit!r} to {target_unit!r}"
            )
        scale = _UNIT_CONVERSIONS[key]

    reader = csv.reader(io.StringIO(data), delimiter=schema.delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise ForecastError(f"{schema.name}: empty file") from None
    header = [h.strip() for h in header]
    for column in (schema.timestamp_column, schema.value_column):
        if column not in header:
            raise ForecastError(
                f"{schema.name}: missing column {column!r} in header {header}"
            )
    ts_idx = header.index(schema.timestamp_column)
    val_idx = header.index(schema.value_column)

    timestamps: list[datetime] = []
    values: list[float] = []
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            ts = _parse_ts(row[ts_idx])
            value = float(row[val_idx]) * scale
        except (ValueError, IndexError) as exc:
            raise ForecastError(
                f"{schema.name}: malformed row {row_no}: {exc}"
            ) from None
        if timestamps and ts <= timestamps[-1]:
            raise ForecastError(
                f"{schema.name}: non-monotone timestamp at row {row_no}: "
                f"{_format_ts(ts)} does not advance past {_format_ts(timestamps[-1])}"
            )
        timestamps.append(ts)
        values.append(value)

    if not values:
        raise ForecastError(f"{schema.name}: no data rows")
    if len(values) == 1:
        resolution = HOURLY
    else:
        resolution = int((timestamps[1] - timestamps[0]).total_seconds())
        for i in range(1, len(timestamps)):
            spacing = (timestamps[i] - timestamps[i - 1]).total_seconds()
            if spacing != resolution:
                raise ForecastError(
                    f"{schema.name}: irregular spacing at row {i + 2}: "
                    f"{spacing:.0f}s, expected {resolution}s"
                )
    return ForecastSeries(schema.name, timestamps[0], resolution, tuple(values))


def aggregate_to_hourly(series: ForecastSeries) -> ForecastSeries:
    """Average sub-hourly values into hourly means; hourly input passes through."""
    if series.resolution == HOURLY:
        return series
    if HOURLY % series.resolution != 0:
        raise ForecastError(
            f"{series.name}: resolution {series.resolution}s does not divide one hour"
        )
    per_hour = HOURLY // series.resolution
    if len(series.values) % per_hour != 0:
        raise ForecastError(
            f"{series.name}: partial trailing hour, {len(series.values)} values "
            f"is not a multiple of {per_hour} per hour"
        )
    hourly = tuple(
        sum(series.values[i:i + per_hour]) / per_hour
        for i in range(0, len(series.values), per_hour)
    )
    return ForecastSeries(series.name, series.start, HOURLY, hourly)


def constant_series(name: str, value: float, start: datetime, count: int) -> ForecastSeries:
    """Expand a scalar (e.g. a yearly average) into a constant hourly series."""
    return ForecastSeries(name, start, HOURLY, (float(value),) * count)


@dataclass(frozen=True)
class ForecastSet:
    """Hourly, horizon-aligned bundle of every signal the evaluation needs."""

    heat_demand: ForecastSeries   # W
    el_demand: ForecastSeries     # W
    el_price: ForecastSeries      # EUR/MWh
    gas_price: ForecastSeries     # EUR/MWh
    dh_price: ForecastSeries      # EUR/MWh
    co2_el: ForecastSeries        # kg/MWh
    co2_dh: ForecastSeries        # kg/MWh expanded from a yearly average
    co2_gas: ForecastSeries = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.co2_gas is None:
            object.__setattr__(
                self, "co2_gas",
                constant_series("co2_gas", CO2_GAS_DEFAULT,
                                self.heat_demand.start, len(self.heat_demand)),
            )
        first = self.heat_demand
        for name in REQUIRED_SIGNALS:
            series = getattr(self, name)
            if series.resolution != HOURLY:
                raise ForecastError(f"{name}: ForecastSet series must be hourly")
            if series.start != first.start or len(series) != len(first):
                raise ForecastError(
                    f"{name}: series not aligned with heat_demand "
                    f"({series.start.isoformat()} x{len(series)} vs "
                    f"{first.start.isoformat()} x{len(first)})"
                )

    def __len__(self) -> int:
        return len(self.heat_demand)

    @property
    def start(self) -> datetime:
        return self.heat_demand.start

    def window(self, offset: int, count: int) -> "ForecastSet":
        """Sub-horizon view starting `offset` hours into the set."""
        start = self.start + timedelta(hours=offset)
        return ForecastSet(**{
            name: getattr(self, name).window(start, count)
            for name in REQUIRED_SIGNALS
        })


def assemble_forecast_set(
    sources: dict[str, ForecastSeries | float],
    horizon: int,
    start: datetime,
) -> ForecastSet:
    """Align all signals onto `[start, start + horizon hours)`.

    Scalars are expanded into constant series; sub-hourly series are averaged
    to hourly first. A signal that does not cover the window raises a
    coverage error naming it and the missing interval.
    """
    if start.tzinfo is None:
        start = start.replace(tzinfo=timezone.utc)
    if horizon <= 0:
        raise ForecastError(f"horizon must be positive: {horizon}")
    missing = [name for name in REQUIRED_SIGNALS
               if name not in sources and name != "co2_gas"]
    if missing:
        raise ForecastError(f"missing required signals: {', '.join(missing)}")

    aligned: dict[str, ForecastSeries] = {}
    for name in REQUIRED_SIGNALS:
        source = sources.get(name)
        if source is None and name == "co2_gas":
            source = CO2_GAS_DEFAULT
        if isinstance(source, (int, float)):
            aligned[name] = constant_series(name, float(source), start, horizon)
            continue
        series = aggregate_to_hourly(source)
        cropped = series.window(start, horizon)
        aligned[name] = ForecastSeries(name, cropped.start, cropped.resolution,
                                       cropped.values)
    return ForecastSet(**aligned)
