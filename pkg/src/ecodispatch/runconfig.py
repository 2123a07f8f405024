"""Run configuration: one serializable document that reproduces a run.

The YAML (or JSON) config maps field-for-field onto the domain dataclasses,
with every optimization parameter pre-filled to its reference default, so a
persisted config plus its seed replays a run bit-for-bit. Forecast signals
are bound to files and columns here; relative paths resolve against the
config file's directory.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import yaml

from .decisions import DecisionStrategy
from .dispatch import DecisionGrid, EconomicParams
from .forecasts import (SIGNAL_UNITS, ForecastSet, SignalSchema,
                        assemble_forecast_set, parse_forecast_file)
from .loop import LoopConfig
from .moga import MogaConfig
from .plant import UnitRatings

__all__ = ["ForecastSource", "RunConfig", "load_run_config", "ingest_forecasts"]


@dataclass(frozen=True)
class ForecastSource:
    """One signal bound to a file/column or fixed to a constant value."""

    name: str
    file: str | None = None
    column: str | None = None
    timestamp_column: str = "timestamp"
    unit: str = ""
    value: float | None = None
    delimiter: str = ","

    def __post_init__(self) -> None:
        if (self.file is None) == (self.value is None):
            raise ValueError(
                f"forecast {self.name!r}: give exactly one of file or value"
            )

    def schema(self) -> SignalSchema:
        return SignalSchema(
            name=self.name,
            value_column=self.column or self.name,
            timestamp_column=self.timestamp_column,
            unit=self.unit,
            delimiter=self.delimiter,
        )


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs; reproducible given the embedded seed."""

    forecasts: dict[str, ForecastSource]
    start: datetime
    grid: DecisionGrid
    params: EconomicParams
    ratings: UnitRatings
    moga: MogaConfig
    loop: LoopConfig | None = None
    base_dir: Path = Path(".")

    def to_dict(self) -> dict[str, Any]:
        """Plain-data form; inverse of from_dict."""
        out: dict[str, Any] = {
            "start": self.start.astimezone(timezone.utc)
                         .strftime("%Y-%m-%dT%H:%M:%SZ"),
            "forecasts": {
                name: {k: v for k, v in dataclasses.asdict(src).items()
                       if k != "name" and v is not None}
                for name, src in self.forecasts.items()
            },
            "grid": dataclasses.asdict(self.grid),
            "params": dataclasses.asdict(self.params),
            "ratings": {**dataclasses.asdict(self.ratings),
                        "tes_temp_range": list(self.ratings.tes_temp_range)},
            "moga": dataclasses.asdict(self.moga),
        }
        if self.loop is not None:
            loop = {k: v for k, v in dataclasses.asdict(self.loop).items()
                    if k not in ("grid", "moga")}
            loop["strategy"] = self.loop.strategy.value
            if self.loop.moga != self.moga:
                loop["moga"] = dataclasses.asdict(self.loop.moga)
            out["loop"] = loop
        return out

    @classmethod
    def from_dict(cls, doc: dict[str, Any], base_dir: Path = Path(".")) -> "RunConfig":
        unknown = set(doc) - {"start", "forecasts", "grid", "params",
                              "ratings", "moga", "loop", "horizon"}
        if unknown:
            raise ValueError(f"unknown config sections: {', '.join(sorted(unknown))}")
        doc = {
            key: _coerce_numbers(value) if key != "start" else value
            for key, value in doc.items()
        }
        if "forecasts" not in doc:
            raise ValueError("config is missing the forecasts section")
        if "start" not in doc:
            raise ValueError("config is missing the start timestamp")

        forecasts = {
            name: ForecastSource(name=name, **entry)
            for name, entry in doc["forecasts"].items()
        }
        grid_doc = dict(doc.get("grid", {}))
        if "horizon" in doc and "h" not in grid_doc:
            grid_doc["h"] = doc["horizon"]
        grid = DecisionGrid(**{**{"h": 168}, **grid_doc})
        params = EconomicParams(**doc.get("params", {}))
        ratings_doc = dict(doc.get("ratings", {}))
        if "tes_temp_range" in ratings_doc:
            ratings_doc["tes_temp_range"] = tuple(ratings_doc["tes_temp_range"])
        ratings = UnitRatings(**ratings_doc)
        moga = MogaConfig(**{**{"max_generations": 100}, **doc.get("moga", {})})

        loop = None
        if "loop" in doc:
            loop_doc = dict(doc["loop"])
            loop_moga = MogaConfig(**loop_doc.pop("moga")) \
                if "moga" in loop_doc else moga
            if "strategy" in loop_doc:
                loop_doc["strategy"] = DecisionStrategy(loop_doc["strategy"])
            horizon = loop_doc.pop("horizon", grid.h)
            loop = LoopConfig(
                horizon=horizon,
                grid=grid if grid.h == horizon
                else DecisionGrid(**{**dataclasses.asdict(grid), "h": horizon}),
                moga=loop_moga,
                **loop_doc,
            )

        return cls(
            forecasts=forecasts,
            start=_parse_start(doc["start"]),
            grid=grid, params=params, ratings=ratings, moga=moga, loop=loop,
            base_dir=base_dir,
        )


_NUMERIC_KEYS = frozenset({
    "value", "h", "dt", "c_r", "g_r", "d_r", "d_max", "grid_capacity",
    "el_tariff", "gas_lhv", "t_tes_min", "t_tes_max", "t_init", "t_source",
    "chp_heat_max", "chp_el_max", "chp_gas_max", "gb_heat_max", "gb_gas_max",
    "hp_heat_max", "hp_el_max", "dh_max", "tes_capacity", "tes_temp_range",
    "population_size", "crossover_rate", "mutation_rate", "max_generations",
    "max_seconds", "rng_seed", "horizon", "apply_count", "episode_length",
    "replan_budget",
})


def _coerce_numbers(node: Any, numeric: bool = False) -> Any:
    """Parse numeric-looking strings in known numeric fields.

    YAML 1.1 reads unsigned exponents like `1.0e4` as strings; configs are
    hand-edited often enough that silent strings would be a trap.
    """
    if isinstance(node, dict):
        return {k: _coerce_numbers(v, numeric=k in _NUMERIC_KEYS)
                for k, v in node.items()}
    if isinstance(node, list):
        return [_coerce_numbers(v, numeric=numeric) for v in node]
    if numeric and isinstance(node, str):
        try:
            value = float(node)
        except ValueError:
            return node
        return int(value) if value.is_integer() and "." not in node \
            and "e" not in node.lower() else value
    return node


def _parse_start(value: Any) -> datetime:
    if isinstance(value, datetime):
        ts = value
    else:
        raw = str(value).strip()
        if raw.endswith("Z"):
            raw = raw[:-1] + "+00:00"
        ts = datetime.fromisoformat(raw)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def load_run_config(path: str | Path) -> RunConfig:
    """Read and validate a YAML/JSON run configuration file."""
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: config root must be a mapping")
    return RunConfig.from_dict(doc, base_dir=path.parent)


def load_forecast_sources(config: RunConfig) -> dict[str, Any]:
    """Parse every file-backed signal; constants pass through unchanged."""
    sources: dict[str, Any] = {}
    for name, src in config.forecasts.items():
        if src.value is not None:
            sources[name] = src.value
            continue
        file_path = Path(src.file)
        if not file_path.is_absolute():
            file_path = config.base_dir / file_path
        if not file_path.exists():
            raise FileNotFoundError(f"forecast file not found: {file_path}")
        data = file_path.read_bytes()
        sources[name] = parse_forecast_file(
            data, src.schema(), target_unit=SIGNAL_UNITS.get(name))
    return sources


def episode_horizon(config: RunConfig) -> int:
    """Instants of forecast coverage a run needs, episode included."""
    if config.loop is not None:
        return config.loop.episode_length + config.loop.horizon
    return config.grid.h


def ingest_forecasts(config: RunConfig, horizon: int | None = None) -> ForecastSet:
    """Parse, aggregate and align every configured signal onto the horizon."""
    sources = load_forecast_sources(config)
    if horizon is None:
        horizon = episode_horizon(config)
    return assemble_forecast_set(sources, horizon, config.start)
