"""Shared fixtures and forecast builders for the test suite."""

from __future__ import annotations

from datetime import datetime, timezone

import pytest

from ecodispatch.dispatch import EconomicParams
from ecodispatch.forecasts import ForecastSet, assemble_forecast_set
from ecodispatch.plant import UnitRatings

START = datetime(2024, 1, 1, tzinfo=timezone.utc)

DEFAULT_SIGNALS = {
    "heat_demand": 1.5e6,   # W
    "el_demand": 2.0e6,     # W
    "el_price": 50.0,       # EUR/MWh
    "gas_price": 30.0,      # EUR/MWh
    "dh_price": 40.0,       # EUR/MWh
    "co2_el": 150.0,        # kg/MWh
    "co2_dh": 120.0,        # kg/MWh
}


def constant_forecasts(h: int, **overrides: float) -> ForecastSet:
    """Hourly ForecastSet of constants, overridable per signal."""
    signals: dict[str, float] = {**DEFAULT_SIGNALS, **overrides}
    return assemble_forecast_set(signals, h, START)


@pytest.fixture
def ratings() -> UnitRatings:
    return UnitRatings()


@pytest.fixture
def params() -> EconomicParams:
    return EconomicParams()
