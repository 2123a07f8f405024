"""Linear component models of the greenhouse energy plant.

Four supply units (CHP, gas boiler, heat pump, district heating) are
modelled as linear load-factor-to-output maps between zero and their rated
maxima, and a lossless thermal energy storage (TES) integrates the heat
balance like a battery. The TES state is deliberately not clamped to its
physical band: infeasible trajectories must stay representable so that
constraint distances can be scored downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "UnitRatings",
    "PlantInputs",
    "PlantOutputs",
    "TesState",
    "evaluate_units",
    "tes_step",
    "tes_energy",
]


@dataclass(frozen=True)
class UnitRatings:
    """Rated maxima of the plant units; defaults match the reference compartment."""

    chp_heat_max: float = 2.8e6   # W
    chp_el_max: float = 1.2e6     # W
    chp_gas_max: float = 12.0     # kg/s
    gb_heat_max: float = 7.0e6    # W
    gb_gas_max: float = 194.0     # kg/s
    hp_heat_max: float = 5.0e5    # W
    hp_el_max: float = 1.25e5     # W
    dh_max: float = 6.0e6         # W
    tes_capacity: float = 65.0e6  # Wh
    tes_temp_range: tuple[float, float] = (0.0, 90.0)  # degC

    def __post_init__(self) -> None:
        for name in (
            "chp_heat_max", "chp_el_max", "chp_gas_max", "gb_heat_max",
            "gb_gas_max", "hp_heat_max", "hp_el_max", "dh_max", "tes_capacity",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        lo, hi = self.tes_temp_range
        if not lo < hi:
            raise ValueError("tes_temp_range lower bound must be below upper bound")

    @property
    def tes_heat_capacity(self) -> float:
        """Storage heat capacity in Wh per degC."""
        lo, hi = self.tes_temp_range
        return self.tes_capacity / (hi - lo)


@dataclass(frozen=True)
class PlantInputs:
    """Setpoints applied to the plant for one instant."""

    lf_chp: float = 0.0     # [0, 1]
    lf_gb: float = 0.0      # [0, 1]
    lf_hp: int = 0          # {0, 1}
    t_source: float = 20.0  # degC, [20, 50]; no effect in the linear baseline
    p_dh_req: float = 0.0   # W, [0, dh_max]


@dataclass(frozen=True)
class PlantOutputs:
    """Per-unit power and fuel flows for one instant."""

    p_h_chp: float  # W
    p_e_chp: float  # W
    m_chp: float    # kg/s
    p_h_gb: float   # W
    m_gb: float     # kg/s
    p_h_hp: float   # W
    p_e_hp: float   # W
    p_dh: float     # W

    @property
    def heat_total(self) -> float:
        return self.p_h_chp + self.p_h_gb + self.p_h_hp + self.p_dh


@dataclass(frozen=True)
class TesState:
    """Thermal storage state; temperature and stored energy stay consistent."""

    t_tes: float           # degC
    q_tes: float           # Wh
    heat_capacity: float   # Wh per degC

    def __post_init__(self) -> None:
        if self.heat_capacity <= 0:
            raise ValueError("heat_capacity must be strictly positive")
        expected = self.heat_capacity * self.t_tes
        scale = max(abs(self.q_tes), abs(expected), 1.0)
        if abs(self.q_tes - expected) > 1e-9 * scale:
            raise ValueError(
                f"inconsistent TES state: q_tes={self.q_tes} vs "
                f"heat_capacity*t_tes={expected}"
            )

    @classmethod
    def at_temperature(cls, t_tes: float, ratings: UnitRatings) -> "TesState":
        cap = ratings.tes_heat_capacity
        return cls(t_tes=t_tes, q_tes=cap * t_tes, heat_capacity=cap)

    @classmethod
    def from_energy(cls, q_tes: float, ratings: UnitRatings) -> "TesState":
        cap = ratings.tes_heat_capacity
        return cls(t_tes=q_tes / cap, q_tes=q_tes, heat_capacity=cap)


def validate_inputs(inputs: PlantInputs, ratings: UnitRatings) -> None:
    """Raise ValueError naming the first field outside its admissible interval."""
    if not 0.0 <= inputs.lf_chp <= 1.0:
        raise ValueError(f"lf_chp out of range [0, 1]: {inputs.lf_chp}")
    if not 0.0 <= inputs.lf_gb <= 1.0:
        raise ValueError(f"lf_gb out of range [0, 1]: {inputs.lf_gb}")
    if inputs.lf_hp not in (0, 1):
        raise ValueError(f"lf_hp must be exactly 0 or 1: {inputs.lf_hp}")
    if not 20.0 <= inputs.t_source <= 50.0:
        raise ValueError(f"t_source out of range [20, 50] degC: {inputs.t_source}")
    if not 0.0 <= inputs.p_dh_req <= ratings.dh_max:
        raise ValueError(
            f"p_dh_req out of range [0, {ratings.dh_max}] W: {inputs.p_dh_req}"
        )


def evaluate_units(inputs: PlantInputs, ratings: UnitRatings) -> PlantOutputs:
    """Map setpoints to unit outputs through the linear plant models.

    Each output is the load factor times the unit's rating; district heating
    delivers exactly the requested power. The source temperature is validated
    but does not modulate the heat pump in this baseline.
    """
    validate_inputs(inputs, ratings)
    return PlantOutputs(
        p_h_chp=inputs.lf_chp * ratings.chp_heat_max,
        p_e_chp=inputs.lf_chp * ratings.chp_el_max,
        m_chp=inputs.lf_chp * ratings.chp_gas_max,
        p_h_gb=inputs.lf_gb * ratings.gb_heat_max,
        m_gb=inputs.lf_gb * ratings.gb_gas_max,
        p_h_hp=inputs.lf_hp * ratings.hp_heat_max,
        p_e_hp=inputs.lf_hp * ratings.hp_el_max,
        p_dh=inputs.p_dh_req,
    )


def tes_step(state: TesState, p_charge: float, p_demand: float, dt: float) -> TesState:
    """Advance the storage by one interval of net charging.

    Lossless integrator: q' = q + (p_charge - p_demand) * dt / 3600 in Wh.
    The result is intentionally not clamped to the physical temperature band.
    """
    if dt <= 0:
        raise ValueError(f"dt must be strictly positive: {dt}")
    if p_charge < 0 or p_demand < 0:
        raise ValueError("p_charge and p_demand must be non-negative")
    q_next = state.q_tes + (p_charge - p_demand) * dt / 3600.0
    return TesState(
        t_tes=q_next / state.heat_capacity,
        q_tes=q_next,
        heat_capacity=state.heat_capacity,
    )


def tes_energy(t_tes: float, ratings: UnitRatings) -> float:
    """Stored energy in Wh for a storage temperature in degC."""
    return ratings.tes_heat_capacity * t_tes
