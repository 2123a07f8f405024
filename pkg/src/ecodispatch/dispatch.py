"""Decision vector, plant simulation over the horizon, and objective scoring.

A schedule holds per-instant setpoints for the four units. Simulating it
yields a trajectory of unit outputs, TES states and per-instant cashflows
and emissions, from which the two economic objectives and three constraint
distances are scored. Everything here is a pure function of immutable
inputs, so evaluations can run concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .forecasts import ForecastSet
from .plant import PlantInputs, PlantOutputs, TesState, UnitRatings, tes_energy

__all__ = [
    "DecisionGrid",
    "Schedule",
    "EconomicParams",
    "Trajectory",
    "ObjectiveVector",
    "EvaluatedSolution",
    "DispatchProblem",
    "simulate",
    "eval_cost",
    "eval_co2",
    "eval_constraints",
    "evaluate",
]

HP_LEVELS = 2


def _level_count(span: float, step: float, name: str) -> int:
    levels = span / step
    if levels <= 0 or abs(levels - round(levels)) > 1e-9:
        raise ValueError(f"{name}: {span} is not an integer multiple of {step}")
    return int(round(levels)) + 1


@dataclass(frozen=True)
class DecisionGrid:
    """Discretization of the decision space; makes every gene domain finite."""

    h: int                 # number of instants in the schedule
    dt: float = 3600.0     # instant duration in seconds
    c_r: float = 1.0       # CHP load-factor resolution
    g_r: float = 0.05      # GB load-factor resolution
    d_r: float = 1.0e4     # DH request resolution, W
    d_max: float = 6.0e6   # DH request ceiling, W

    def __post_init__(self) -> None:
        if self.h <= 0:
            raise ValueError(f"h must be positive: {self.h}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive: {self.dt}")
        _level_count(1.0, self.c_r, "c_r")
        _level_count(1.0, self.g_r, "g_r")
        _level_count(self.d_max, self.d_r, "d_r")

    @property
    def c_levels(self) -> int:
        return _level_count(1.0, self.c_r, "c_r")

    @property
    def g_levels(self) -> int:
        return _level_count(1.0, self.g_r, "g_r")

    @property
    def d_levels(self) -> int:
        return _level_count(self.d_max, self.d_r, "d_r")

    def domains(self) -> tuple[int, ...]:
        """Per-gene cardinalities in schedule order: CHP, GB, HP, DH blocks."""
        return ((self.c_levels,) * self.h + (self.g_levels,) * self.h
                + (HP_LEVELS,) * self.h + (self.d_levels,) * self.h)

    def decode(self, genome: Sequence[int]) -> "Schedule":
        """Map gene indices onto grid values; valid by construction."""
        h = self.h
        if len(genome) != 4 * h:
            raise ValueError(f"genome length {len(genome)} != 4*h = {4 * h}")
        return Schedule(
            c=tuple(k * self.c_r for k in genome[0:h]),
            g=tuple(k * self.g_r for k in genome[h:2 * h]),
            hp=tuple(int(k) for k in genome[2 * h:3 * h]),
            d=tuple(k * self.d_r for k in genome[3 * h:4 * h]),
        )

    def encode(self, schedule: "Schedule") -> tuple[int, ...]:
        """Inverse of decode; raises if a setpoint is off the grid."""
        schedule.validate(self)
        return (
            tuple(int(round(v / self.c_r)) for v in schedule.c)
            + tuple(int(round(v / self.g_r)) for v in schedule.g)
            + tuple(int(v) for v in schedule.hp)
            + tuple(int(round(v / self.d_r)) for v in schedule.d)
        )


@dataclass(frozen=True)
class Schedule:
    """Per-instant setpoints for CHP, GB, HP and DH over the horizon."""

    c: tuple[float, ...]   # CHP load factors
    g: tuple[float, ...]   # GB load factors
    hp: tuple[int, ...]    # HP on/off
    d: tuple[float, ...]   # DH requests, W

    def __post_init__(self) -> None:
        n = len(self.c)
        if not (len(self.g) == len(self.hp) == len(self.d) == n):
            raise ValueError("schedule component lengths differ")

    def __len__(self) -> int:
        return len(self.c)

    def validate(self, grid: DecisionGrid) -> None:
        """Check bounds and grid divisibility of every setpoint."""
        if len(self) != grid.h:
            raise ValueError(f"schedule length {len(self)} != grid.h {grid.h}")
        for i in range(len(self)):
            _check_on_grid("c", i, self.c[i], 0.0, 1.0, grid.c_r)
            _check_on_grid("g", i, self.g[i], 0.0, 1.0, grid.g_r)
            if self.hp[i] not in (0, 1):
                raise ValueError(f"hp[{i}] must be 0 or 1: {self.hp[i]}")
            _check_on_grid("d", i, self.d[i], 0.0, grid.d_max, grid.d_r)

    def inputs_at(self, i: int, t_source: float = 20.0) -> PlantInputs:
        return PlantInputs(lf_chp=self.c[i], lf_gb=self.g[i],
                           lf_hp=self.hp[i], t_source=t_source,
                           p_dh_req=self.d[i])

    @classmethod
    def zeros(cls, h: int) -> "Schedule":
        return cls(c=(0.0,) * h, g=(0.0,) * h, hp=(0,) * h, d=(0.0,) * h)

    @classmethod
    def from_inputs(cls, inputs: Iterable[PlantInputs]) -> "Schedule":
        seq = list(inputs)
        return cls(
            c=tuple(x.lf_chp for x in seq),
            g=tuple(x.lf_gb for x in seq),
            hp=tuple(int(x.lf_hp) for x in seq),
            d=tuple(x.p_dh_req for x in seq),
        )


def _check_on_grid(name: str, i: int, value: float, lo: float, hi: float,
                   step: float) -> None:
    if not lo <= value <= hi:
        raise ValueError(f"{name}[{i}] out of range [{lo}, {hi}]: {value}")
    steps = value / step
    if abs(steps - round(steps)) > 1e-9:
        raise ValueError(f"{name}[{i}] not divisible by resolution {step}: {value}")


@dataclass(frozen=True)
class EconomicParams:
    """Tariffs, limits and TES targets used by the objectives."""

    grid_capacity: float = 12.0e6  # W
    el_tariff: float = 185.0       # EUR/MWh on consumed electricity
    gas_lhv: float = 0.0131        # MWh of fuel per kg of gas
    t_tes_min: float = 43.96       # degC
    t_tes_max: float = 79.84       # degC
    t_init: float = 50.0           # degC, also the end-temperature target
    t_source: float = 20.0         # degC

    def __post_init__(self) -> None:
        if self.grid_capacity <= 0:
            raise ValueError("grid_capacity must be positive")
        if self.gas_lhv <= 0:
            raise ValueError("gas_lhv must be positive")
        if not self.t_tes_min < self.t_tes_max:
            raise ValueError("t_tes_min must be below t_tes_max")


@dataclass(frozen=True)
class Trajectory:
    """Per-instant plant response, TES states, cashflows and emissions."""

    dt: float
    p_h_chp: np.ndarray   # W
    p_e_chp: np.ndarray   # W
    m_chp: np.ndarray     # kg/s
    p_h_gb: np.ndarray    # W
    m_gb: np.ndarray      # kg/s
    p_h_hp: np.ndarray    # W
    p_e_hp: np.ndarray    # W
    p_dh: np.ndarray      # W
    t_tes: np.ndarray     # degC after each instant
    q_tes: np.ndarray     # Wh after each instant
    cost_gas: np.ndarray  # EUR
    cost_el: np.ndarray   # EUR
    cost_dh: np.ndarray   # EUR
    income_el: np.ndarray  # EUR
    co2_gas: np.ndarray   # kg
    co2_el: np.ndarray    # kg
    co2_dh: np.ndarray    # kg

    def __len__(self) -> int:
        return len(self.t_tes)

    def outputs_at(self, i: int) -> PlantOutputs:
        return PlantOutputs(
            p_h_chp=float(self.p_h_chp[i]), p_e_chp=float(self.p_e_chp[i]),
            m_chp=float(self.m_chp[i]), p_h_gb=float(self.p_h_gb[i]),
            m_gb=float(self.m_gb[i]), p_h_hp=float(self.p_h_hp[i]),
            p_e_hp=float(self.p_e_hp[i]), p_dh=float(self.p_dh[i]),
        )

    def tes_state_at(self, i: int, ratings: UnitRatings) -> TesState:
        return TesState(t_tes=float(self.t_tes[i]), q_tes=float(self.q_tes[i]),
                        heat_capacity=ratings.tes_heat_capacity)

    @property
    def cost_per_instant(self) -> np.ndarray:
        return self.cost_gas + self.cost_el + self.cost_dh - self.income_el

    @property
    def co2_per_instant(self) -> np.ndarray:
        return self.co2_gas + self.co2_el + self.co2_dh


@dataclass(frozen=True)
class ObjectiveVector:
    """The five minimized scores: cost, CO2 and three constraint distances."""

    cost: float   # EUR
    co2: float    # kg
    v_el: int     # instants violating the grid-capacity constraint
    v_tes: int    # instants with TES temperature out of band
    v_end: float  # degC shortfall of the final TES temperature

    @property
    def valid(self) -> bool:
        return self.v_el == 0 and self.v_tes == 0 and self.v_end == 0.0

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.cost, self.co2, float(self.v_el), float(self.v_tes),
                self.v_end)


class EvaluatedSolution:
    """A schedule plus objective scores, validity and simulated trajectory.

    The trajectory (and, for genome-born solutions, the decoded schedule) is
    materialized lazily: evaluation is deterministic, so re-simulating on
    access reproduces it bit-for-bit while keeping archived solutions small.
    """

    __slots__ = ("objectives", "genome", "uid", "_schedule", "_trajectory", "_ctx")

    def __init__(
        self,
        objectives: ObjectiveVector,
        schedule: Schedule | None = None,
        trajectory: Trajectory | None = None,
        genome: tuple[int, ...] | None = None,
        uid: int | None = None,
        ctx: "DispatchProblem | None" = None,
    ):
        if schedule is None and (genome is None or ctx is None):
            raise ValueError("need either a schedule or a genome with its problem")
        self.objectives = objectives
        self.genome = genome
        self.uid = uid
        self._schedule = schedule
        self._trajectory = trajectory
        self._ctx = ctx

    @property
    def valid(self) -> bool:
        return self.objectives.valid

    @property
    def objective_values(self) -> tuple[float, ...]:
        return self.objectives.as_tuple()

    @property
    def schedule(self) -> Schedule:
        if self._schedule is None:
            self._schedule = self._ctx.grid.decode(self.genome)
        return self._schedule

    @property
    def trajectory(self) -> Trajectory:
        if self._trajectory is None:
            if self._ctx is None:
                raise ValueError("trajectory unavailable: no evaluation context")
            self._trajectory = simulate(
                self.schedule, self._ctx.forecasts, self._ctx.params,
                self._ctx.ratings, initial_state=self._ctx.initial_state,
            )
        return self._trajectory

    def __repr__(self) -> str:
        return (f"EvaluatedSolution(uid={self.uid}, objectives={self.objectives}, "
                f"valid={self.valid})")


def _simulate_arrays(
    c: np.ndarray, g: np.ndarray, hp: np.ndarray, d: np.ndarray,
    fc: "_ForecastArrays", params: EconomicParams, ratings: UnitRatings,
    dt: float, q0: float,
) -> Trajectory:
    p_h_chp = c * ratings.chp_heat_max
    p_e_chp = c * ratings.chp_el_max
    m_chp = c * ratings.chp_gas_max
    p_h_gb = g * ratings.gb_heat_max
    m_gb = g * ratings.gb_gas_max
    p_h_hp = hp * ratings.hp_heat_max
    p_e_hp = hp * ratings.hp_el_max
    p_dh = d

    charge = p_h_chp + p_h_gb + p_h_hp + p_dh
    # Same operation order as tes_step so chained states match it bit-for-bit.
    deltas = (charge - fc.heat_demand) * dt / 3600.0
    q = np.cumsum(np.concatenate(((q0,), deltas)))[1:]
    t = q / ratings.tes_heat_capacity

    hours = dt / 3600.0
    e_hp = p_e_hp * hours / 1e6          # MWh consumed by the HP
    e_chp_el = p_e_chp * hours / 1e6     # MWh exported by the CHP
    e_dh = p_dh * hours / 1e6            # MWh of district heat
    e_gas = (m_chp + m_gb) * dt * params.gas_lhv / 3600.0  # MWh of fuel

    return Trajectory(
        dt=dt,
        p_h_chp=p_h_chp, p_e_chp=p_e_chp, m_chp=m_chp,
        p_h_gb=p_h_gb, m_gb=m_gb, p_h_hp=p_h_hp, p_e_hp=p_e_hp, p_dh=p_dh,
        t_tes=t, q_tes=q,
        cost_gas=fc.gas_price * e_gas,
        cost_el=(fc.el_price + params.el_tariff) * e_hp,
        cost_dh=fc.dh_price * e_dh,
        income_el=fc.el_price * e_chp_el,
        co2_gas=fc.co2_gas * e_gas,
        co2_el=fc.co2_el * e_hp,
        co2_dh=fc.co2_dh * e_dh,
    )


class _ForecastArrays:
    """Forecast values as float arrays, truncated to the horizon."""

    __slots__ = ("heat_demand", "el_demand", "el_price", "gas_price",
                 "dh_price", "co2_el", "co2_dh", "co2_gas")

    def __init__(self, forecasts: ForecastSet, h: int):
        if len(forecasts) < h:
            raise ValueError(
                f"forecasts cover {len(forecasts)} instants, schedule needs {h}"
            )
        for name in self.__slots__:
            values = getattr(forecasts, name).values[:h]
            setattr(self, name, np.asarray(values, dtype=float))


def simulate(
    schedule: Schedule,
    forecasts: ForecastSet,
    params: EconomicParams,
    ratings: UnitRatings,
    initial_state: TesState | None = None,
) -> Trajectory:
    """Run the schedule through the plant over the horizon.

    The TES is charged with all unit heat plus district heat and discharged
    with the greenhouse heat demand; its state chains from `initial_state`
    (or from `params.t_init` when not given) without clamping.
    """
    h = len(schedule)
    fc = _ForecastArrays(forecasts, h)
    q0 = initial_state.q_tes if initial_state is not None \
        else tes_energy(params.t_init, ratings)
    dt = float(forecasts.heat_demand.resolution)
    return _simulate_arrays(
        np.asarray(schedule.c, dtype=float),
        np.asarray(schedule.g, dtype=float),
        np.asarray(schedule.hp, dtype=float),
        np.asarray(schedule.d, dtype=float),
        fc, params, ratings, dt, q0,
    )


def eval_cost(trajectory: Trajectory) -> float:
    """Total cost in EUR: gas + consumed electricity + district heat - export income."""
    return float(trajectory.cost_gas.sum() + trajectory.cost_el.sum()
                 + trajectory.cost_dh.sum() - trajectory.income_el.sum())


def eval_co2(trajectory: Trajectory) -> float:
    """Total emissions in kg; exported CHP electricity earns no credit."""
    return float(trajectory.co2_gas.sum() + trajectory.co2_el.sum()
                 + trajectory.co2_dh.sum())


def eval_constraints(
    trajectory: Trajectory,
    forecasts: ForecastSet,
    params: EconomicParams,
) -> tuple[int, int, float]:
    """Constraint distances: grid-capacity hours, TES band hours, end shortfall."""
    h = len(trajectory)
    el_demand = np.asarray(forecasts.el_demand.values[:h], dtype=float)
    v_el = int(np.count_nonzero(el_demand + trajectory.p_e_hp > params.grid_capacity))
    t = trajectory.t_tes
    v_tes = int(np.count_nonzero((t < params.t_tes_min) | (t > params.t_tes_max)))
    v_end = float(max(0.0, params.t_init - float(t[-1])))
    return v_el, v_tes, v_end


def evaluate(
    schedule: Schedule,
    forecasts: ForecastSet,
    params: EconomicParams,
    ratings: UnitRatings,
    initial_state: TesState | None = None,
) -> EvaluatedSolution:
    """Simulate and score a schedule; deterministic for fixed inputs."""
    trajectory = simulate(schedule, forecasts, params, ratings, initial_state)
    v_el, v_tes, v_end = eval_constraints(trajectory, forecasts, params)
    objectives = ObjectiveVector(
        cost=eval_cost(trajectory),
        co2=eval_co2(trajectory),
        v_el=v_el, v_tes=v_tes, v_end=v_end,
    )
    return EvaluatedSolution(objectives, schedule=schedule, trajectory=trajectory)


class DispatchProblem:
    """Binds a decision grid, forecasts and parameters into a MOGA problem.

    Genomes are integer index vectors over the grid's finite domains, so the
    decision-space constraints hold for every decodable genome. Evaluation
    assigns deterministic sequential uids.
    """

    def __init__(
        self,
        grid: DecisionGrid,
        forecasts: ForecastSet,
        params: EconomicParams,
        ratings: UnitRatings,
        initial_state: TesState | None = None,
        keep_trajectories: bool = False,
    ):
        self.grid = grid
        self.forecasts = forecasts
        self.params = params
        self.ratings = ratings
        self.initial_state = initial_state
        self.keep_trajectories = keep_trajectories
        if float(forecasts.heat_demand.resolution) != grid.dt:
            raise ValueError(
                f"grid.dt {grid.dt}s differs from forecast resolution "
                f"{forecasts.heat_demand.resolution}s"
            )
        self.domains = grid.domains()
        self._fc = _ForecastArrays(forecasts, grid.h)
        self._c_lut = np.arange(grid.c_levels, dtype=float) * grid.c_r
        self._g_lut = np.arange(grid.g_levels, dtype=float) * grid.g_r
        self._d_lut = np.arange(grid.d_levels, dtype=float) * grid.d_r
        self._q0 = (initial_state.q_tes if initial_state is not None
                    else tes_energy(params.t_init, ratings))
        self._evaluations = 0

    @property
    def evaluations(self) -> int:
        return self._evaluations

    def reanchored(self, state: TesState, forecasts: ForecastSet) -> "DispatchProblem":
        """Same problem with the TES target and initial state moved to `state`."""
        return DispatchProblem(
            self.grid, forecasts, replace(self.params, t_init=state.t_tes),
            self.ratings, initial_state=state,
            keep_trajectories=self.keep_trajectories,
        )

    def evaluate(self, genome: tuple[int, ...]) -> EvaluatedSolution:
        h = self.grid.h
        idx = np.asarray(genome, dtype=np.intp)
        c = self._c_lut[idx[0:h]]
        g = self._g_lut[idx[h:2 * h]]
        hp = idx[2 * h:3 * h].astype(float)
        d = self._d_lut[idx[3 * h:4 * h]]
        trajectory = _simulate_arrays(c, g, hp, d, self._fc, self.params,
                                      self.ratings, self.grid.dt, self._q0)
        el_demand = self._fc.el_demand
        v_el = int(np.count_nonzero(
            el_demand + trajectory.p_e_hp > self.params.grid_capacity))
        t = trajectory.t_tes
        v_tes = int(np.count_nonzero(
            (t < self.params.t_tes_min) | (t > self.params.t_tes_max)))
        v_end = float(max(0.0, self.params.t_init - float(t[-1])))
        objectives = ObjectiveVector(
            cost=eval_cost(trajectory), co2=eval_co2(trajectory),
            v_el=v_el, v_tes=v_tes, v_end=v_end,
        )
        uid = self._evaluations
        self._evaluations += 1
        return EvaluatedSolution(
            objectives,
            trajectory=trajectory if self.keep_trajectories else None,
            genome=tuple(genome), uid=uid, ctx=self,
        )
