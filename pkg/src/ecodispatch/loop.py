"""Closed-loop software-in-the-loop emulation with receding-horizon re-planning.

The emulator applies chosen setpoints to the same plant model the optimizer
scores against (the models coincide at this development stage), advances the
TES state, and re-optimizes over a shifted window whose end-temperature
target is re-anchored to the live TES temperature. In human-in-the-loop
mode the cycle suspends after planning until an external decision actuates
a solution; a monotonically increasing epoch detects stale actuations.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from . import moga
from .decisions import DecisionStrategy, NoFeasibleScheduleError, decide
from .dispatch import (DecisionGrid, DispatchProblem, EconomicParams,
                       EvaluatedSolution, ObjectiveVector, Schedule, Trajectory,
                       simulate)
from .forecasts import ForecastSet
from .plant import PlantInputs, TesState, UnitRatings, validate_inputs

__all__ = [
    "LoopConfig",
    "CycleRecord",
    "EpisodeLog",
    "StaleEpochError",
    "Emulator",
    "actuate",
    "run_episode",
]

CLOSED_LOOP = "closed-loop"
HUMAN_IN_THE_LOOP = "human-in-the-loop"


@dataclass(frozen=True)
class LoopConfig:
    """Receding-horizon loop settings plus the optimizer used per cycle."""

    horizon: int = 168
    apply_count: int = 1
    episode_length: int = 168  # instants actuated over the whole episode
    strategy: DecisionStrategy = DecisionStrategy.UTILITARIAN
    mode: str = CLOSED_LOOP
    replan_budget: float | None = None  # wall-clock cap per optimization, s
    grid: DecisionGrid | None = None    # defaults to DecisionGrid(h=horizon)
    moga: moga.MogaConfig = field(
        default_factory=lambda: moga.MogaConfig(max_generations=50))

    def __post_init__(self) -> None:
        if not 1 <= self.apply_count <= self.horizon:
            raise ValueError("apply_count must be in [1, horizon]")
        if self.episode_length < 1:
            raise ValueError("episode_length must be at least 1")
        if self.mode not in (CLOSED_LOOP, HUMAN_IN_THE_LOOP):
            raise ValueError(f"unknown mode: {self.mode}")
        if self.grid is None:
            object.__setattr__(self, "grid", DecisionGrid(h=self.horizon))
        elif self.grid.h != self.horizon:
            raise ValueError(f"grid.h {self.grid.h} != horizon {self.horizon}")
        if isinstance(self.strategy, str):
            object.__setattr__(self, "strategy",
                               DecisionStrategy(self.strategy))


@dataclass(frozen=True)
class CycleRecord:
    """What one plan/decide/actuate cycle predicted and realized."""

    cycle: int
    start_instant: int
    chosen: ObjectiveVector | None   # None when the fallback schedule ran
    fallback: bool
    setpoints: tuple[PlantInputs, ...]
    realized: Trajectory
    tes_start: TesState
    tes_end: TesState

    @property
    def realized_cost(self) -> float:
        return float(self.realized.cost_per_instant.sum())

    @property
    def realized_co2(self) -> float:
        return float(self.realized.co2_per_instant.sum())


@dataclass(frozen=True)
class EpisodeLog:
    """Per-cycle records of a finished episode."""

    records: tuple[CycleRecord, ...]

    @property
    def total_cost(self) -> float:
        return sum(r.realized_cost for r in self.records)

    @property
    def total_co2(self) -> float:
        return sum(r.realized_co2 for r in self.records)


class StaleEpochError(RuntimeError):
    """The emulator advanced since this plan was produced; re-plan required."""


@dataclass(frozen=True)
class PlanResult:
    """Outcome of one re-planning cycle, awaiting a decision."""

    cycle: int
    start_instant: int
    epoch: int
    archive: moga.ParetoArchive
    problem: DispatchProblem


def actuate(
    state: TesState,
    setpoints: Sequence[PlantInputs],
    forecasts: ForecastSet,
    params: EconomicParams,
    ratings: UnitRatings,
) -> tuple[TesState, Trajectory]:
    """Advance the plant by the given setpoints from `state`.

    Validation is atomic: every setpoint is checked before any state change.
    The same simulation semantics as the optimizer's objective model apply,
    so actuating a schedule prefix reproduces its predicted trajectory
    exactly.
    """
    if not setpoints:
        raise ValueError("no setpoints to actuate")
    for i, inputs in enumerate(setpoints):
        try:
            validate_inputs(inputs, ratings)
        except ValueError as exc:
            raise ValueError(f"setpoint {i} rejected: {exc}") from None
    schedule = Schedule.from_inputs(setpoints)
    trajectory = simulate(schedule, forecasts, params, ratings,
                          initial_state=state)
    end = TesState(t_tes=float(trajectory.t_tes[-1]),
                   q_tes=float(trajectory.q_tes[-1]),
                   heat_capacity=state.heat_capacity)
    return end, trajectory


class Emulator:
    """Serialized plant state machine driving plan/decide/actuate cycles."""

    def __init__(
        self,
        config: LoopConfig,
        forecasts: ForecastSet,
        params: EconomicParams,
        ratings: UnitRatings,
    ):
        needed = config.episode_length + config.horizon
        if len(forecasts) < needed:
            raise ValueError(
                f"forecasts cover {len(forecasts)} instants, episode needs "
                f"{needed} (episode_length + horizon)"
            )
        self.config = config
        self.forecasts = forecasts
        self.params = params
        self.ratings = ratings
        self.state = TesState.at_temperature(params.t_init, ratings)
        self.instant = 0      # next instant to actuate
        self.epoch = 0        # bumps on every actuation
        self.records: list[CycleRecord] = []
        self.pending: PlanResult | None = None
        self._carry: list[PlantInputs] = []  # unactuated tail of the last schedule

    @property
    def cycle(self) -> int:
        return len(self.records)

    @property
    def finished(self) -> bool:
        return self.instant >= self.config.episode_length

    def plan(self, listeners: Sequence[moga.Listener] = ()) -> PlanResult:
        """Optimize over [instant, instant + horizon) from the live TES state.

        The end-temperature target re-anchors to the current temperature so
        stored energy is never treated as free across cycles.
        """
        if self.finished:
            raise RuntimeError("episode finished; nothing left to plan")
        window = self.forecasts.window(self.instant, self.config.horizon)
        problem = DispatchProblem(
            self.config.grid, window,
            replace(self.params, t_init=self.state.t_tes),
            self.ratings, initial_state=self.state,
        )
        moga_config = self._cycle_moga_config()
        archive = moga.run(problem, moga_config, listeners=listeners)
        self.pending = PlanResult(
            cycle=self.cycle, start_instant=self.instant, epoch=self.epoch,
            archive=archive, problem=problem,
        )
        return self.pending

    def _cycle_moga_config(self) -> moga.MogaConfig:
        base = self.config.moga
        cfg = replace(base, rng_seed=base.rng_seed + 7919 * self.cycle)
        if self.config.replan_budget is not None:
            cap = self.config.replan_budget
            if cfg.max_seconds is None or cfg.max_seconds > cap:
                cfg = replace(cfg, max_seconds=cap)
        return cfg

    def actuate_solution(self, solution: EvaluatedSolution,
                         epoch: int | None = None) -> CycleRecord:
        """Apply the next instants of a chosen solution; stale epochs conflict."""
        if self.finished:
            raise RuntimeError("episode finished; nothing left to actuate")
        if epoch is not None and epoch != self.epoch:
            raise StaleEpochError(
                f"plan epoch {epoch} is stale, emulator is at epoch {self.epoch}"
            )
        if not solution.valid:
            raise ValueError("refusing to actuate an invalid solution")
        schedule = solution.schedule
        inputs = [schedule.inputs_at(i, self.params.t_source)
                  for i in range(len(schedule))]
        return self._apply(inputs, chosen=solution.objectives, fallback=False)

    def step_fallback(self) -> CycleRecord:
        """No feasible plan: carry forward the stale schedule (zeros if none)."""
        count = self._apply_count()
        inputs = list(self._carry)
        while len(inputs) < count:
            inputs.append(PlantInputs(t_source=self.params.t_source))
        return self._apply(inputs, chosen=None, fallback=True)

    def _apply_count(self) -> int:
        return min(self.config.apply_count,
                   self.config.episode_length - self.instant)

    def _apply(self, inputs: list[PlantInputs], chosen: ObjectiveVector | None,
               fallback: bool) -> CycleRecord:
        count = self._apply_count()
        head, tail = inputs[:count], inputs[count:]
        window = self.forecasts.window(self.instant, count)
        start_state = self.state
        end, trajectory = actuate(start_state, head, window,
                                  replace(self.params, t_init=start_state.t_tes),
                                  self.ratings)
        record = CycleRecord(
            cycle=self.cycle, start_instant=self.instant, chosen=chosen,
            fallback=fallback, setpoints=tuple(head), realized=trajectory,
            tes_start=start_state, tes_end=end,
        )
        self.records.append(record)
        self.state = end
        self.instant += count
        self.epoch += 1
        self.pending = None
        self._carry = tail
        return record

    def log(self) -> EpisodeLog:
        return EpisodeLog(records=tuple(self.records))


def run_episode(
    config: LoopConfig,
    forecasts: ForecastSet,
    params: EconomicParams,
    ratings: UnitRatings,
    decision_provider: Callable[[PlanResult], EvaluatedSolution] | None = None,
    listeners: Sequence[moga.Listener] = (),
) -> EpisodeLog:
    """Drive plan/decide/actuate cycles until the episode length is reached.

    Closed-loop mode decides with the configured strategy; a caller-supplied
    `decision_provider` substitutes for the human in human-in-the-loop mode.
    Cycles without a feasible solution fall back to the previous schedule's
    next instants and are flagged in the log.
    """
    if config.mode == HUMAN_IN_THE_LOOP and decision_provider is None:
        raise ValueError(
            "human-in-the-loop episodes need a decision_provider; "
            "drive an Emulator through the service for interactive use"
        )
    emulator = Emulator(config, forecasts, params, ratings)
    while not emulator.finished:
        plan = emulator.plan(listeners=listeners)
        try:
            if decision_provider is not None:
                solution = decision_provider(plan)
            else:
                solution = decide(plan.archive, config.strategy)
        except NoFeasibleScheduleError:
            emulator.step_fallback()
            continue
        emulator.actuate_solution(solution, epoch=plan.epoch)
    return emulator.log()
