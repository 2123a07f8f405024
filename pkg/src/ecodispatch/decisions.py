"""Strategy-based selection of one solution from the Pareto archive.

Invalid solutions are removed first; the elitist strategies pick the lowest
raw value in one economic dimension, while the utilitarian compromise sums
min-max-normalized cost and CO2 scores and takes the overall lowest. Ties
break deterministically by CO2, then cost, then insertion order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .dispatch import EvaluatedSolution

__all__ = [
    "DecisionStrategy",
    "StrategyRow",
    "StrategyComparison",
    "NoFeasibleScheduleError",
    "filter_valid",
    "normalize",
    "decide",
    "compare_strategies",
]


class DecisionStrategy(str, enum.Enum):
    """How to pick from the front: cheapest, cleanest, or a compromise."""

    ELITIST_COST = "elitist-cost"
    ELITIST_CO2 = "elitist-co2"
    UTILITARIAN = "utilitarian"


class NoFeasibleScheduleError(ValueError):
    """The archive holds no valid solution to decide between."""


def filter_valid(archive: Iterable[EvaluatedSolution]) -> list[EvaluatedSolution]:
    """Members with zero on all three constraint distances, in archive order."""
    return [s for s in archive if s.valid]


def normalize(solutions: Sequence[EvaluatedSolution]) -> list[tuple[float, float]]:
    """Min-max normalized (cost, co2) per solution over the given set.

    A degenerate objective (max equals min) maps to 0 for every solution.
    """
    if not solutions:
        raise ValueError("cannot normalize an empty solution set")
    costs = [s.objectives.cost for s in solutions]
    co2s = [s.objectives.co2 for s in solutions]

    def scaled(values: list[float]) -> list[float]:
        lo, hi = min(values), max(values)
        if hi == lo:
            return [0.0] * len(values)
        return [(v - lo) / (hi - lo) for v in values]

    return list(zip(scaled(costs), scaled(co2s)))


def decide(
    archive: Iterable[EvaluatedSolution],
    strategy: DecisionStrategy | str,
) -> EvaluatedSolution:
    """Apply one strategy to the valid members of the archive."""
    strategy = DecisionStrategy(strategy)
    valid = filter_valid(archive)
    if not valid:
        raise NoFeasibleScheduleError("no feasible schedule in the archive")

    if strategy is DecisionStrategy.ELITIST_COST:
        primary = [s.objectives.cost for s in valid]
    elif strategy is DecisionStrategy.ELITIST_CO2:
        primary = [s.objectives.co2 for s in valid]
    else:
        primary = [c + e for c, e in normalize(valid)]

    best = min(
        range(len(valid)),
        key=lambda i: (primary[i], valid[i].objectives.co2,
                       valid[i].objectives.cost, i),
    )
    return valid[best]


@dataclass(frozen=True)
class StrategyRow:
    """One comparison row; indices are percent of the elitist-CO2 baseline."""

    strategy: DecisionStrategy
    co2_kg: float
    cost_eur: float
    co2_index: float
    cost_index: float
    solution: EvaluatedSolution


@dataclass(frozen=True)
class StrategyComparison:
    """All three strategies side by side plus the cost/CO2 trade-off deltas."""

    rows: tuple[StrategyRow, ...]
    cost_saving_eur: float   # elitist-co2 cost minus elitist-cost cost
    cost_saving_pct: float
    co2_increase_kg: float   # elitist-cost CO2 minus elitist-co2 CO2
    co2_increase_pct: float


_COMPARISON_ORDER = (
    DecisionStrategy.ELITIST_CO2,
    DecisionStrategy.UTILITARIAN,
    DecisionStrategy.ELITIST_COST,
)


def compare_strategies(archive: Iterable[EvaluatedSolution]) -> StrategyComparison:
    """Decide under all three strategies and index them against elitist-CO2."""
    solutions = list(archive)
    chosen = {strategy: decide(solutions, strategy)
              for strategy in _COMPARISON_ORDER}
    base = chosen[DecisionStrategy.ELITIST_CO2].objectives
    rows = tuple(
        StrategyRow(
            strategy=strategy,
            co2_kg=sol.objectives.co2,
            cost_eur=sol.objectives.cost,
            co2_index=round(100.0 * sol.objectives.co2 / base.co2, 2),
            cost_index=round(100.0 * sol.objectives.cost / base.cost, 2),
            solution=sol,
        )
        for strategy, sol in ((s, chosen[s]) for s in _COMPARISON_ORDER)
    )
    cheap = chosen[DecisionStrategy.ELITIST_COST].objectives
    return StrategyComparison(
        rows=rows,
        cost_saving_eur=round(base.cost - cheap.cost, 2),
        cost_saving_pct=round(100.0 * (base.cost - cheap.cost) / base.cost, 2),
        co2_increase_kg=round(cheap.co2 - base.co2, 2),
        co2_increase_pct=round(100.0 * (cheap.co2 - base.co2) / base.co2, 2),
    )
