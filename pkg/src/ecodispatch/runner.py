"""Shared optimize/export pipeline behind the CLI and the HTTP service.

Both entry points funnel through `execute_run` and `write_run_outputs`, so a
given configuration and seed produces byte-identical artifacts no matter how
the run was launched.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

from . import moga
from .decisions import NoFeasibleScheduleError, StrategyComparison, compare_strategies
from .dispatch import DispatchProblem
from .exports import comparison_csv, front_csv, generations_csv
from .forecasts import ForecastSet, assemble_forecast_set
from .runconfig import RunConfig, load_forecast_sources

__all__ = ["RunResult", "StageError", "execute_run", "write_run_outputs"]


class StageError(RuntimeError):
    """Failure wrapped with the pipeline stage it happened in."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class RunResult:
    """Everything a finished optimization produced."""

    config: RunConfig
    forecasts: ForecastSet
    problem: DispatchProblem
    archive: moga.ParetoArchive
    stats: list[moga.GenerationStats]
    comparison: StrategyComparison | None

    @property
    def front_csv(self) -> str:
        return front_csv(self.archive)

    @property
    def generations_csv(self) -> str:
        return generations_csv(self.stats)

    @property
    def comparison_csv(self) -> str:
        return comparison_csv(self.comparison)


def execute_run(
    config: RunConfig,
    seed: int | None = None,
    extra_listeners: tuple[moga.Listener, ...] = (),
) -> RunResult:
    """Ingest forecasts, optimize, and compare strategies for one run."""
    if seed is not None:
        config = dataclasses.replace(
            config, moga=dataclasses.replace(config.moga, rng_seed=seed))

    try:
        sources = load_forecast_sources(config)
    except (OSError, ValueError) as exc:
        raise StageError("parse", exc) from exc

    try:
        forecasts = assemble_forecast_set(sources, config.grid.h, config.start)
        problem = DispatchProblem(config.grid, forecasts, config.params,
                                  config.ratings)
    except ValueError as exc:
        raise StageError("assemble", exc) from exc

    recorder = moga.StatsRecorder()
    try:
        archive = moga.run(problem, config.moga,
                           listeners=(recorder, *extra_listeners))
    except moga.EvaluationError as exc:
        raise StageError("optimize", exc) from exc

    try:
        comparison = compare_strategies(archive)
    except NoFeasibleScheduleError:
        comparison = None

    return RunResult(config=config, forecasts=forecasts, problem=problem,
                     archive=archive, stats=recorder.rows,
                     comparison=comparison)


def write_run_outputs(result: RunResult, out_dir: str | Path) -> dict[str, Path]:
    """Write front.csv, generations.csv and comparison.csv into `out_dir`."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        paths = {}
        for name, text in (("front.csv", result.front_csv),
                           ("generations.csv", result.generations_csv),
                           ("comparison.csv", result.comparison_csv)):
            path = out / name
            path.write_bytes(text.encode("utf-8"))
            paths[name] = path
        return paths
    except OSError as exc:
        raise StageError("export", exc) from exc
