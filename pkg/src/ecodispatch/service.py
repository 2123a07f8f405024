"""HTTP/JSON service exposing runs, fronts, decisions and emulator control.

The service is the boundary between the optimizer and the operator
interface: clients create optimization runs, monitor generation events,
explore the Pareto front, apply decision strategies, and -- for runs with a
loop section -- actuate chosen schedules against the emulator in
human-in-the-loop mode. Run records are immutable once terminated; re-plans
create child runs against the shared emulator, and a monotonically
increasing emulator epoch turns stale actuations into conflicts.
"""

from __future__ import annotations

import threading
import traceback
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml
from fastapi import Body, FastAPI, HTTPException, Response

from . import moga
from .decisions import (DecisionStrategy, NoFeasibleScheduleError,
                        compare_strategies, decide)
from .dispatch import EvaluatedSolution
from .exports import episode_csv, front_csv
from .loop import Emulator, StaleEpochError
from .runconfig import RunConfig, episode_horizon, ingest_forecasts
from .runner import RunResult, execute_run, write_run_outputs

__all__ = ["create_app"]


@dataclass
class RunRecord:
    """Lifecycle and artifacts of one optimization run."""

    run_id: str
    config: RunConfig
    config_doc: dict[str, Any]
    status: str = "pending"  # pending -> running -> terminated | failed
    error: str | None = None
    stats: list[moga.GenerationStats] = field(default_factory=list)
    result: RunResult | None = None
    archive: tuple[EvaluatedSolution, ...] = ()
    emulator_key: str | None = None   # root run owning the shared emulator
    plan_epoch: int | None = None     # emulator epoch this run's front targets
    parent: str | None = None

    def advance(self, status: str) -> None:
        order = ("pending", "running", "terminated", "failed")
        if self.status in ("terminated", "failed") or \
                order.index(status) < order.index(self.status):
            raise RuntimeError(f"status cannot move {self.status} -> {status}")
        self.status = status


class ServiceState:
    """Registry of runs and emulators behind one lock."""

    def __init__(self, runs_dir: Path | None):
        self.lock = threading.RLock()
        self.runs: dict[str, RunRecord] = {}
        self.emulators: dict[str, Emulator] = {}
        self.runs_dir = runs_dir
        self._next_id = 1

    def new_id(self) -> str:
        with self.lock:
            run_id = str(self._next_id)
            self._next_id += 1
            return run_id


def _solution_json(index: int, sol: EvaluatedSolution) -> dict[str, Any]:
    o = sol.objectives
    return {
        "id": index,
        "cost_eur": o.cost,
        "co2_kg": o.co2,
        "v_el": o.v_el,
        "v_tes": o.v_tes,
        "v_end": o.v_end,
        "valid": sol.valid,
    }


def _stats_json(s: moga.GenerationStats) -> dict[str, Any]:
    return {
        "generation": s.generation,
        "evaluations": s.evaluations,
        "archive_size": s.archive_size,
        "min_cost": s.min_cost,
        "min_co2": s.min_co2,
        "valid_count": s.valid_count,
    }


def create_app(runs_dir: Path | None = None) -> FastAPI:
    """Build the service; `runs_dir` persists run artifacts when given."""
    app = FastAPI(title="ecodispatch service")
    state = ServiceState(runs_dir)

    class EventRecorder(moga.Listener):
        def __init__(self, record: RunRecord):
            self.record = record

        def generation_finished(self, generation: int, evaluations: int,
                                archive: moga.ParetoArchive) -> None:
            stats = moga.archive_stats(generation, evaluations, archive)
            with state.lock:
                self.record.stats.append(stats)
                # live front snapshot; ids stabilize once the run terminates
                self.record.archive = archive.members

    def _get_run(run_id: str) -> RunRecord:
        with state.lock:
            record = state.runs.get(run_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id}")
        return record

    def _persist(record: RunRecord) -> None:
        if state.runs_dir is None:
            return
        out = state.runs_dir / record.run_id
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.yaml").write_text(
            yaml.safe_dump(record.config_doc, sort_keys=True), encoding="utf-8")
        if record.result is not None:
            write_run_outputs(record.result, out)
        else:
            (out / "front.csv").write_bytes(
                front_csv(record.archive).encode("utf-8"))

    def _fail(record: RunRecord, exc: BaseException) -> None:
        with state.lock:
            record.error = f"{exc}"
            if record.status != "terminated":  # terminal states stay terminal
                record.status = "failed"
        traceback.print_exc()

    def _optimize_worker(record: RunRecord) -> None:
        try:
            with state.lock:
                record.advance("running")
            result = execute_run(record.config,
                                 extra_listeners=(EventRecorder(record),))
            with state.lock:
                record.result = result
                record.archive = result.archive.members
                record.advance("terminated")
            _persist(record)
        except Exception as exc:  # noqa: BLE001 - reported via record
            _fail(record, exc)

    def _plan_worker(record: RunRecord, emulator: Emulator) -> None:
        try:
            with state.lock:
                record.advance("running")
            plan = emulator.plan(listeners=(EventRecorder(record),))
            with state.lock:
                record.archive = plan.archive.members
                record.plan_epoch = plan.epoch
                record.advance("terminated")
            _persist(record)
        except Exception as exc:  # noqa: BLE001 - reported via record
            _fail(record, exc)

    def _start_run(config: RunConfig, doc: dict[str, Any],
                   parent: str | None = None,
                   emulator_key: str | None = None) -> RunRecord:
        run_id = state.new_id()
        record = RunRecord(run_id=run_id, config=config, config_doc=doc,
                           parent=parent, emulator_key=emulator_key)
        if config.loop is not None and emulator_key is None:
            try:
                forecasts = ingest_forecasts(config, episode_horizon(config))
                emulator = Emulator(config.loop, forecasts, config.params,
                                    config.ratings)
            except (OSError, ValueError) as exc:
                raise HTTPException(status_code=422,
                                    detail=f"bad config: {exc}")
            record.emulator_key = run_id
            with state.lock:
                state.emulators[run_id] = emulator

        with state.lock:
            state.runs[run_id] = record
        if record.emulator_key is not None:
            emulator = state.emulators[record.emulator_key]
            worker = threading.Thread(target=_plan_worker,
                                      args=(record, emulator), daemon=True)
        else:
            worker = threading.Thread(target=_optimize_worker, args=(record,),
                                      daemon=True)
        worker.start()
        return record

    @app.post("/runs", status_code=201)
    def create_run(doc: dict[str, Any] = Body(...)) -> dict[str, Any]:
        doc = dict(doc)
        base_dir = Path(doc.pop("base_dir", "."))
        try:
            config = RunConfig.from_dict(doc, base_dir=base_dir)
        except (TypeError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=f"bad config: {exc}")
        record = _start_run(config, doc)
        return {"run_id": record.run_id, "status": record.status}

    @app.get("/runs")
    def list_runs() -> dict[str, Any]:
        with state.lock:
            return {"runs": [
                {"run_id": r.run_id, "status": r.status, "parent": r.parent}
                for r in state.runs.values()
            ]}

    @app.get("/runs/{run_id}")
    def run_status(run_id: str) -> dict[str, Any]:
        record = _get_run(run_id)
        with state.lock:
            return {
                "run_id": record.run_id,
                "status": record.status,
                "error": record.error,
                "parent": record.parent,
                "generations": [_stats_json(s) for s in record.stats],
                "archive_size": len(record.archive),
                "plan_epoch": record.plan_epoch,
                "has_emulator": record.emulator_key is not None,
            }

    @app.get("/runs/{run_id}/events")
    def run_events(run_id: str, since: int = 0) -> dict[str, Any]:
        record = _get_run(run_id)
        with state.lock:
            events = [_stats_json(s) for s in record.stats[since:]]
            return {"events": events, "next": since + len(events),
                    "status": record.status}

    @app.get("/runs/{run_id}/front")
    def run_front(run_id: str) -> dict[str, Any]:
        record = _get_run(run_id)
        with state.lock:
            members = record.archive
            status = record.status
            epoch = record.plan_epoch
        return {
            "run_id": run_id,
            "status": status,
            "epoch": epoch,
            "members": [_solution_json(i, s) for i, s in enumerate(members)],
        }

    @app.get("/runs/{run_id}/front.csv")
    def run_front_csv(run_id: str) -> Response:
        record = _get_run(run_id)
        with state.lock:
            members = record.archive
        return Response(content=front_csv(members), media_type="text/csv")

    @app.get("/runs/{run_id}/forecasts")
    def run_forecasts(run_id: str) -> dict[str, Any]:
        record = _get_run(run_id)
        try:
            forecasts = ingest_forecasts(record.config,
                                         episode_horizon(record.config))
        except (OSError, ValueError) as exc:
            raise HTTPException(status_code=409, detail=f"{exc}")
        return {
            "start": forecasts.start.isoformat(),
            "resolution_s": forecasts.heat_demand.resolution,
            "signals": {
                name: list(getattr(forecasts, name).values)
                for name in ("heat_demand", "el_demand", "el_price",
                             "gas_price", "dh_price", "co2_el", "co2_dh",
                             "co2_gas")
            },
        }

    def _terminated_archive(record: RunRecord) -> tuple[EvaluatedSolution, ...]:
        with state.lock:
            status = record.status
            members = record.archive
        if status != "terminated":
            raise HTTPException(
                status_code=409,
                detail={"reason": "run-not-terminated", "status": status})
        return members

    @app.post("/runs/{run_id}/decision")
    def run_decision(run_id: str,
                     body: dict[str, Any] = Body(...)) -> dict[str, Any]:
        record = _get_run(run_id)
        members = _terminated_archive(record)
        try:
            strategy = DecisionStrategy(body.get("strategy", "utilitarian"))
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=f"{exc}")
        try:
            solution = decide(members, strategy)
        except NoFeasibleScheduleError as exc:
            raise HTTPException(
                status_code=409,
                detail={"reason": "no-feasible-schedule", "message": str(exc)})
        index = members.index(solution)
        schedule = solution.schedule
        trajectory = solution.trajectory
        params = record.config.params
        return {
            "run_id": run_id,
            "strategy": strategy.value,
            "solution": _solution_json(index, solution),
            "epoch": record.plan_epoch,
            "schedule": {
                "c": list(schedule.c),
                "g": list(schedule.g),
                "hp": list(schedule.hp),
                "d": list(schedule.d),
            },
            "trajectory": {
                "t_tes": [float(x) for x in trajectory.t_tes],
                "cost_eur": [float(x) for x in trajectory.cost_per_instant],
                "co2_kg": [float(x) for x in trajectory.co2_per_instant],
            },
            "tes_band": [params.t_tes_min, params.t_tes_max],
        }

    @app.get("/runs/{run_id}/comparison")
    def run_comparison(run_id: str) -> dict[str, Any]:
        record = _get_run(run_id)
        members = _terminated_archive(record)
        try:
            comparison = compare_strategies(members)
        except NoFeasibleScheduleError as exc:
            raise HTTPException(
                status_code=409,
                detail={"reason": "no-feasible-schedule", "message": str(exc)})
        return {
            "rows": [
                {
                    "strategy": row.strategy.value,
                    "co2_kg": row.co2_kg,
                    "cost_eur": row.cost_eur,
                    "co2_index": row.co2_index,
                    "cost_index": row.cost_index,
                    "solution_id": members.index(row.solution),
                }
                for row in comparison.rows
            ],
            "cost_saving_eur": comparison.cost_saving_eur,
            "cost_saving_pct": comparison.cost_saving_pct,
            "co2_increase_kg": comparison.co2_increase_kg,
            "co2_increase_pct": comparison.co2_increase_pct,
        }

    def _get_emulator(record: RunRecord) -> Emulator:
        if record.emulator_key is None:
            raise HTTPException(
                status_code=409,
                detail={"reason": "no-emulator",
                        "message": "run has no loop section"})
        with state.lock:
            return state.emulators[record.emulator_key]

    @app.post("/runs/{run_id}/actuate")
    def run_actuate(run_id: str,
                    body: dict[str, Any] = Body(default={})) -> dict[str, Any]:
        record = _get_run(run_id)
        members = _terminated_archive(record)
        emulator = _get_emulator(record)
        solution_id = body.get("solution_id")
        if solution_id is None or not 0 <= int(solution_id) < len(members):
            raise HTTPException(status_code=422,
                                detail=f"unknown solution_id: {solution_id}")
        solution = members[int(solution_id)]
        epoch = body.get("epoch", record.plan_epoch)
        with state.lock:
            try:
                if record.plan_epoch != emulator.epoch:
                    raise StaleEpochError(
                        f"plan epoch {record.plan_epoch} is stale, emulator "
                        f"is at epoch {emulator.epoch}")
                emulator.actuate_solution(solution, epoch=int(epoch))
            except StaleEpochError as exc:
                raise HTTPException(
                    status_code=409,
                    detail={"reason": "stale-epoch", "message": str(exc),
                            "epoch": emulator.epoch})
            except ValueError as exc:
                raise HTTPException(
                    status_code=409,
                    detail={"reason": "invalid-solution", "message": str(exc)})
            except RuntimeError as exc:
                raise HTTPException(
                    status_code=409,
                    detail={"reason": "episode-finished", "message": str(exc)})
            return _emulator_json(emulator)

    @app.post("/runs/{run_id}/replan", status_code=201)
    def run_replan(run_id: str) -> dict[str, Any]:
        record = _get_run(run_id)
        emulator = _get_emulator(record)
        if emulator.finished:
            raise HTTPException(
                status_code=409,
                detail={"reason": "episode-finished",
                        "message": "episode length reached"})
        child = _start_run(record.config, record.config_doc, parent=run_id,
                           emulator_key=record.emulator_key)
        return {"run_id": child.run_id, "status": child.status}

    @app.get("/runs/{run_id}/emulator")
    def run_emulator(run_id: str) -> dict[str, Any]:
        record = _get_run(run_id)
        emulator = _get_emulator(record)
        with state.lock:
            return _emulator_json(emulator)

    @app.get("/runs/{run_id}/emulator/episode.csv")
    def run_episode_csv(run_id: str) -> Response:
        record = _get_run(run_id)
        emulator = _get_emulator(record)
        with state.lock:
            content = episode_csv(emulator.log())
        return Response(content=content, media_type="text/csv")

    def _emulator_json(emulator: Emulator) -> dict[str, Any]:
        return {
            "t_tes": emulator.state.t_tes,
            "q_tes": emulator.state.q_tes,
            "instant": emulator.instant,
            "epoch": emulator.epoch,
            "cycle": emulator.cycle,
            "finished": emulator.finished,
            "records": [
                {
                    "cycle": r.cycle,
                    "start_instant": r.start_instant,
                    "fallback": r.fallback,
                    "cost_eur": r.realized_cost,
                    "co2_kg": r.realized_co2,
                    "t_tes_end": r.tes_end.t_tes,
                }
                for r in emulator.records
            ],
        }

    return app


app = create_app()
