"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. The reference-value regression is exact arithmetic; the behavioral
criteria run on synthetic desk-scale instances with pinned tolerances.
"""

from __future__ import annotations

import itertools
import random
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import constant_forecasts
from ecodispatch import moga
from ecodispatch.decisions import (DecisionStrategy, compare_strategies,
                                   decide, filter_valid)
from ecodispatch.dispatch import (DecisionGrid, DispatchProblem,
                                  EconomicParams, EvaluatedSolution,
                                  ObjectiveVector, Schedule, eval_co2,
                                  eval_cost, evaluate, simulate)
from ecodispatch.loop import Emulator, LoopConfig
from ecodispatch.moga import MogaConfig, ParetoArchive, dominates
from ecodispatch.plant import TesState, UnitRatings, tes_step

RATINGS = UnitRatings()
PARAMS = EconomicParams()


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL")
        raise
    print(f"ACCEPTANCE {name}: PASS")


def random_genome(domains, rng):
    return tuple(rng.randrange(d) for d in domains)


def test_strategy_comparison_regression():
    """Reference comparison values reproduce exactly at the stated tolerances."""
    with criterion("strategy-comparison-regression"):
        front = [
            EvaluatedSolution(ObjectiveVector(68134.61, 126396.19, 0, 0, 0.0),
                              schedule=Schedule.zeros(1)),
            EvaluatedSolution(ObjectiveVector(67464.70, 136423.81, 0, 0, 0.0),
                              schedule=Schedule.zeros(1)),
            EvaluatedSolution(ObjectiveVector(67376.72, 142505.34, 0, 0, 0.0),
                              schedule=Schedule.zeros(1)),
        ]
        comparison = compare_strategies(front)
        co2_idx = [row.co2_index for row in comparison.rows]
        cost_idx = [row.cost_index for row in comparison.rows]
        assert co2_idx == pytest.approx([100.0, 107.93, 112.74], abs=0.01)
        assert cost_idx == pytest.approx([100.0, 99.02, 98.89], abs=0.01)
        assert comparison.cost_saving_eur == 757.89   # exact to the cent
        assert comparison.co2_increase_kg == 16109.15  # exact to the centigram
        assert comparison.cost_saving_pct == pytest.approx(1.11, abs=0.01)
        assert comparison.co2_increase_pct == pytest.approx(12.74, abs=0.01)


def test_brute_force_pareto_oracle():
    """MOGA archive equals the exhaustively enumerated 5-objective front."""
    with criterion("brute-force-pareto-oracle"):
        grid = DecisionGrid(h=2, c_r=1.0, g_r=0.5, d_r=3e6, d_max=6e6)
        fs = constant_forecasts(2, heat_demand=4e6, el_demand=11.95e6)
        oracle_problem = DispatchProblem(grid, fs, PARAMS, RATINGS)

        domains = oracle_problem.domains
        all_genomes = list(itertools.product(*[range(d) for d in domains]))
        assert len(all_genomes) == 1296  # 36 options per instant, squared

        vectors = [oracle_problem.evaluate(g).objective_values
                   for g in all_genomes]
        # independent front computation: plain pairwise dominance filter
        closure_genomes = set()
        front_vectors = set()
        for genome, vec in zip(all_genomes, vectors):
            if not any(dominates(other, vec) for other in vectors):
                closure_genomes.add(genome)
                front_vectors.add(vec)

        class FrontCoverage(moga.Listener):
            """Tracks how much of the exact front the archive holds."""

            def __init__(self):
                self.counts: list[int] = []

            def generation_finished(self, generation, evaluations, archive):
                found = {m.objective_values for m in archive} & front_vectors
                self.counts.append(len(found))

        hits = 0
        for seed in range(10):
            problem = DispatchProblem(grid, fs, PARAMS, RATINGS)
            coverage = FrontCoverage()
            archive = moga.run(
                problem,
                MogaConfig(population_size=50, max_generations=200,
                           rng_seed=seed),
                listeners=(coverage,))
            got_vectors = {m.objective_values for m in archive}
            # every seed: archive within the non-dominated closure
            assert all(m.genome in closure_genomes for m in archive)
            # archive quality never regresses across generations
            assert all(a <= b for a, b in
                       zip(coverage.counts, coverage.counts[1:]))
            if got_vectors == front_vectors:
                hits += 1
        assert hits >= 9


def test_conservation_suite():
    """Energy bookkeeping, cashflow additivity, zero-price and validity checks."""
    with criterion("conservation-suite"):
        rng = random.Random(2024)
        grid = DecisionGrid(h=24)
        # electric demand near the cap so the grid constraint participates
        fs = constant_forecasts(24, el_demand=11.95e6)
        fs_free = constant_forecasts(24, el_price=0.0, gas_price=0.0,
                                     dh_price=0.0)
        params_free = EconomicParams(el_tariff=0.0)
        c_th = RATINGS.tes_heat_capacity

        for _ in range(1000):
            schedule = grid.decode(random_genome(grid.domains(), rng))
            traj = simulate(schedule, fs, PARAMS, RATINGS)

            # TES bookkeeping to 1e-9 relative
            net_wh = sum(
                (float(traj.p_h_chp[i] + traj.p_h_gb[i] + traj.p_h_hp[i]
                       + traj.p_dh[i]) - fs.heat_demand.values[i]) * 3600.0
                / 3600.0
                for i in range(24))
            q0 = c_th * PARAMS.t_init
            assert float(traj.q_tes[-1]) - q0 == pytest.approx(
                net_wh, rel=1e-9, abs=1e-6)

            # additivity to 1e-9 relative
            assert eval_cost(traj) == pytest.approx(
                sum(float(x) for x in traj.cost_per_instant), rel=1e-9,
                abs=1e-9)
            assert eval_co2(traj) == pytest.approx(
                sum(float(x) for x in traj.co2_per_instant), rel=1e-9,
                abs=1e-9)

            # zero prices (tariff included) mean zero cost, exactly
            free = simulate(schedule, fs_free, params_free, RATINGS)
            assert eval_cost(free) == 0.0

            # validity flag agrees with a direct constraint checker
            sol = evaluate(schedule, fs, PARAMS, RATINGS)
            state = TesState.at_temperature(PARAMS.t_init, RATINGS)
            v_el = v_tes = 0
            for i in range(24):
                heat = (schedule.c[i] * RATINGS.chp_heat_max
                        + schedule.g[i] * RATINGS.gb_heat_max
                        + schedule.hp[i] * RATINGS.hp_heat_max
                        + schedule.d[i])
                state = tes_step(state, heat, fs.heat_demand.values[i], 3600.0)
                if not PARAMS.t_tes_min <= state.t_tes <= PARAMS.t_tes_max:
                    v_tes += 1
                if fs.el_demand.values[i] + schedule.hp[i] * RATINGS.hp_el_max \
                        > PARAMS.grid_capacity:
                    v_el += 1
            v_end = max(0.0, PARAMS.t_init - state.t_tes)
            assert sol.valid == (v_el == 0 and v_tes == 0 and v_end == 0.0)


def test_dominance_and_archive_suite():
    """Dominance axioms plus archive non-domination over 10,000+ insertions."""
    with criterion("dominance-archive-suite"):
        rng = random.Random(9)

        # irreflexivity and antisymmetry over random vectors
        for _ in range(2000):
            a = tuple(float(rng.randint(0, 5)) for _ in range(5))
            b = tuple(float(rng.randint(0, 5)) for _ in range(5))
            assert not dominates(a, a)
            assert not (dominates(a, b) and dominates(b, a))

        class Item:
            __slots__ = ("genome", "objective_values")

            def __init__(self, genome, objective_values):
                self.genome = genome
                self.objective_values = objective_values

        def non_dominated(matrix: np.ndarray) -> bool:
            for i in range(matrix.shape[0]):
                le = (matrix <= matrix[i]).all(axis=1)
                lt = (matrix < matrix[i]).any(axis=1)
                le[i] = False
                if bool((le & lt).any()):
                    return False
            return True

        insertions = 0
        for sequence in range(20):
            archive = ParetoArchive()
            snapshots: list[dict] = []
            for step in range(500):
                vec = tuple(float(rng.randint(0, 8)) for _ in range(4))
                before = {m.genome: m.objective_values for m in archive}
                archive.insert(Item((sequence, step), vec))
                insertions += 1
                assert non_dominated(archive.objective_matrix())
                # elitism: members disappear only to a dominating candidate
                after = {m.genome for m in archive}
                for gone in set(before) - after:
                    assert dominates(vec, before[gone])
        assert insertions >= 10000


def test_determinism_cli_and_service(tmp_path):
    """Identical config + seed gives byte-identical front.csv on every path."""
    with criterion("determinism-cli-vs-service"):
        import yaml
        from fastapi.testclient import TestClient

        from ecodispatch.cli import main
        from ecodispatch.service import create_app

        doc = {
            "start": "2024-01-01T00:00:00Z",
            "forecasts": {
                "heat_demand": {"value": 1.5e6},
                "el_demand": {"value": 2.0e6},
                "el_price": {"value": 50.0},
                "gas_price": {"value": 30.0},
                "dh_price": {"value": 40.0},
                "co2_el": {"value": 150.0},
                "co2_dh": {"value": 120.0},
            },
            "grid": {"h": 6, "c_r": 1.0, "g_r": 0.5, "d_r": 5.0e5,
                     "d_max": 6.0e6},
            "moga": {"population_size": 16, "max_generations": 8,
                     "rng_seed": 99},
        }
        config_path = tmp_path / "run.yaml"
        config_path.write_text(yaml.safe_dump(doc), encoding="utf-8")

        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["optimize", str(config_path), "--out", str(out1)]) == 0
        assert main(["optimize", str(config_path), "--out", str(out2)]) == 0
        front1 = (out1 / "front.csv").read_bytes()
        assert front1 == (out2 / "front.csv").read_bytes()

        app = create_app(runs_dir=tmp_path / "runs")
        with TestClient(app) as client:
            run_id = client.post("/runs", json=doc).json()["run_id"]
            import time
            deadline = time.monotonic() + 60
            while time.monotonic() < deadline:
                if client.get(f"/runs/{run_id}").json()["status"] in \
                        ("terminated", "failed"):
                    break
                time.sleep(0.02)
            via_endpoint = client.get(f"/runs/{run_id}/front.csv").content
        via_disk = (tmp_path / "runs" / run_id / "front.csv").read_bytes()
        assert via_endpoint == front1
        assert via_disk == front1


def test_full_scale_smoke():
    """168 h instance: a valid solution, clean front, ordered strategies, 60 s."""
    with criterion("full-scale-smoke"):
        grid = DecisionGrid(h=168)  # reference resolutions
        fs = constant_forecasts(168, heat_demand=8e6, el_demand=2e6)
        problem = DispatchProblem(grid, fs, PARAMS, RATINGS)
        config = MogaConfig(population_size=100, crossover_rate=0.5,
                            mutation_rate=0.05, max_seconds=60.0, rng_seed=42)
        archive = moga.run(problem, config)

        valid = filter_valid(archive)
        assert len(valid) >= 1

        for a in valid:
            for b in valid:
                if a is not b:
                    assert not dominates(a.objective_values,
                                         b.objective_values)

        by_cost = decide(archive, DecisionStrategy.ELITIST_COST).objectives
        by_co2 = decide(archive, DecisionStrategy.ELITIST_CO2).objectives
        by_util = decide(archive, DecisionStrategy.UTILITARIAN).objectives
        assert by_cost.cost <= by_util.cost <= by_co2.cost
        assert by_co2.co2 <= by_util.co2 <= by_cost.co2


def test_closed_loop_consistency():
    """24 cycles: realized prefixes equal predictions; TES re-anchors exactly."""
    with criterion("closed-loop-consistency"):
        grid = DecisionGrid(h=12, c_r=1.0, g_r=0.5, d_r=5e5, d_max=6e6)
        config = LoopConfig(
            horizon=12, apply_count=1, episode_length=24,
            strategy=DecisionStrategy.UTILITARIAN, grid=grid,
            moga=MogaConfig(population_size=30, max_generations=15,
                            rng_seed=7))
        fs = constant_forecasts(36, heat_demand=3.0e6, el_demand=2e6)
        emulator = Emulator(config, fs, PARAMS, RATINGS)

        previous_end: TesState | None = None
        cycles = 0
        while not emulator.finished:
            plan = emulator.plan()
            chosen = decide(plan.archive, config.strategy)
            predicted = chosen.trajectory
            record = emulator.actuate_solution(chosen, epoch=plan.epoch)
            n = len(record.setpoints)

            # actuated prefix equals the prediction exactly
            assert np.array_equal(record.realized.t_tes, predicted.t_tes[:n])
            assert np.array_equal(record.realized.q_tes, predicted.q_tes[:n])
            assert np.array_equal(record.realized.cost_per_instant,
                                  predicted.cost_per_instant[:n])
            assert np.array_equal(record.realized.co2_per_instant,
                                  predicted.co2_per_instant[:n])

            # re-anchoring: this cycle started at the previous realized end
            if previous_end is not None:
                assert record.tes_start.t_tes == previous_end.t_tes
                assert record.tes_start.q_tes == previous_end.q_tes
            previous_end = record.tes_end
            cycles += 1
        assert cycles == 24
        assert not any(r.fallback for r in emulator.records)
