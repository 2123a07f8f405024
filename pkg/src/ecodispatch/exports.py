"""CSV export of fronts, generation statistics, comparisons and episodes.

Float cells use repr formatting (shortest round-trip), so identical runs
export byte-identical files regardless of which entry point produced them.
"""

from __future__ import annotations

import io
from typing import Iterable

from .decisions import StrategyComparison
from .dispatch import EvaluatedSolution
from .loop import EpisodeLog
from .moga import GenerationStats

__all__ = [
    "front_csv",
    "generations_csv",
    "comparison_csv",
    "episode_csv",
]


def _fmt(value: float) -> str:
    return repr(float(value))


def front_csv(archive: Iterable[EvaluatedSolution]) -> str:
    """One row per archive member: objectives, validity flag, genome."""
    out = io.StringIO()
    out.write("cost_eur,co2_kg,v_el,v_tes,v_end,valid,genome\r\n")
    for member in archive:
        o = member.objectives
        genome = "" if member.genome is None \
            else " ".join(str(g) for g in member.genome)
        out.write(f"{_fmt(o.cost)},{_fmt(o.co2)},{o.v_el},{o.v_tes},"
                  f"{_fmt(o.v_end)},{int(member.valid)},{genome}\r\n")
    return out.getvalue()


def generations_csv(rows: Iterable[GenerationStats]) -> str:
    """Listener statistics in generation order."""
    out = io.StringIO()
    out.write("generation,evaluations,archive_size,min_cost,min_co2,valid_count\r\n")
    for r in rows:
        out.write(f"{r.generation},{r.evaluations},{r.archive_size},"
                  f"{_fmt(r.min_cost)},{_fmt(r.min_co2)},{r.valid_count}\r\n")
    return out.getvalue()


def comparison_csv(comparison: StrategyComparison | None) -> str:
    """Strategy comparison rows; header only when no valid solution exists."""
    out = io.StringIO()
    out.write("strategy,co2_kg,cost_eur,co2_index,cost_index\r\n")
    if comparison is not None:
        for row in comparison.rows:
            out.write(f"{row.strategy.value},{_fmt(row.co2_kg)},"
                      f"{_fmt(row.cost_eur)},{_fmt(row.co2_index)},"
                      f"{_fmt(row.cost_index)}\r\n")
    return out.getvalue()


def episode_csv(log: EpisodeLog) -> str:
    """One row per actuated instant with setpoints, TES state and cashflows."""
    out = io.StringIO()
    out.write("instant,cycle,fallback,lf_chp,lf_gb,hp,p_dh_req,"
              "t_tes,cost_eur,co2_kg\r\n")
    for record in log.records:
        traj = record.realized
        for k, inputs in enumerate(record.setpoints):
            out.write(
                f"{record.start_instant + k},{record.cycle},"
                f"{int(record.fallback)},{_fmt(inputs.lf_chp)},"
                f"{_fmt(inputs.lf_gb)},{int(inputs.lf_hp)},"
                f"{_fmt(inputs.p_dh_req)},{_fmt(traj.t_tes[k])},"
                f"{_fmt(traj.cost_per_instant[k])},"
                f"{_fmt(traj.co2_per_instant[k])}\r\n"
            )
    return out.getvalue()
