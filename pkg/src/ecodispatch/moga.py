"""Archive-based multi-objective genetic algorithm with pluggable problems.

The engine keeps every non-dominated solution found so far in an unbounded
Pareto archive (validity is an attribute of a solution, not an admission
filter), draws parents uniformly from the archive, and applies single-point
crossover and random-resetting mutation over finite integer gene domains.
A fixed seed makes the whole run reproducible, including archive insertion
order.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Iterator, Protocol, Sequence

import numpy as np

__all__ = [
    "MogaConfig",
    "ParetoArchive",
    "Problem",
    "Listener",
    "GenerationStats",
    "EvaluationError",
    "dominates",
    "select_parents",
    "single_point_crossover",
    "random_reset_mutation",
    "run",
]

Genome = tuple[int, ...]


class Problem(Protocol):
    """What the engine needs from a problem definition."""

    domains: Sequence[int]

    def evaluate(self, genome: Genome) -> Any:
        """Return an object exposing `genome` and `objective_values`."""


@dataclass(frozen=True)
class MogaConfig:
    """Operator rates, population size and termination criteria."""

    population_size: int = 100
    crossover_rate: float = 0.5
    mutation_rate: float = 0.05
    max_generations: int | None = None
    max_seconds: float | None = None
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.population_size < 1:
            raise ValueError("population_size must be at least 1")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError("crossover_rate must be in [0, 1]")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must be in [0, 1]")
        if self.max_generations is None and self.max_seconds is None:
            raise ValueError("set max_generations and/or max_seconds")


class EvaluationError(RuntimeError):
    """An objective evaluation failed; carries generation/offspring context."""


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True iff `a` is no worse than `b` everywhere and better somewhere."""
    if len(a) != len(b):
        raise ValueError(f"objective arity mismatch: {len(a)} vs {len(b)}")
    better = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            better = True
    return better


class ParetoArchive:
    """Unbounded set of mutually non-dominated solutions, insertion-ordered."""

    def __init__(self) -> None:
        self._members: list[Any] = []
        self._objectives = np.empty((0, 0))
        self._genomes: set[Genome] = set()

    def __len__(self) -> int:
        return len(self._members)

    def __iter__(self) -> Iterator[Any]:
        return iter(self._members)

    @property
    def members(self) -> tuple[Any, ...]:
        return tuple(self._members)

    def objective_matrix(self) -> np.ndarray:
        return self._objectives.copy()

    def insert(self, candidate: Any) -> bool:
        """Add unless dominated or a genome duplicate; evict the dominated.

        Returns True when the candidate entered the archive.
        """
        genome = tuple(candidate.genome) if candidate.genome is not None else None
        if genome is not None and genome in self._genomes:
            return False
        obj = np.asarray(candidate.objective_values, dtype=float)
        if self._members:
            m = self._objectives
            if m.shape[1] != obj.shape[0]:
                raise ValueError("objective arity differs from archive members")
            le = m <= obj
            if bool((le.all(axis=1) & (m < obj).any(axis=1)).any()):
                return False
            ge = m >= obj
            dominated = ge.all(axis=1) & (m > obj).any(axis=1)
            if dominated.any():
                keep = ~dominated
                for member in (self._members[i]
                               for i in np.flatnonzero(dominated)):
                    g = member.genome
                    if g is not None:
                        self._genomes.discard(tuple(g))
                self._members = [mem for mem, k in zip(self._members, keep) if k]
                self._objectives = self._objectives[keep]
        else:
            self._objectives = np.empty((0, obj.shape[0]))
        self._members.append(candidate)
        self._objectives = np.vstack((self._objectives, obj[None, :]))
        if genome is not None:
            self._genomes.add(genome)
        return True


def select_parents(archive: ParetoArchive, rng: random.Random) -> tuple[Any, Any]:
    """Two members drawn uniformly at random with replacement."""
    if len(archive) == 0:
        raise ValueError("cannot select parents from an empty archive")
    members = archive._members
    return (members[rng.randrange(len(members))],
            members[rng.randrange(len(members))])


def single_point_crossover(
    p1: Genome, p2: Genome, rng: random.Random, crossover_rate: float,
) -> tuple[Genome, Genome]:
    """Swap tails after a uniform cut with probability `crossover_rate`."""
    if len(p1) != len(p2):
        raise ValueError(f"parent lengths differ: {len(p1)} vs {len(p2)}")
    if len(p1) < 2 or rng.random() >= crossover_rate:
        return tuple(p1), tuple(p2)
    cut = rng.randrange(1, len(p1))
    return p1[:cut] + p2[cut:], p2[:cut] + p1[cut:]


def random_reset_mutation(
    genome: Genome, domains: Sequence[int], rng: random.Random,
    mutation_rate: float,
) -> Genome:
    """Independently reset each gene to a uniform draw from its full domain.

    Pure resetting: the draw may re-select the current value.
    """
    return tuple(
        rng.randrange(domains[k]) if rng.random() < mutation_rate else gene
        for k, gene in enumerate(genome)
    )


@dataclass(frozen=True)
class GenerationStats:
    """Snapshot statistics passed to listeners after each generation."""

    generation: int
    evaluations: int
    archive_size: int
    min_cost: float
    min_co2: float
    valid_count: int


class Listener:
    """Callbacks fired per generation and at termination; defaults are no-ops."""

    def generation_finished(self, generation: int, evaluations: int,
                            archive: ParetoArchive) -> None:
        pass

    def terminated(self, archive: ParetoArchive) -> None:
        pass


def archive_stats(generation: int, evaluations: int,
                  archive: ParetoArchive) -> GenerationStats:
    """Summarize the archive assuming (cost, co2, ...) objective layout."""
    objs = archive._objectives
    valid = sum(1 for m in archive if getattr(m, "valid", False))
    return GenerationStats(
        generation=generation,
        evaluations=evaluations,
        archive_size=len(archive),
        min_cost=float(objs[:, 0].min()) if len(archive) else float("nan"),
        min_co2=float(objs[:, 1].min()) if len(archive) else float("nan"),
        valid_count=valid,
    )


class StatsRecorder(Listener):
    """Collects per-generation statistics rows for CSV export."""

    def __init__(self) -> None:
        self.rows: list[GenerationStats] = []

    def generation_finished(self, generation: int, evaluations: int,
                            archive: ParetoArchive) -> None:
        self.rows.append(archive_stats(generation, evaluations, archive))


def run(
    problem: Problem,
    config: MogaConfig,
    listeners: Iterable[Listener] = (),
    map_fn: Callable = map,
) -> ParetoArchive:
    """Evolve the archive until a termination criterion fires.

    Generation 0 is a uniform-random population; each later generation draws
    parents from the archive, recombines, mutates, and inserts the evaluated
    offspring in index order, so a parallel `map_fn` cannot change results.
    """
    listeners = list(listeners)
    rng = random.Random(config.rng_seed)
    domains = tuple(problem.domains)
    archive = ParetoArchive()
    started = time.monotonic()
    evaluations = 0

    def evaluate_all(genomes: list[Genome], generation: int) -> list[Any]:
        try:
            return list(map_fn(problem.evaluate, genomes))
        except Exception as exc:
            raise EvaluationError(
                f"evaluation failed in generation {generation}: {exc}"
            ) from exc

    initial = [tuple(rng.randrange(d) for d in domains)
               for _ in range(config.population_size)]
    for solution in evaluate_all(initial, 0):
        archive.insert(solution)
        evaluations += 1
    for listener in listeners:
        listener.generation_finished(0, evaluations, archive)

    generation = 0
    while True:
        if config.max_generations is not None and generation >= config.max_generations:
            break
        if config.max_seconds is not None and \
                time.monotonic() - started >= config.max_seconds:
            break
        generation += 1
        offspring: list[Genome] = []
        while len(offspring) < config.population_size:
            a, b = select_parents(archive, rng)
            c1, c2 = single_point_crossover(tuple(a.genome), tuple(b.genome),
                                            rng, config.crossover_rate)
            offspring.append(random_reset_mutation(c1, domains, rng,
                                                   config.mutation_rate))
            if len(offspring) < config.population_size:
                offspring.append(random_reset_mutation(c2, domains, rng,
                                                       config.mutation_rate))
        for solution in evaluate_all(offspring, generation):
            archive.insert(solution)
            evaluations += 1
        for listener in listeners:
            listener.generation_finished(generation, evaluations, archive)

    for listener in listeners:
        listener.terminated(archive)
    return archive
