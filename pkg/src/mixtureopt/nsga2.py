"""From-scratch NSGA-II over the mixture simplex.

A genome is a vector of K nonnegative genes; normalizing it onto the simplex
(:func:`simplex_repair`) yields the mixture ratio that the objectives see, so
the alpha_i = 0 corners stay reachable.  Selection is the classic elitist
loop: binary tournament on (rank, crowding), simulated binary crossover,
polynomial mutation, repair, and (mu + lambda) truncation by non-dominated
sorting.  The budget counts unique objective evaluations; genomes that repeat
after rounding are served from a memo and cost nothing.  The returned archive
is the non-dominated set over every evaluated candidate, not just the final
population.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .objectives import ObjectiveVector, alpha_key
from .policies import ConfigurationError
from .seeding import STREAM_OPTIMIZER, child_rng

# consecutive generations with no fresh evaluations before giving up on the
# budget (only reachable with degenerate operator settings)
STALL_LIMIT = 20


class NonFiniteRevenueError(RuntimeError):
    """The objective produced a non-finite negative revenue; the search cannot rank it."""


@dataclass(frozen=True)
class MooConfig:
    population_size: int = 20
    evaluation_budget: int = 1000
    crossover_prob: float = 0.9
    mutation_prob: float | None = None  # None -> 1 / n_vars
    sbx_eta: float = 15.0
    mutation_eta: float = 20.0
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ConfigurationError(
                f"population_size must be even and >= 4, got {self.population_size}"
            )
        if self.evaluation_budget < self.population_size:
            raise ConfigurationError("evaluation_budget must be >= population_size")
        for name in ("crossover_prob", "mutation_prob"):
            p = getattr(self, name)
            if p is not None and not 0.0 <= p <= 1.0:
                raise ConfigurationError(f"{name} must lie in [0, 1], got {p}")
        if self.sbx_eta <= 0 or self.mutation_eta <= 0:
            raise ConfigurationError("sbx_eta and mutation_eta must be positive")


@dataclass
class Individual:
    genes: np.ndarray
    alpha: np.ndarray
    objectives: ObjectiveVector
    rank: int = 0
    crowding: float = 0.0


@dataclass(frozen=True)
class ParetoPoint:
    alpha: tuple
    revenue: float
    ope_error: float


@dataclass
class Nsga2Result:
    population: list
    archive: list
    trials: list  # (alpha tuple, ObjectiveVector) per unique evaluation, in order

    @property
    def n_evaluations(self) -> int:
        return len(self.trials)


def dominates(u: ObjectiveVector, v: ObjectiveVector) -> bool:
    """Pareto dominance under minimization; +inf sentinels compare as worst."""
    if u.neg_revenue > v.neg_revenue or u.ope_error > v.ope_error:
        return False
    return u.neg_revenue < v.neg_revenue or u.ope_error < v.ope_error


def fast_non_dominated_sort(objectives) -> list:
    """Deb's front assignment: list of fronts, each a list of indices into ``objectives``."""
    n = len(objectives)
    dominated_by = [[] for _ in range(n)]
    domination_count = [0] * n
    fronts = [[]]
    for p in range(n):
        for q in range(n):
            if p == q:
                continue
            if dominates(objectives[p], objectives[q]):
                dominated_by[p].append(q)
            elif dominates(objectives[q], objectives[p]):
                domination_count[p] += 1
        if domination_count[p] == 0:
            fronts[0].append(p)
    i = 0
    while fronts[i]:
        nxt = []
        for p in fronts[i]:
            for q in dominated_by[p]:
                domination_count[q] -= 1
                if domination_count[q] == 0:
                    nxt.append(q)
        i += 1
        fronts.append(sorted(nxt))
    fronts.pop()
    return fronts


def crowding_distance(front_objectives) -> np.ndarray:
    """Crowding of one front: boundary points +inf, interior points summed
    normalized neighbor gaps; exact objective duplicates collapse to 0."""
    m = len(front_objectives)
    if m == 0:
        return np.empty(0)
    if m <= 2:
        return np.full(m, np.inf)
    vecs = np.array([[o.neg_revenue, o.ope_error] for o in front_objectives])
    dist = np.zeros(m)
    for col in range(vecs.shape[1]):
        vals = vecs[:, col]
        order = np.argsort(vals, kind="stable")
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        lo, hi = vals[order[0]], vals[order[-1]]
        if hi == lo or not (np.isfinite(lo) and np.isfinite(hi)):
            # zero span adds nothing; with an inf endpoint every finite gap
            # normalizes to zero anyway
            continue
        gaps = vals[order[2:]] - vals[order[:-2]]
        dist[order[1:-1]] += gaps / (hi - lo)
    counts = {}
    for row in map(tuple, vecs):
        counts[row] = counts.get(row, 0) + 1
    for i, row in enumerate(map(tuple, vecs)):
        if counts[row] > 1 and not np.isinf(dist[i]):
            dist[i] = 0.0
    return dist


def sbx_pair(x1: float, x2: float, u: float, eta: float) -> tuple:
    """Unclamped SBX blend of one gene pair; children average to the parent mean."""
    if u <= 0.5:
        beta = (2.0 * u) ** (1.0 / (eta + 1.0))
    else:
        beta = (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta + 1.0))
    mean = 0.5 * (x1 + x2)
    half_spread = 0.5 * beta * (x2 - x1)
    return mean - half_spread, mean + half_spread


def sbx_crossover(a: np.ndarray, b: np.ndarray, cfg: MooConfig, rng: np.random.Generator):
    """Per-gene SBX with probability crossover_prob; results clamped to [0, 1]."""
    if a.shape != b.shape:
        raise ConfigurationError(f"gene counts differ: {a.shape} vs {b.shape}")
    c1, c2 = a.copy(), b.copy()
    for j in range(a.size):
        if rng.random() < cfg.crossover_prob:
            y1, y2 = sbx_pair(a[j], b[j], rng.random(), cfg.sbx_eta)
            c1[j] = min(max(y1, 0.0), 1.0)
            c2[j] = min(max(y2, 0.0), 1.0)
    return c1, c2


def _mutate_gene(x: float, u: float, eta: float) -> float:
    # polynomial mutation on [0, 1] bounds
    if u < 0.5:
        delta = (2.0 * u + (1.0 - 2.0 * u) * (1.0 - x) ** (eta + 1.0)) ** (1.0 / (eta + 1.0)) - 1.0
    else:
        delta = 1.0 - (2.0 * (1.0 - u) + (2.0 * u - 1.0) * x ** (eta + 1.0)) ** (1.0 / (eta + 1.0))
    return min(max(x + delta, 0.0), 1.0)


def polynomial_mutation(genes: np.ndarray, cfg: MooConfig, rng: np.random.Generator) -> np.ndarray:
    """Each gene perturbed with probability mutation_prob (default 1/K), staying in [0, 1]."""
    prob = cfg.mutation_prob if cfg.mutation_prob is not None else 1.0 / genes.size
    out = genes.copy()
    for j in range(genes.size):
        if rng.random() < prob:
            out[j] = _mutate_gene(out[j], rng.random(), cfg.mutation_eta)
    return out


def simplex_repair(genes: np.ndarray) -> np.ndarray:
    """Normalize nonnegative genes onto the simplex; the all-zero genome maps to uniform."""
    genes = np.asarray(genes, dtype=float)
    if np.any(genes < 0.0):
        raise ConfigurationError("genes must be nonnegative before repair")
    total = genes.sum()
    if total <= 0.0:
        return np.full(genes.size, 1.0 / genes.size)
    return genes / total


def extract_frontier(evaluated) -> list:
    """Mutually non-dominated subset of (alpha, ObjectiveVector) pairs.

    Sorted by revenue descending; exact objective ties keep only the
    lexicographically smallest alpha.
    """
    if not evaluated:
        raise ConfigurationError("no evaluated candidates")
    best_alpha = {}
    for alpha, obj in evaluated:
        key = (obj.neg_revenue, obj.ope_error)
        tup = tuple(float(a) for a in alpha)
        cur = best_alpha.get(key)
        if cur is None or tup < cur:
            best_alpha[key] = tup
    keys = list(best_alpha)
    points = []
    for u in keys:
        if any(v[0] <= u[0] and v[1] <= u[1] and v != u for v in keys):
            continue
        points.append(ParetoPoint(alpha=best_alpha[u], revenue=-u[0], ope_error=u[1]))
    points.sort(key=lambda p: (-p.revenue, p.ope_error, p.alpha))
    return points


def _tournament(population, rng: np.random.Generator) -> Individual:
    i, j = rng.integers(0, len(population), size=2)
    a, b = population[i], population[j]
    if a.rank != b.rank:
        return a if a.rank < b.rank else b
    if a.crowding != b.crowding:
        return a if a.crowding > b.crowding else b
    return a


def _assign_fronts(population) -> list:
    fronts = fast_non_dominated_sort([ind.objectives for ind in population])
    for rank, front in enumerate(fronts):
        dists = crowding_distance([population[i].objectives for i in front])
        for pos, i in enumerate(front):
            population[i].rank = rank
            population[i].crowding = float(dists[pos])
    return fronts


def _environmental_selection(combined, size: int):
    fronts = _assign_fronts(combined)
    selected = []
    for front in fronts:
        if len(selected) + len(front) <= size:
            selected.extend(combined[i] for i in front)
            if len(selected) == size:
                break
        else:
            room = size - len(selected)
            dists = [combined[i].crowding for i in front]
            order = sorted(range(len(front)), key=lambda p: -dists[p])
            selected.extend(combined[front[p]] for p in order[:room])
            break
    return selected


def _initial_genomes(n_vars: int, size: int, rng: np.random.Generator) -> list:
    # simplex corners and the centroid first, so pure-policy ratios are always probed
    genomes = [np.eye(n_vars)[i] for i in range(n_vars)]
    genomes.append(np.full(n_vars, 1.0 / n_vars))
    genomes = genomes[:size]
    while len(genomes) < size:
        genomes.append(rng.random(n_vars))
    return genomes


def run_nsga2(objective, n_vars: int, cfg: MooConfig, map_fn=None) -> Nsga2Result:
    """Run the elitist loop until the unique-evaluation budget is spent.

    ``objective`` maps a simplex alpha to an ObjectiveVector; ``map_fn`` (an
    executor-style map) evaluates one generation's fresh candidates, whose
    order never depends on the execution schedule.
    """
    if n_vars < 1:
        raise ConfigurationError(f"n_vars must be >= 1, got {n_vars}")
    if map_fn is None:
        map_fn = map
    rng = child_rng(cfg.seed, STREAM_OPTIMIZER)
    memo = {}
    trials = []

    def evaluate_pending(pending):
        # pending: list of (key, alpha) not yet in the memo
        if not pending:
            return
        results = list(map_fn(objective, [alpha for _, alpha in pending]))
        for (key, alpha), obj in zip(pending, results):
            if not np.isfinite(obj.neg_revenue):
                raise NonFiniteRevenueError(
                    f"objective returned neg_revenue={obj.neg_revenue!r} at alpha={tuple(alpha)}"
                )
            memo[key] = obj
            trials.append((tuple(float(a) for a in alpha), obj))

    def build_individuals(genomes, allowance):
        # memo hits are free; at most ``allowance`` fresh evaluations are kept
        kept, pending, pending_keys = [], [], set()
        for genes in genomes:
            alpha = simplex_repair(genes)
            key = alpha_key(alpha)
            if key in memo or key in pending_keys:
                kept.append((genes, alpha, key))
            elif len(pending) < allowance:
                pending.append((key, alpha))
                pending_keys.add(key)
                kept.append((genes, alpha, key))
        evaluate_pending(pending)
        fresh = len(pending)
        return [Individual(genes, alpha, memo[key]) for genes, alpha, key in kept], fresh

    budget = cfg.evaluation_budget
    population, _ = build_individuals(
        _initial_genomes(n_vars, cfg.population_size, rng), budget
    )
    _assign_fronts(population)

    stall = 0
    while len(trials) < budget and stall < STALL_LIMIT:
        offspring_genes = []
        while len(offspring_genes) < cfg.population_size:
            p1 = _tournament(population, rng)
            p2 = _tournament(population, rng)
            c1, c2 = sbx_crossover(p1.genes, p2.genes, cfg, rng)
            for child in (
                polynomial_mutation(c1, cfg, rng),
                polynomial_mutation(c2, cfg, rng),
            ):
                if len(offspring_genes) < cfg.population_size:
                    offspring_genes.append(child)
        offspring, fresh = build_individuals(offspring_genes, budget - len(trials))
        stall = 0 if fresh else stall + 1
        population = _environmental_selection(population + offspring, cfg.population_size)

    return Nsga2Result(
        population=population,
        archive=extract_frontier(trials),
        trials=trials,
    )
