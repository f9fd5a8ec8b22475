"""Monte Carlo engine: sample truncated local graphs, run the contagion.

The local weak limit of the projected graph is a tree of cliques grown level
by level: the root draws its community count from the raw membership law,
every other vertex draws extra communities from the size-biased shift, and
community sizes always come from the size-biased size law.  Vertices at the
truncation depth are not expanded but still draw their would-be child count,
because their degree feeds the activation rule.

Two sampling routes produce the same law.  sample_local_graph plus
run_contagion materialise one graph per replicate and iterate synchronous
rounds; this is the reference route and the one survival_by_threshold uses
to couple several thresholds on a shared graph.  estimate instead evolves
per-level census counts of vertex types with multinomial draws from the
exact clique-outcome tables, which costs per level a constant set of small
draws rather than work proportional to the population, so deep supercritical
runs stay cheap.  Tests cross-check the two routes against each other.

Replicate r of an estimate uses the stream seeded by SeedSequence(seed,
spawn_key=(r,)), so results are bit-identical regardless of how replicates
are batched across workers.
"""

from __future__ import annotations

from bisect import bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, product

import numpy as np

from .clique_dynamics import clique_cascade_size, clique_outcome_law, order_stat_pmf
from .dist_core import ModelParams, Pmf, Threshold, child_count_pmf
from .errors import ConfigInvalid

_CHUNK = 64  # replicates per worker task; does not affect results


@dataclass(frozen=True)
class SimConfig:
    depth: int
    replicates: int
    seed: int

    def __post_init__(self):
        if self.depth < 1:
            raise ConfigInvalid("depth must be at least 1")
        if self.replicates < 1:
            raise ConfigInvalid("replicates must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigInvalid("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class SimReport:
    survival_frequency: float
    graph_alive_frequency: float
    mean_active_by_depth: tuple[float, ...]
    mean_vertices_by_depth: tuple[float, ...]


@dataclass
class LocalGraph:
    """Depth-truncated tree of cliques in flat arrays.

    Vertices are numbered breadth-first with the root at 0; the members born
    into one clique occupy a contiguous id range starting at member_start.
    """

    truncation_depth: int
    depth: np.ndarray
    parent: np.ndarray
    clique_of: np.ndarray
    child_count: np.ndarray
    active: np.ndarray
    clique_parent: np.ndarray
    clique_size: np.ndarray
    member_start: np.ndarray

    @property
    def n_vertices(self) -> int:
        return self.depth.shape[0]

    @property
    def n_cliques(self) -> int:
        return self.clique_parent.shape[0]

    def vertices_by_depth(self) -> np.ndarray:
        return np.bincount(self.depth, minlength=self.truncation_depth + 1)

    def active_by_depth(self) -> np.ndarray:
        return np.bincount(self.depth[self.active], minlength=self.truncation_depth + 1)


class _DrawTable:
    """Inverse-cdf sampling table for a bounded integer law."""

    def __init__(self, pmf: Pmf):
        self.values = np.array(pmf.support, dtype=np.int64)
        self.cum = np.cumsum([p for _, p in pmf.items])

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        idx = np.searchsorted(self.cum, rng.random(size), side="right")
        return self.values[np.minimum(idx, len(self.values) - 1)]


@lru_cache(maxsize=None)
def _tables(memberships: Pmf, community_sizes: Pmf):
    from .dist_core import _child_count_pmf

    sizes = Pmf.from_pairs(
        [(v + 1, p) for v, p in community_sizes.size_biased_shifted().items],
        tol=1e-9,
    )
    return (
        _DrawTable(memberships),
        _DrawTable(memberships.size_biased_shifted()),
        _DrawTable(sizes),
        _DrawTable(_child_count_pmf(memberships, community_sizes)),
    )


def sample_local_graph(params: ModelParams, depth: int, rng: np.random.Generator) -> LocalGraph:
    """Sample one truncated local graph.

    Draw order per level: community counts for the level's vertices, then the
    sizes of all the new communities; the frontier level draws child counts
    only.  Empty levels consume no randomness.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    root_table, extra_table, size_table, child_table = _tables(
        params.memberships, params.community_sizes
    )
    vdepth = [np.zeros(1, dtype=np.int64)]
    vparent = [np.full(1, -1, dtype=np.int64)]
    vclique = [np.full(1, -1, dtype=np.int64)]
    vchild: list[np.ndarray] = []
    cparent: list[np.ndarray] = []
    csize: list[np.ndarray] = []
    cstart: list[np.ndarray] = []
    next_vertex = 1
    next_clique = 0
    level_ids = np.zeros(1, dtype=np.int64)
    for level in range(depth):
        n_here = level_ids.size
        if level == 0:
            counts = root_table.draw(rng, 1)
        else:
            counts = extra_table.draw(rng, n_here)
        n_new_cliques = int(counts.sum())
        sizes = size_table.draw(rng, n_new_cliques)
        members = sizes - 1
        owner = np.repeat(np.arange(n_here), counts)
        vchild.append(
            np.bincount(owner, weights=members, minlength=n_here).astype(np.int64)
        )
        cparent.append(level_ids[owner])
        csize.append(sizes)
        offsets = np.concatenate(([0], np.cumsum(members)[:-1])) if n_new_cliques else np.zeros(0, dtype=np.int64)
        cstart.append(next_vertex + offsets.astype(np.int64))
        n_new = int(members.sum())
        vdepth.append(np.full(n_new, level + 1, dtype=np.int64))
        vparent.append(np.repeat(level_ids[owner], members))
        clique_ids = np.arange(next_clique, next_clique + n_new_cliques, dtype=np.int64)
        vclique.append(np.repeat(clique_ids, members))
        level_ids = np.arange(next_vertex, next_vertex + n_new, dtype=np.int64)
        next_vertex += n_new
        next_clique += n_new_cliques
    vchild.append(child_table.draw(rng, level_ids.size))
    n = next_vertex
    return LocalGraph(
        truncation_depth=depth,
        depth=np.concatenate(vdepth),
        parent=np.concatenate(vparent),
        clique_of=np.concatenate(vclique),
        child_count=np.concatenate(vchild),
        active=np.zeros(n, dtype=bool),
        clique_parent=np.concatenate(cparent) if cparent else np.zeros(0, dtype=np.int64),
        clique_size=np.concatenate(csize) if csize else np.zeros(0, dtype=np.int64),
        member_start=np.concatenate(cstart) if cstart else np.zeros(0, dtype=np.int64),
    )


def run_contagion(graph: LocalGraph, threshold: Threshold) -> LocalGraph:
    """Activate from the root by synchronous rounds until nothing changes.

    A vertex activates when active neighbours strictly exceed threshold *
    degree; the comparison is exact (integer cross-multiplication).  Degree
    counts clique co-members plus the vertex's own children; frontier vertices
    use their sampled child count.  Fills graph.active in place.
    """
    n = graph.n_vertices
    act = np.zeros(n)
    act[0] = 1.0
    if n > 1:
        num, den = threshold.numerator, threshold.denominator
        co = graph.clique_of[1:]
        par = graph.parent[1:]
        degree = (graph.clique_size[co] - 1) + graph.child_count[1:]
        rhs = (num * degree).astype(np.float64)
        nc = graph.n_cliques
        while True:
            per_clique = np.bincount(co, weights=act[1:], minlength=nc)
            per_parent = np.bincount(par, weights=act[1:], minlength=n)
            neighbours = act[par] + (per_clique[co] - act[1:]) + per_parent[1:]
            newly = (act[1:] == 0.0) & (neighbours * den > rhs)
            if not newly.any():
                break
            act[1:][newly] = 1.0
    graph.active[:] = act > 0.0
    return graph


@dataclass(frozen=True)
class _CensusTables:
    """Per-model draw tables for the census engine, all indices ascending.

    Clique tables list every sorted child-count tuple a community can hold;
    active_members keeps the prefix that activates when the parent is active,
    all_members the full membership, both as counts per child-count type.
    Configuration tables give, per parent type x, the law of community-size
    counts conditioned on the sizes summing to x extra members.
    """

    n_types: int
    sizes: np.ndarray
    root_values: np.ndarray
    root_cum: np.ndarray
    size_probs: np.ndarray
    type_probs: np.ndarray
    type_values: np.ndarray
    clique_probs: tuple[np.ndarray, ...]
    active_members: tuple[np.ndarray, ...]
    all_members: tuple[np.ndarray, ...]
    config_probs: dict[int, np.ndarray]
    config_sizes: dict[int, np.ndarray]


@lru_cache(maxsize=None)
def _census_tables(params: ModelParams) -> _CensusTables:
    params.require_contagion_assumptions()
    p, q = params.memberships, params.community_sizes
    lam, mu = params.mean_memberships, params.mean_community_size
    xp = child_count_pmf(params)
    n_types = params.max_child_count + 1
    sizes = np.array(q.support, dtype=np.int64)
    size_index = {int(w): i for i, w in enumerate(sizes)}

    def normalized(raw):
        arr = np.array(raw, dtype=np.float64)
        return arr / arr.sum()

    clique_probs = []
    active_members = []
    all_members = []
    for w in q.support:
        probs = []
        act = []
        full = []
        for members in combinations_with_replacement(xp.support, w - 1):
            probs.append(order_stat_pmf(xp, w - 1, members))
            ell = clique_cascade_size(params.threshold, w, members)
            arr = np.array(members, dtype=np.int64)
            act.append(np.bincount(arr[:ell], minlength=n_types))
            full.append(np.bincount(arr, minlength=n_types))
        clique_probs.append(normalized(probs))
        active_members.append(np.array(act, dtype=np.int64))
        all_members.append(np.array(full, dtype=np.int64))

    sized = Pmf.from_pairs([(w, w * q(w) / mu) for w in q.support], tol=1e-9)
    by_type: dict[int, list[tuple[float, np.ndarray]]] = {}
    for d in p.support:
        weight_d = d * p(d) / lam
        for combo in combinations_with_replacement(q.support, d - 1):
            x = sum(w - 1 for w in combo)
            weight = weight_d * order_stat_pmf(sized, d - 1, combo)
            counts = np.zeros(len(sizes), dtype=np.int64)
            for w in combo:
                counts[size_index[w]] += 1
            by_type.setdefault(x, []).append((weight, counts))
    config_probs = {}
    config_sizes = {}
    for x, weighted in sorted(by_type.items()):
        config_probs[x] = normalized([wt for wt, _ in weighted])
        config_sizes[x] = np.array([c for _, c in weighted], dtype=np.int64)

    return _CensusTables(
        n_types=n_types,
        sizes=sizes,
        root_values=np.array(p.support, dtype=np.int64),
        root_cum=np.cumsum([p(d) for d in p.support]),
        size_probs=normalized([w * q(w) / mu for w in q.support]),
        type_probs=normalized([xp(t) for t in range(n_types)]),
        type_values=np.arange(n_types, dtype=np.int64),
        clique_probs=tuple(clique_probs),
        active_members=tuple(active_members),
        all_members=tuple(all_members),
        config_probs=config_probs,
        config_sizes=config_sizes,
    )


def _spread_count(rng: np.random.Generator, count: int, probs: np.ndarray) -> np.ndarray:
    if probs.shape[0] == 1:
        return np.array([count], dtype=np.int64)
    return rng.multinomial(count, probs)


def _resolve_cliques(tables: _CensusTables, cliques_by_size, rng):
    """Active and total children-by-type of cliques whose parent is active."""
    active = np.zeros(tables.n_types, dtype=np.int64)
    total = np.zeros(tables.n_types, dtype=np.int64)
    for wi in range(tables.sizes.shape[0]):
        count = int(cliques_by_size[wi])
        if count == 0:
            continue
        drawn = _spread_count(rng, count, tables.clique_probs[wi])
        active += drawn @ tables.active_members[wi]
        total += drawn @ tables.all_members[wi]
    return active, total


def _census_replicate(tables: _CensusTables, depth: int, rng: np.random.Generator):
    """One replicate as per-level type censuses; returns integer tallies."""
    vertices = np.zeros(depth + 1, dtype=np.int64)
    active_tally = np.zeros(depth + 1, dtype=np.int64)
    vertices[0] = 1
    active_tally[0] = 1

    u = rng.random()
    idx = int(np.searchsorted(tables.root_cum, u, side="right"))
    d = int(tables.root_values[min(idx, tables.root_values.shape[0] - 1)])
    cliques_by_size = _spread_count(rng, d, tables.size_probs)
    active, from_active = _resolve_cliques(tables, cliques_by_size, rng)
    inactive = from_active - active
    vertices[1] = int(from_active.sum())
    active_tally[1] = int(active.sum())

    for level in range(1, depth):
        if vertices[level] == 0:
            break
        cliques_by_size = np.zeros(tables.sizes.shape[0], dtype=np.int64)
        for x in range(1, tables.n_types):
            count = int(active[x])
            if count == 0:
                continue
            drawn = _spread_count(rng, count, tables.config_probs[x])
            cliques_by_size += drawn @ tables.config_sizes[x]
        next_active, from_active = _resolve_cliques(tables, cliques_by_size, rng)
        idle_children = int(np.dot(tables.type_values, inactive))
        if idle_children:
            idle = rng.multinomial(idle_children, tables.type_probs)
        else:
            idle = np.zeros(tables.n_types, dtype=np.int64)
        active = next_active
        inactive = (from_active - next_active) + idle
        vertices[level + 1] = int(from_active.sum()) + idle_children
        active_tally[level + 1] = int(active.sum())
    return vertices, active_tally


def _run_chunk(params: ModelParams, config: SimConfig, start: int, stop: int):
    tables = _census_tables(params)
    depth = config.depth
    vertices = np.zeros(depth + 1, dtype=np.int64)
    active = np.zeros(depth + 1, dtype=np.int64)
    survived = 0
    alive = 0
    for r in range(start, stop):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=config.seed, spawn_key=(r,))
        )
        vc, ac = _census_replicate(tables, depth, rng)
        vertices += vc
        active += ac
        survived += int(ac[depth] > 0)
        alive += int(vc[depth] > 0)
    return vertices, active, survived, alive


def estimate(params: ModelParams, config: SimConfig, workers: int = 1) -> SimReport:
    """Replicated simulation summary via the census engine.

    Tallies are exact integers summed in replicate order; floats appear only
    in the final division, so the report is bit-identical for any worker
    count.
    """
    if workers < 1:
        raise ConfigInvalid("workers must be at least 1")
    _census_tables(params)
    bounds = [
        (lo, min(lo + _CHUNK, config.replicates))
        for lo in range(0, config.replicates, _CHUNK)
    ]
    if workers == 1:
        parts = [_run_chunk(params, config, lo, hi) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(lambda b: _run_chunk(params, config, b[0], b[1]), bounds)
            )
    vertices = np.zeros(config.depth + 1, dtype=np.int64)
    active = np.zeros(config.depth + 1, dtype=np.int64)
    survived = 0
    alive = 0
    for vc, ac, s, a in parts:
        vertices += vc
        active += ac
        survived += s
        alive += a
    n = config.replicates
    return SimReport(
        survival_frequency=survived / n,
        graph_alive_frequency=alive / n,
        mean_active_by_depth=tuple(float(v) / n for v in active),
        mean_vertices_by_depth=tuple(float(v) / n for v in vertices),
    )


def survival_by_threshold(
    params: ModelParams, thresholds, config: SimConfig
) -> tuple[float, ...]:
    """Survival frequency per threshold, coupled on shared graphs.

    Each replicate samples one graph and reruns the contagion for every
    threshold on it, so with a fixed seed the frequencies are non-increasing
    whenever the thresholds are increasing: a harsher rule activates a subset
    of the same vertices.  Uses the per-vertex route, which prices each
    replicate by its vertex count; keep depth moderate for supercritical
    models.
    """
    params.require_contagion_assumptions()
    thresholds = list(thresholds)
    survived = [0] * len(thresholds)
    for r in range(config.replicates):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=config.seed, spawn_key=(r,))
        )
        graph = sample_local_graph(params, config.depth, rng)
        for i, threshold in enumerate(thresholds):
            run_contagion(graph, threshold)
            if graph.active_by_depth()[config.depth] > 0:
                survived[i] += 1
    return tuple(s / config.replicates for s in survived)


def _cumulative(weighted: list[tuple[float, object]]):
    outcomes = [o for _, o in weighted]
    cum = []
    acc = 0.0
    for p, _ in weighted:
        acc += p
        cum.append(acc)
    return cum, outcomes


class ActivationProcess:
    """Generation sampler for the type-annotated activation branching process.

    Matches the graph contagion in law, level by level: the root spawns
    communities from the raw membership law, each community draws a cascade
    outcome from the exact clique law for its size, and every later active
    vertex of type x draws its community sizes from the configuration law
    conditioned on total extra members x.  Tables are enumerated once and
    sampled by inverse cdf.
    """

    def __init__(self, params: ModelParams):
        params.require_contagion_assumptions()
        self.params = params
        q = params.community_sizes
        mu = params.mean_community_size
        lam = params.mean_memberships

        self._outcomes = {}
        for w in q.support:
            law = clique_outcome_law(params, w)
            ordered = sorted(law.items())
            self._outcomes[w] = _cumulative([(p, o) for o, p in ordered])

        self._root_cliques = _cumulative(
            [(params.memberships(d), d) for d in params.memberships.support]
        )
        self._clique_size = _cumulative([(w * q(w) / mu, w) for w in q.support])

        # configuration law of community sizes given total extra members
        by_type: dict[int, list[tuple[float, tuple[int, ...]]]] = {}
        for d in params.memberships.support:
            if d < 1:
                continue
            weight_d = d * params.memberships(d) / lam
            for sizes in product(q.support, repeat=d - 1):
                x = sum(w - 1 for w in sizes)
                weight = weight_d
                for w in sizes:
                    weight *= w * q(w) / mu
                by_type.setdefault(x, []).append((weight, sizes))
        self._configurations = {}
        for x, weighted in sorted(by_type.items()):
            total = sum(p for p, _ in weighted)
            self._configurations[x] = _cumulative(
                [(p / total, sizes) for p, sizes in weighted]
            )

    @staticmethod
    def _draw(table, rng: np.random.Generator):
        cum, outcomes = table
        idx = bisect_right(cum, rng.random())
        return outcomes[min(idx, len(outcomes) - 1)]

    def _clique_types(self, w: int, rng: np.random.Generator) -> tuple[int, ...]:
        return self._draw(self._outcomes[w], rng).types

    def root_step(self, rng: np.random.Generator) -> dict[int, int]:
        """Types of the active depth-1 vertices below a fresh root."""
        census: dict[int, int] = {}
        d = self._draw(self._root_cliques, rng)
        for _ in range(d):
            w = self._draw(self._clique_size, rng)
            for t in self._clique_types(w, rng):
                census[t] = census.get(t, 0) + 1
        return census

    def step(self, census: dict[int, int], rng: np.random.Generator) -> dict[int, int]:
        """One generation: active vertices by type to active children by type."""
        out: dict[int, int] = {}
        for x in sorted(census):
            copies = census[x]
            if copies < 0:
                raise ValueError("census counts must be non-negative")
            if copies and x not in self._configurations:
                raise ValueError(f"type {x} has zero probability under this model")
            for _ in range(copies):
                for w in self._draw(self._configurations[x], rng):
                    for t in self._clique_types(w, rng):
                        out[t] = out.get(t, 0) + 1
        return out
