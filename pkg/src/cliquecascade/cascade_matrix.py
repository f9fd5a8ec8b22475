"""Mean matrix of the activation process by vertex type, and the verdict.

Type a non-root vertex by its child count x.  Conditional on an active vertex
of type x0, its communities' sizes follow the size-biased configuration law
restricted to total extra members x0, and each community independently runs
the clique cascade.  Entry (x0, x) of the mean matrix is the expected number
of activated children of type x.  The cascade is possible with positive
probability iff the Perron root of that matrix exceeds one, except for two
carve-outs handled in :func:`cascade_verdict`: a threshold of at least one
half kills every cascade, and the all-2s degenerate model is an infinite path
that activates surely.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np

from .clique_dynamics import (
    CliqueOutcome,
    brute_force_clique_law,
    clique_outcome_prob,
    _context,
)
from .dist_core import ModelParams, Pmf, child_count_pmf
from .errors import NoConvergence

# Perron solver knobs: relative bracket width, iteration budget, restart
# patience when the bracket stalls.
POWER_REL_TOL = 1e-10
POWER_MAX_ITER = 10**5
POWER_RESTART_AFTER = 500

# abs(rho - 1) within this is reported as the boundary and classified as
# subcritical (the dichotomy puts rho == 1 on the finite side).
BOUNDARY_TOL = 1e-10


def active_count_prob(
    params: ModelParams, x: int, clique_size: int, k: int, ell: int, i: int
) -> float:
    """Probability that a clique activates ell children, k of type x, i below x.

    Sums the outcome law over sorted vectors whose first i entries are
    strictly below x, next k entries equal x, and remaining entries strictly
    above.  Empty index combinations give 0.
    """
    w = clique_size
    if k < 1 or ell > w - 1 or i < 0 or k + i > ell:
        return 0.0
    xp, _, _ = _context(params, w)
    if xp(x) == 0.0:
        return 0.0
    below = [v for v in xp.support if v < x]
    above = [v for v in xp.support if v > x]
    total = 0.0
    for low in itertools.combinations_with_replacement(below, i):
        for high in itertools.combinations_with_replacement(above, ell - k - i):
            types = low + (x,) * k + high
            total += clique_outcome_prob(params, w, CliqueOutcome(ell, types))
    return total


def mean_active_of_type(params: ModelParams, x: int, clique_size: int) -> float:
    """Expected number of activated children of type x in one clique.

    Triple sum over (count at x, total activated, count below x); the index
    ranges start at floor(threshold * (x + w - 1)) because a type-x child
    needs that many activated predecessors before the parent tips it over.
    """
    w = clique_size
    floor_x = params.threshold.floor_times(x + w - 1)
    total = 0.0
    for k in range(1, w):
        for ell in range(k + floor_x, w):
            for i in range(floor_x, ell - k + 1):
                total += k * active_count_prob(params, x, w, k, ell, i)
    return total


def mean_active_of_type_oracle(params: ModelParams, x: int, clique_size: int) -> float:
    """Same expectation read off the brute-force outcome law."""
    law = brute_force_clique_law(params, clique_size)
    return sum(prob * outcome.types.count(x) for outcome, prob in law.items())


@dataclass(frozen=True, eq=False)
class MeanMatrix:
    """Mean activated-children counts indexed by (parent type, child type)."""

    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@lru_cache(maxsize=None)
def _mean_matrix_cached(params: ModelParams) -> "MeanMatrix":
    params.require_contagion_assumptions()
    dim = params.max_child_count + 1
    xp = child_count_pmf(params)
    lam = params.mean_memberships
    mu = params.mean_community_size
    q = params.community_sizes

    # per clique size: column vector of mean activated counts by child type
    per_size = {}
    for w in q.support:
        col = np.zeros(dim)
        for x in xp.support:
            col[x] = mean_active_of_type(params, x, w)
        per_size[w] = col

    raw = np.zeros((dim, dim))
    config_mass = np.zeros(dim)
    for d in params.memberships.support:
        if d < 1:
            continue
        weight_d = d * params.memberships(d) / lam
        for sizes in itertools.product(q.support, repeat=d - 1):
            x0 = sum(w - 1 for w in sizes)
            weight = weight_d
            row = np.zeros(dim)
            for w in sizes:
                weight *= w * q(w) / mu
                row += per_size[w]
            config_mass[x0] += weight
            raw[x0] += weight * row

    # condition each row on its type actually occurring; types with zero
    # configuration mass keep a zero row, and type 0 has no children at all
    entries = np.zeros((dim, dim))
    for x0 in range(1, dim):
        if config_mass[x0] > 0.0:
            entries[x0] = raw[x0] / config_mass[x0]
    return MeanMatrix(entries=entries)


def mean_matrix(params: ModelParams) -> MeanMatrix:
    return _mean_matrix_cached(params)


def strongly_connected_components(adjacency: np.ndarray) -> list[list[int]]:
    """Tarjan's algorithm, iterative, on a boolean adjacency matrix."""
    n = adjacency.shape[0]
    succ = [np.flatnonzero(adjacency[i]).tolist() for i in range(n)]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            node, ptr = work[-1]
            if ptr == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            advanced = False
            for j in range(ptr, len(succ[node])):
                nxt = succ[node][j]
                if index[nxt] == -1:
                    work[-1] = (node, j + 1)
                    work.append((nxt, 0))
                    advanced = True
                    break
                if on_stack[nxt]:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                comp = []
                while True:
                    v = stack.pop()
                    on_stack[v] = False
                    comp.append(v)
                    if v == node:
                        break
                components.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return components


def _perron_root(block: np.ndarray, rel_tol: float, max_iter: int) -> float:
    """Perron root of an irreducible non-negative block by power iteration.

    A diagonal shift by the max row sum makes the block primitive (periodic
    blocks would otherwise cycle); the spectrum shifts by exactly that amount.
    Positive iterates give certified ratio brackets around the root at every
    step, so the stop rule is bracket width, with a perturbed restart if the
    bracket stalls.
    """
    n = block.shape[0]
    if n == 1:
        return float(block[0, 0])
    shift = float(block.sum(axis=1).max())
    shifted = block + shift * np.eye(n)
    x = np.full(n, 1.0 / n)
    rng = np.random.default_rng(0)
    best_width = np.inf
    stalled = 0
    lo = hi = 0.0
    for _ in range(max_iter):
        y = shifted @ x
        ratios = y / x
        lo = float(ratios.min())
        hi = float(ratios.max())
        if hi - lo <= rel_tol * hi:
            return 0.5 * (lo + hi) - shift
        if hi - lo < best_width * (1.0 - 1e-6):
            best_width = hi - lo
            stalled = 0
        else:
            stalled += 1
            if stalled > POWER_RESTART_AFTER:
                x = x * (1.0 + 0.01 * rng.random(n))
                x /= x.sum()
                stalled = 0
                continue
        x = y / y.sum()
    raise NoConvergence(
        "power iteration exhausted its budget",
        bracket=(lo - shift, hi - shift),
    )


def spectral_radius(
    matrix, *, rel_tol: float = POWER_REL_TOL, max_iter: int = POWER_MAX_ITER
) -> float:
    """Largest eigenvalue modulus of a non-negative matrix.

    Condense into strongly connected components; the radius is the maximum of
    the component Perron roots (trivial components without a self-loop
    contribute 0).
    """
    if isinstance(matrix, MeanMatrix):
        matrix = matrix.entries
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("matrix must be square")
    if (arr < 0).any():
        raise ValueError("matrix must be entrywise non-negative")
    best = 0.0
    for comp in strongly_connected_components(arr > 0):
        if len(comp) == 1:
            i = comp[0]
            best = max(best, float(arr[i, i]))
            continue
        idx = np.array(sorted(comp))
        best = max(best, _perron_root(arr[np.ix_(idx, idx)], rel_tol, max_iter))
    return best


class VerdictKind(str, Enum):
    FINITE_ALMOST_SURELY = "FiniteAlmostSurely"
    CASCADE_POSSIBLE = "CascadePossible"
    CASCADE_ALMOST_SURE = "CascadeAlmostSure"


class VerdictReason(str, Enum):
    THRESHOLD_AT_LEAST_HALF = "ThresholdAtLeastHalf"
    DEGENERATE_P2_Q2 = "DegenerateP2Q2"
    SPECTRAL_RADIUS = "SpectralRadius"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    reason: VerdictReason
    rho: Optional[float] = None
    boundary: bool = False


def cascade_verdict(params: ModelParams) -> Verdict:
    """Phase-transition dichotomy for the activation process.

    Threshold >= 1/2 is decided by exact integer comparison; an all-2s model
    is the deterministic path that cascades surely; otherwise the Perron root
    of the mean matrix decides, with the boundary band classified as finite
    and flagged.
    """
    params.require_contagion_assumptions()
    if params.threshold.at_least_half:
        return Verdict(VerdictKind.FINITE_ALMOST_SURELY, VerdictReason.THRESHOLD_AT_LEAST_HALF)
    if params.memberships(2) == 1.0 and params.community_sizes(2) == 1.0:
        return Verdict(VerdictKind.CASCADE_ALMOST_SURE, VerdictReason.DEGENERATE_P2_Q2)
    rho = spectral_radius(mean_matrix(params))
    boundary = abs(rho - 1.0) <= BOUNDARY_TOL
    if rho <= 1.0 + BOUNDARY_TOL:
        kind = VerdictKind.FINITE_ALMOST_SURELY
    else:
        kind = VerdictKind.CASCADE_POSSIBLE
    return Verdict(kind, VerdictReason.SPECTRAL_RADIUS, rho=rho, boundary=boundary)
