"""Closed-form structure of the projected graph before any contagion runs.

The one-mode projection of the community structure is locally a tree of
cliques generated by an alternating branching process: individuals spawn
communities by the size-biased membership law, communities spawn individuals
by the size-biased size law.  This module answers three questions about that
object alone: does the branching process survive (and with what extinction
probability), what does the root's degree look like, and how clustered is the
graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dist_core import ModelParams, Pmf, pgf_compose, DERIVED_MASS_TOL
from .errors import NoConvergence

FIXED_POINT_TOL = 1e-14
FIXED_POINT_MAX_ITER = 10**6


@dataclass(frozen=True)
class BranchingCriterion:
    """Survival criterion comparing second to first factorial moments.

    The process survives with positive probability iff
    E[W(W-1)] * E[D(D-1)] > E[W] * E[D]
    (community sizes W, membership counts D).
    """

    lhs: float
    rhs: float

    @property
    def supercritical(self) -> bool:
        return self.lhs > self.rhs


@dataclass(frozen=True)
class ExtinctionReport:
    criterion_lhs: float
    criterion_rhs: float
    fixed_point: float
    extinction: float
    degenerate: bool


@dataclass(frozen=True)
class ClusteringResult:
    value: float
    degenerate_triples: bool


def survival_criterion(params: ModelParams) -> BranchingCriterion:
    lhs = params.community_sizes.factorial_moment(2) * params.memberships.factorial_moment(2)
    rhs = params.mean_community_size * params.mean_memberships
    return BranchingCriterion(lhs=lhs, rhs=rhs)


def _composite_pgf(params: ModelParams, x: float) -> float:
    # pgf of the child count: extra-communities pgf evaluated at the
    # extra-members pgf
    return params.extra_communities.pgf(params.extra_members.pgf(x))


def smallest_fixed_point(params: ModelParams) -> float:
    """Smallest fixed point in [0, 1] of the child-count pgf.

    Monotone iteration from 0; the iterates increase towards the smallest
    fixed point.  Raises NoConvergence (carrying the last iterate) if the
    budget runs out, which only happens within O(1e-7) of criticality.
    """
    x = 0.0
    for _ in range(FIXED_POINT_MAX_ITER):
        nxt = _composite_pgf(params, x)
        if abs(nxt - x) < FIXED_POINT_TOL:
            return nxt
        x = nxt
    raise NoConvergence("fixed-point iteration did not converge", last=x)


def extinction_probability(params: ModelParams) -> ExtinctionReport:
    """Extinction report for the vertex-generation branching process.

    Degenerate case first: membership == 2 and community size == 2 surely
    makes the graph a deterministic infinite path, which survives although the
    criterion sits exactly on the boundary.  At or below criticality the
    smallest fixed point is provably 1, so no iteration is needed there; in
    the supercritical case the extinction probability is the membership pgf
    composed with the extra-members pgf at the interior fixed point.
    """
    crit = survival_criterion(params)
    degenerate = params.memberships(2) == 1.0 and params.community_sizes(2) == 1.0
    if degenerate:
        fixed = smallest_fixed_point(params)  # identity map: returns 0 at once
        extinct = 0.0
    elif not crit.supercritical:
        fixed = 1.0
        extinct = 1.0
    else:
        fixed = smallest_fixed_point(params)
        extinct = params.memberships.pgf(params.extra_members.pgf(fixed))
    return ExtinctionReport(
        criterion_lhs=crit.lhs,
        criterion_rhs=crit.rhs,
        fixed_point=fixed,
        extinction=extinct,
        degenerate=degenerate,
    )


def root_degree_pmf(params: ModelParams) -> Pmf:
    """Degree law of the root: sum over its communities of further members.

    Coefficients of the membership pgf composed with the extra-members pgf.
    """
    series = pgf_compose(params.memberships, params.extra_members)
    return Pmf.from_pairs(enumerate(series.coeffs), tol=DERIVED_MASS_TOL)


def clustering_coefficient(params: ModelParams) -> ClusteringResult:
    """Global clustering (triangle density over connected triples).

    Triangles come only from triples inside one community; open triples come
    either from two distinct communities of the centre or from one community.
    When the graph has no connected triples at all the ratio is undefined and
    the result is flagged instead.
    """
    lam = params.mean_memberships
    mu = params.mean_community_size
    triples_within = params.community_sizes.factorial_moment(3) / mu
    across = (params.memberships.factorial_moment(2) / lam) * (
        params.community_sizes.factorial_moment(2) / mu
    ) ** 2
    denominator = across + triples_within
    if denominator == 0.0:
        return ClusteringResult(value=0.0, degenerate_triples=True)
    return ClusteringResult(value=triples_within / denominator, degenerate_triples=False)
