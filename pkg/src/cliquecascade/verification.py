"""Cross-checks between independent computation routes.

Every closed-form law in the package has a brute-force counterpart that
enumerates raw child-count draws directly.  The checks here compare the two
routes and are used both by the test suite and by the `verify` CLI command.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .cascade_matrix import mean_active_of_type, mean_active_of_type_oracle
from .clique_dynamics import (
    brute_force_clique_law,
    clique_cascade_size,
    clique_outcome_law,
    iter_enumerated_outcomes,
)
from .dist_core import ModelParams, Threshold, child_count_pmf
from .mc_sim import ActivationProcess, run_contagion, sample_local_graph

ORACLE_TOL = 1e-9


@dataclass(frozen=True)
class OracleCheck:
    name: str
    worst: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.worst <= self.tolerance


def clique_oracle_checks(params: ModelParams) -> list[OracleCheck]:
    """Closed-form clique law vs direct enumeration, for every community size."""
    checks = []
    for w in params.community_sizes.support:
        law = clique_outcome_law(params, w)
        brute = brute_force_clique_law(params, w)
        keys = set(law) | set(brute)
        worst = max(abs(law.get(k, 0.0) - brute.get(k, 0.0)) for k in keys)
        checks.append(OracleCheck(f"clique_law_w{w}", worst, ORACLE_TOL))
        checks.append(
            OracleCheck(f"clique_law_mass_w{w}", abs(sum(law.values()) - 1.0), ORACLE_TOL)
        )
        worst_size = 0.0
        for xs, _, outcome in iter_enumerated_outcomes(params, w):
            direct = clique_cascade_size(params.threshold, w, tuple(sorted(xs)))
            worst_size = max(worst_size, float(abs(direct - outcome.ell)))
        checks.append(OracleCheck(f"cascade_size_w{w}", worst_size, 0.0))
    return checks


def matrix_oracle_checks(params: ModelParams) -> list[OracleCheck]:
    """Per-type mean counts vs expectation over the enumerated clique law."""
    checks = []
    xp = child_count_pmf(params)
    for w in params.community_sizes.support:
        worst = 0.0
        for x in xp.support:
            closed = mean_active_of_type(params, x, w)
            brute = mean_active_of_type_oracle(params, x, w)
            worst = max(worst, abs(closed - brute))
        checks.append(OracleCheck(f"mean_active_w{w}", worst, ORACLE_TOL))
    return checks


def oracle_equivalence_checks(params: ModelParams) -> list[OracleCheck]:
    return clique_oracle_checks(params) + matrix_oracle_checks(params)


def standard_model_suite() -> list[ModelParams]:
    """Fixed models plus seeded random ones, spanning the supported regimes."""
    fixed = [
        ({2: 1.0}, {2: 1.0}),
        ({3: 1.0}, {3: 1.0}),
        ({4: 1.0}, {4: 1.0}),
        ({2: 1.0}, {3: 1.0}),
        ({3: 1.0}, {2: 1.0}),
        ({4: 1.0}, {2: 1.0}),
        ({2: 1.0}, {4: 1.0}),
        ({1: 0.5, 3: 0.5}, {2: 1.0}),
        ({2: 0.5, 4: 0.5}, {2: 0.5, 3: 0.5}),
        ({3: 1.0}, {2: 0.3, 4: 0.7}),
    ]
    thetas = [
        Threshold(1, 10),
        Threshold(3, 10),
        Threshold(2, 5),
        Threshold(49, 100),
    ]
    models = []
    for i, (p, q) in enumerate(fixed):
        models.append(ModelParams.create(p, q, thetas[i % len(thetas)]))
    rng = np.random.default_rng(20240829)
    for i in range(10):
        p_support = sorted(rng.choice(np.arange(1, 5), size=rng.integers(1, 4), replace=False))
        q_support = sorted(rng.choice(np.arange(2, 5), size=rng.integers(1, 4), replace=False))
        p = _random_pmf(rng, [int(v) for v in p_support])
        q = _random_pmf(rng, [int(v) for v in q_support])
        models.append(ModelParams.create(p, q, thetas[i % len(thetas)]))
    return models


def _random_pmf(rng: np.random.Generator, support: list[int]) -> dict[int, float]:
    raw = rng.random(len(support)) + 0.1
    probs = raw / raw.sum()
    out = {v: float(p) for v, p in zip(support[:-1], probs[:-1])}
    out[support[-1]] = 1.0 - sum(out.values())
    return out


def depth1_active_counts(
    params: ModelParams, replicates: int, seed: int
) -> dict[int, int]:
    """Histogram of the number of active depth-1 vertices in the graph model."""
    hist: dict[int, int] = {}
    for r in range(replicates):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(r,)))
        graph = run_contagion(sample_local_graph(params, 1, rng), params.threshold)
        k = int(graph.active_by_depth()[1])
        hist[k] = hist.get(k, 0) + 1
    return hist


def branching_root_counts(
    params: ModelParams, replicates: int, seed: int
) -> dict[int, int]:
    """Histogram of the first-generation size of the activation process."""
    proc = ActivationProcess(params)
    hist: dict[int, int] = {}
    for r in range(replicates):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(r,)))
        census = proc.root_step(rng)
        k = sum(census.values())
        hist[k] = hist.get(k, 0) + 1
    return hist


def histogram_match(
    left: dict[int, int], right: dict[int, int], sigmas: float = 3.0
) -> tuple[bool, float]:
    """Compare two sampled histograms bin by bin.

    Uses the pooled two-sample standard error per bin; returns the worst
    z-score over bins alongside the pass flag.  Bins where both samples are
    empty are skipped.
    """
    n_left = sum(left.values())
    n_right = sum(right.values())
    worst = 0.0
    for k in set(left) | set(right):
        f_left = left.get(k, 0) / n_left
        f_right = right.get(k, 0) / n_right
        pooled = (left.get(k, 0) + right.get(k, 0)) / (n_left + n_right)
        se = sqrt(pooled * (1.0 - pooled) * (1.0 / n_left + 1.0 / n_right))
        if se == 0.0:
            continue
        worst = max(worst, abs(f_left - f_right) / se)
    return worst <= sigmas, worst
