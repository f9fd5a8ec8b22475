"""Bounded-support integer distributions and exact threshold arithmetic.

The model is parametrised by two finite pmfs: the number of communities an
individual belongs to, and the size of a community.  Everything downstream is
built from four derived objects defined here:

* the size-biased shifted laws (pick a community uniformly by membership slot;
  the count of *further* communities of the chosen member, and of *further*
  members of the chosen community),
* probability generating functions of those laws and their polynomial
  composition, whose coefficients give the law of the number of children of a
  non-root vertex in the projected tree-of-cliques,
* an exact rational activation threshold, kept in integer arithmetic so that
  floor comparisons never suffer float rounding.

Combinatorial weights stay exact integers until the final multiplication by
float masses.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .errors import (
    AssumptionViolated,
    EmptySupport,
    MassNotOne,
    NegativeProbability,
    ZeroMean,
)

# Mass-sum tolerance for user-supplied pmfs vs. laws derived by arithmetic.
INPUT_MASS_TOL = 1e-12
DERIVED_MASS_TOL = 1e-9


@dataclass(frozen=True)
class Pmf:
    """Probability mass function on a bounded set of non-negative integers.

    ``items`` holds (value, mass) pairs sorted by value with only positive
    masses; instances are immutable and hashable so derived quantities can be
    memoised on them.  Build instances through :meth:`from_pairs` (validating)
    or :meth:`point`.
    """

    items: tuple[tuple[int, float], ...]

    @classmethod
    def from_pairs(cls, pairs, tol: float = INPUT_MASS_TOL) -> "Pmf":
        """Validate raw (value, probability) pairs and return a canonical Pmf.

        Raises NegativeProbability, MassNotOne or EmptySupport.  Zero-mass
        entries are dropped; the mass sum must be within ``tol`` of one.
        """
        if hasattr(pairs, "items"):
            pairs = pairs.items()
        cleaned: dict[int, float] = {}
        for value, prob in pairs:
            v = int(value)
            if v != value or v < 0:
                raise ValueError(f"support values must be non-negative integers, got {value!r}")
            prob = float(prob)
            if prob < 0.0:
                raise NegativeProbability(f"mass at {v} is negative: {prob}")
            if v in cleaned:
                raise ValueError(f"duplicate support value {v}")
            cleaned[v] = prob
        positive = tuple(sorted((v, p) for v, p in cleaned.items() if p > 0.0))
        if not positive:
            raise EmptySupport("no value carries positive mass")
        total = sum(cleaned.values())
        if abs(total - 1.0) > tol:
            raise MassNotOne(f"masses sum to {total!r}, expected 1 within {tol}")
        return cls(items=positive)

    @classmethod
    def point(cls, value: int) -> "Pmf":
        return cls.from_pairs([(value, 1.0)])

    def __call__(self, value: int) -> float:
        for v, p in self.items:
            if v == value:
                return p
        return 0.0

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.items)

    @property
    def support_max(self) -> int:
        return self.items[-1][0]

    def as_dict(self) -> dict[int, float]:
        return dict(self.items)

    def dense(self) -> np.ndarray:
        """Coefficient vector indexed 0..support_max (zeros fill the gaps)."""
        out = np.zeros(self.support_max + 1)
        for v, p in self.items:
            out[v] = p
        return out

    def mean(self) -> float:
        return sum(v * p for v, p in self.items)

    def factorial_moment(self, r: int) -> float:
        """E[K (K-1) ... (K-r+1)] for K distributed by this pmf, r >= 1."""
        if r < 1:
            raise ValueError("factorial moment order must be >= 1")
        total = 0.0
        for v, p in self.items:
            term = 1
            for j in range(r):
                term *= v - j
            if term:
                total += term * p
        return total

    def size_biased_shifted(self) -> "Pmf":
        """Law of K - 1 under the size-biased reweighting k p_k / E[K].

        This is the count of remaining slots seen from a uniformly chosen
        slot.  Raises ZeroMean when all mass sits at zero.
        """
        mu = self.mean()
        if mu <= 0.0:
            raise ZeroMean("size-biased shift needs a positive mean")
        pairs = [(v - 1, v * p / mu) for v, p in self.items if v >= 1]
        return Pmf.from_pairs(pairs, tol=DERIVED_MASS_TOL)

    def pgf(self, x: float) -> float:
        """Evaluate the probability generating function at x (Horner)."""
        acc = 0.0
        for coeff in self.dense()[::-1]:
            acc = acc * x + coeff
        return acc


@dataclass(frozen=True)
class Threshold:
    """Exact rational activation threshold in (0, 1), kept in lowest terms.

    A vertex of degree n activates when its count of active neighbours is
    strictly greater than threshold * n, i.e. at least floor_times(n) + 1.
    The floor is integer arithmetic; verdicts flip on exact boundaries, so the
    threshold is never materialised as a float on a decision path.
    """

    numerator: int
    denominator: int

    def __post_init__(self):
        num, den = self.numerator, self.denominator
        if not (isinstance(num, int) and isinstance(den, int)):
            raise ValueError("threshold terms must be integers")
        if den <= 0 or not 0 < num < den:
            raise ValueError(f"threshold must lie strictly between 0 and 1, got {num}/{den}")
        g = gcd(num, den)
        if g > 1:
            object.__setattr__(self, "numerator", num // g)
            object.__setattr__(self, "denominator", den // g)

    @classmethod
    def from_string(cls, text: str) -> "Threshold":
        """Parse a decimal string ("0.3") or a ratio ("3/10") exactly."""
        frac = Fraction(str(text).strip())
        return cls(frac.numerator, frac.denominator)

    @classmethod
    def from_fraction(cls, frac: Fraction) -> "Threshold":
        return cls(frac.numerator, frac.denominator)

    def floor_times(self, n: int) -> int:
        """floor(threshold * n) without ever leaving integer arithmetic."""
        if n < 0:
            raise ValueError("n must be non-negative")
        return (self.numerator * n) // self.denominator

    @property
    def at_least_half(self) -> bool:
        return 2 * self.numerator >= self.denominator

    @property
    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return self.numerator / self.denominator

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class ModelParams:
    """A community-structure model: membership counts, community sizes, threshold."""

    memberships: Pmf
    community_sizes: Pmf
    threshold: Threshold

    def __post_init__(self):
        # both means must be positive for the size-biased laws to exist
        if self.memberships.mean() <= 0.0:
            raise ZeroMean("membership count needs a positive mean")
        if self.community_sizes.mean() <= 0.0:
            raise ZeroMean("community size needs a positive mean")

    @classmethod
    def create(cls, memberships, community_sizes, threshold) -> "ModelParams":
        """Convenience constructor from dicts/pair lists and a threshold string."""
        p = memberships if isinstance(memberships, Pmf) else Pmf.from_pairs(memberships)
        q = community_sizes if isinstance(community_sizes, Pmf) else Pmf.from_pairs(community_sizes)
        t = threshold if isinstance(threshold, Threshold) else Threshold.from_string(threshold)
        return cls(memberships=p, community_sizes=q, threshold=t)

    def with_threshold(self, threshold) -> "ModelParams":
        t = threshold if isinstance(threshold, Threshold) else Threshold.from_string(threshold)
        return dataclasses.replace(self, threshold=t)

    @property
    def mean_memberships(self) -> float:
        return self.memberships.mean()

    @property
    def mean_community_size(self) -> float:
        return self.community_sizes.mean()

    @property
    def extra_communities(self) -> Pmf:
        """Further communities of an individual reached through one community."""
        return self.memberships.size_biased_shifted()

    @property
    def extra_members(self) -> Pmf:
        """Further members of a community reached through one member."""
        return self.community_sizes.size_biased_shifted()

    @property
    def max_child_count(self) -> int:
        """Tight upper bound on the child count of a non-root vertex."""
        return (self.memberships.support_max - 1) * (self.community_sizes.support_max - 1)

    def require_contagion_assumptions(self) -> None:
        """Contagion analysis assumes no isolated individuals and no trivial communities."""
        if self.memberships(0) > 0.0:
            raise AssumptionViolated("membership count must not put mass at 0")
        if self.community_sizes(0) > 0.0 or self.community_sizes(1) > 0.0:
            raise AssumptionViolated("community sizes must not put mass at 0 or 1")


@dataclass(frozen=True)
class PowerSeries:
    """Polynomial with float coefficients, index = power."""

    coeffs: tuple[float, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: float) -> float:
        acc = 0.0
        for coeff in reversed(self.coeffs):
            acc = acc * x + coeff
        return acc


def pgf_compose(outer: Pmf, inner: Pmf) -> PowerSeries:
    """Coefficients of outer-pgf applied to inner-pgf, by Horner over convolutions.

    Both pgfs are polynomials, so the composition is computed exactly (up to
    float rounding) with no truncation: the result has degree
    outer.support_max * inner.support_max.
    """
    outer_c = outer.dense()
    inner_c = inner.dense()
    result = np.array([outer_c[-1]])
    for k in range(len(outer_c) - 2, -1, -1):
        result = np.convolve(result, inner_c)
        result[0] += outer_c[k]
    return PowerSeries(coeffs=tuple(float(c) for c in result))


@lru_cache(maxsize=None)
def _child_count_series(memberships: Pmf, community_sizes: Pmf) -> PowerSeries:
    return pgf_compose(
        memberships.size_biased_shifted(),
        community_sizes.size_biased_shifted(),
    )


def child_count_series(params: ModelParams) -> PowerSeries:
    """Generating series of the child count of a non-root vertex.

    The vertex sits in one community already; it joins extra communities per
    the size-biased membership law, and each contributes an independent
    size-biased count of further members.
    """
    return _child_count_series(params.memberships, params.community_sizes)


@lru_cache(maxsize=None)
def _child_count_pmf(memberships: Pmf, community_sizes: Pmf) -> Pmf:
    series = _child_count_series(memberships, community_sizes)
    return Pmf.from_pairs(enumerate(series.coeffs), tol=DERIVED_MASS_TOL)


def child_count_pmf(params: ModelParams) -> Pmf:
    """Law of the number of children of a non-root vertex, as a Pmf."""
    return _child_count_pmf(params.memberships, params.community_sizes)
