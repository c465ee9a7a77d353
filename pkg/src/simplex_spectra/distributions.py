"""Bounded entry laws with exact moments.

Every supported law has analytic mean, variance, sup-norm of the centered
variable, and central moments of any order, so moment-based bounds and the
trace expectation oracle never rely on sampling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DistributionSpec:
    """A bounded random variable given by a finite list of (value, prob)
    atoms, or a uniform interval."""

    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in ("bernoulli", "rademacher", "uniform", "twopoint"):
            raise ValueError(f"unsupported distribution kind {self.kind!r}")
        if self.variance <= 0:
            raise ValueError(f"{self} has zero variance")

    # -- atoms for the discrete kinds ------------------------------------
    def _atoms(self):
        if self.kind == "bernoulli":
            (p,) = self.params
            return [(0.0, 1.0 - p), (1.0, p)]
        if self.kind == "rademacher":
            return [(-1.0, 0.5), (1.0, 0.5)]
        if self.kind == "twopoint":
            x, y, pi = self.params
            return [(x, pi), (y, 1.0 - pi)]
        raise AssertionError

    @property
    def mean(self) -> float:
        if self.kind == "uniform":
            a, b = self.params
            return (a + b) / 2.0
        return sum(v * p for v, p in self._atoms())

    @property
    def variance(self) -> float:
        if self.kind == "uniform":
            a, b = self.params
            return (b - a) ** 2 / 12.0
        if self.kind == "bernoulli":
            # exact closed form, bit-identical to q = p(1-p) used elsewhere
            (p,) = self.params
            return p * (1.0 - p)
        m = self.mean
        return sum((v - m) ** 2 * p for v, p in self._atoms())

    @property
    def sup_centered(self) -> float:
        """sup |Z - E[Z]| over the support."""
        if self.kind == "uniform":
            a, b = self.params
            return (b - a) / 2.0
        m = self.mean
        return max(abs(v - m) for v, _ in self._atoms())

    def central_moment(self, m: int) -> float:
        """E[(Z - E[Z])**m], exact."""
        if m < 0:
            raise ValueError("moment order must be >= 0")
        if self.kind == "uniform":
            a, b = self.params
            h = (b - a) / 2.0
            return h**m / (m + 1) if m % 2 == 0 else 0.0
        mu = self.mean
        return sum((v - mu) ** m * p for v, p in self._atoms())

    def abs_central_moment(self, m: int) -> float:
        """E[|Z - E[Z]|**m], exact."""
        if m < 0:
            raise ValueError("moment order must be >= 0")
        if self.kind == "uniform":
            a, b = self.params
            h = (b - a) / 2.0
            return h**m / (m + 1)
        mu = self.mean
        return sum(abs(v - mu) ** m * p for v, p in self._atoms())

    # -- sampling by inverse transform -----------------------------------
    def from_uniforms(self, u: np.ndarray) -> np.ndarray:
        """Map uniform(0,1) draws to draws of Z. Bernoulli(p) maps u < p to
        1, which couples Z-driven matrices to the complex sampler."""
        if self.kind == "bernoulli":
            (p,) = self.params
            return (u < p).astype(np.float64)
        if self.kind == "rademacher":
            return np.where(u < 0.5, -1.0, 1.0)
        if self.kind == "uniform":
            a, b = self.params
            return a + (b - a) * u
        if self.kind == "twopoint":
            x, y, pi = self.params
            return np.where(u < pi, x, y)
        raise AssertionError


def bernoulli(p: float) -> DistributionSpec:
    return DistributionSpec("bernoulli", (float(p),))


def rademacher() -> DistributionSpec:
    return DistributionSpec("rademacher", ())


def uniform(a: float, b: float) -> DistributionSpec:
    return DistributionSpec("uniform", (float(a), float(b)))


def twopoint(x: float, y: float, pi: float) -> DistributionSpec:
    return DistributionSpec("twopoint", (float(x), float(y), float(pi)))


def dist_stats(spec: DistributionSpec, m: int):
    """(mean, variance, sup of centered variable, mu_m, E|Z-EZ|^m)."""
    return (
        spec.mean,
        spec.variance,
        spec.sup_centered,
        spec.central_moment(m),
        spec.abs_central_moment(m),
    )


def parse_dist(text: str) -> DistributionSpec:
    """Parse CLI syntax: 'bernoulli:0.3', 'rademacher', 'uniform:0,1',
    'twopoint:x,y,pi'."""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    params = tuple(float(t) for t in rest.split(",") if t.strip()) if rest else ()
    arity = {"bernoulli": 1, "rademacher": 0, "uniform": 2, "twopoint": 3}
    if kind not in arity:
        raise ValueError(f"unknown distribution {kind!r}")
    if len(params) != arity[kind]:
        raise ValueError(f"{kind} takes {arity[kind]} parameters, got {len(params)}")
    return DistributionSpec(kind, params)
