"""Closed-form bounds and rate functions for the matrix ensembles.

The existence constants entering the Schatten bound and the tail estimates
are not pinned down analytically; they are configuration with documented
defaults and no test treats them as ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, comb, exp, factorial, log, sqrt

from .distributions import DistributionSpec


@dataclass(frozen=True)
class BoundConstants:
    """Unspecified positive existence constants; defaults are arbitrary."""

    C_d: float = 10.0
    c_d: float = 10.0
    C_tail: float = 1.0
    beta_d: float = 1.0

    def __post_init__(self):
        if min(self.C_d, self.c_d) < 0:
            raise ValueError("C_d and c_d must be non-negative")
        if min(self.C_tail, self.beta_d) <= 0:
            raise ValueError("C_tail and beta_d must be positive")


def theta_k(n: int, d: int, k: int) -> float:
    """sqrt((n-d)/n) * C(n,d)^(1/2k)."""
    if n < d + 1 or k < 1:
        raise ValueError("need n >= d+1 and k >= 1")
    return sqrt((n - d) / n) * comb(n, d) ** (1.0 / (2 * k))


def theta_k_star(n: int, d: int, k: int, spec: DistributionSpec) -> float:
    """sup|Z-EZ| * (C(n,d) * d(n-d) / (n VarZ)^k)^(1/2k)."""
    if n < d + 1 or k < 1:
        raise ValueError("need n >= d+1 and k >= 1")
    inner = comb(n, d) * d * (n - d) / (n * spec.variance) ** k
    return spec.sup_centered * inner ** (1.0 / (2 * k))


def theta_k_sum_form(n: int, d: int, k: int, spec: DistributionSpec) -> float:
    """theta_k from its cell-sum definition: for every (d-1)-cell sigma, sum
    E|H_{sigma omega(i)}|^2 over the vertices i outside sigma (one arbitrary
    neighbor omega per i), raise to the k, and sum over sigma."""
    from itertools import combinations

    entry_sq = spec.variance / (n * spec.variance)
    total = 0.0
    for sigma in combinations(range(n), d):
        inner = sum(entry_sq for i in range(n) if i not in sigma)
        total += inner**k
    return total ** (1.0 / (2 * k))


def theta_k_star_sum_form(n: int, d: int, k: int, spec: DistributionSpec) -> float:
    """theta_k_star from its definition: sum of entrywise sup norms to the
    2k over all ordered neighbor pairs."""
    from itertools import combinations

    from .cells import neighbors

    sup_entry = spec.sup_centered / sqrt(n * spec.variance)
    total = 0.0
    for sigma in combinations(range(n), d):
        total += len(neighbors(sigma, n)) * sup_entry ** (2 * k)
    return total ** (1.0 / (2 * k))


def phi(x: float, y: float, k: int, d: int,
        constants: BoundConstants = BoundConstants()) -> float:
    """The envelope function of the Schatten-moment bound."""
    if x <= 0 or y <= 0 or k < 1 or d < 1:
        raise ValueError("need x, y > 0 and k, d >= 1")
    s = x / y + 2.0 * sqrt(k)
    if s <= 1.0:
        raise ValueError(f"log argument {s} <= 1; bound undefined here")
    lead = (factorial(d) * d) ** (1.0 / (2 * k))
    bracket = (
        2.0 * sqrt(d) * s
        + constants.C_d * s ** (2.0 / 3.0) * log(s) ** (2.0 / 3.0)
        + constants.c_d * sqrt(k)
    )
    return lead * y * s ** ((d - 1) / k) * bracket


def schatten_bound(n: int, d: int, k: int, spec: DistributionSpec,
                   constants: BoundConstants = BoundConstants()) -> float:
    """Upper bound on E[||H||_{S_2k}^{2k}]^(1/2k); requires k >= d."""
    if k < d:
        raise ValueError(f"the bound requires k >= d, got k={k}, d={d}")
    return phi(theta_k(n, d, k), theta_k_star(n, d, k, spec), k, d, constants)


def tail_xi(d: int, r: int, u: float, q0: float) -> float:
    """Tail envelope for P(||Y|| > 2 sqrt(dr) + u sqrt(r)); the probability
    bound is (2/(d-1)!) times this value. Valid for r*q0 >= 2."""
    if u <= 0:
        raise ValueError("need u > 0")
    if r * q0 < 2:
        raise ValueError(f"need r*q0 >= 2, got {r * q0}")
    a = 1.0 + u / (2.0 * sqrt(d))
    return a**2 * exp(d * log(r) - ((2.0 / 3.0) * log(a)) ** 1.5 * (r * q0 / d) ** 0.25)


def tail_probability_bound(d: int, r: int, u: float, q0: float) -> float:
    return 2.0 / factorial(d - 1) * tail_xi(d, r, u, q0)


def talagrand_rate(d: int, q0: float) -> float:
    """Concentration rate of ||Y||: P(||Y|| >= E||Y|| + t) <= exp(-rate*t^2)."""
    if d < 1 or not 0 < q0 <= 0.25:
        raise ValueError("need d >= 1 and q0 = p0(1-p0) in (0, 1/4]")
    return q0 / (2.0 * d * (d + 1))


def k_zero(n: int, spec: DistributionSpec) -> int:
    """ceil(sqrt(n Var(Z) log n)), the Schatten order used in the norm limit."""
    if n < 2:
        raise ValueError("need n >= 2")
    return max(1, ceil(sqrt(n * spec.variance * log(n))))


def gamma_interval(xi: float, xi_prime: float, n: int, d: int, p: float) -> float:
    """Half-width of the upper-cluster confinement interval around nq."""
    q = p * (1.0 - p)
    root = sqrt(n * q)
    edge = 2.0 * sqrt(d) + xi
    denom = root - 4.0 * edge
    if denom <= 0:
        raise ValueError(f"need sqrt(nq) > 4(2 sqrt(d)+xi); denominator {denom} <= 0")
    return (
        p * d
        + edge**2 * root / denom
        + 100.0 * d**3.5 * (d + xi_prime) ** 3 * sqrt(q) * log(n) ** 3
    )


def script_E(xi: float, n: int, d: int) -> float:
    """Failure-probability envelope for the cluster confinement event."""
    if xi <= 0 or n < 3 or d < 1:
        raise ValueError("need xi > 0, n >= 3, d >= 1")
    return (
        4.0 * exp(3.0) * d**2.5 / factorial(d - 1)
        * exp(5.0 * log(2.0 * d + 2.0 * xi) + 5.0 * log(log(n)) - xi * log(n))
    )
