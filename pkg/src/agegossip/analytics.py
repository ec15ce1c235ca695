"""Closed-form age expectations and upper bounds for the gossip network.

These are the reference curves the simulator is validated against: the
expected minimum age at the k-th synchronization epoch, its limit, the
gossip-phase and steady-state upper bounds for the opportunistic scheme, and
the sensing-phase bound sequence.

Geometric sums are evaluated in closed form ((1 - r^k) / (1 - r)) rather than
by loop accumulation; the ratio r = lambda_e / (lambda_e + lambda) is always
strictly below 1, so there is no singularity.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class RateParams:
    """Rates and size of the network.

    lambda_e  source self-update rate (events per unit time, > 0)
    lam       total source-to-network update rate (> 0); each of the n nodes
              receives directly at rate lam / n
    B         total gossip rate budget (>= 0); defaults to n * lam
    n         network size (>= 1)
    """

    lambda_e: float
    lam: float
    B: float | None = None
    n: int = 1

    def __post_init__(self) -> None:
        if not self.lambda_e > 0:
            raise ValueError(f"lambda_e must be > 0, got {self.lambda_e}")
        if not self.lam > 0:
            raise ValueError(f"lam must be > 0, got {self.lam}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.B is None:
            object.__setattr__(self, "B", self.n * self.lam)
        elif self.B < 0:
            raise ValueError(f"B must be >= 0, got {self.B}")

    @property
    def staleness_ratio(self) -> float:
        """Probability that no direct source update lands between two epochs."""
        return self.lambda_e / (self.lambda_e + self.lam)


def _geometric_sum(r: float, terms: int) -> float:
    # sum_{l=0}^{terms-1} r^l, exact closed form; terms == 0 gives 0
    if terms <= 0:
        return 0.0
    return (1.0 - r**terms) / (1.0 - r)


def min_age_mean(k: int, p: RateParams) -> float:
    """Expected minimum age across nodes at the k-th epoch.

    Starts at 0 for k = 0 and 1 for k = 1, and satisfies
    a[k+1] = 1 + a[k] * lambda_e / (lambda_e + lambda).
    """
    if k < 0:
        raise ValueError(f"epoch index must be >= 0, got {k}")
    return _geometric_sum(p.staleness_ratio, k)


def min_age_mean_limit(p: RateParams) -> float:
    """Large-k limit of the expected epoch minimum age: (lambda_e + lam) / lam."""
    return (p.lambda_e + p.lam) / p.lam


def gossip_phase_bound(k: int, p: RateParams) -> float:
    """Upper bound on a node's mean age during the k-th gossiping phase."""
    if p.n < 2:
        raise ValueError(f"gossip phase bound needs n >= 2, got n={p.n}")
    if k < 0:
        raise ValueError(f"epoch index must be >= 0, got {k}")
    link = p.B / (p.n - 1)
    return (p.lambda_e + link * min_age_mean(k, p)) / (p.lam / p.n + link)


def steady_state_bound_finite_n(p: RateParams) -> float:
    """Steady-state mean-age upper bound at finite n.

    Equals gossip_phase_bound(k -> infinity) when B = n * lam.
    """
    if p.n < 2:
        raise ValueError(f"steady-state bound needs n >= 2, got n={p.n}")
    link = p.B / (p.n - 1)
    numer = 1.0 + link * (1.0 / p.lam + 1.0 / p.lambda_e)
    denom = 1.0 / p.n + p.n / (p.n - 1)
    return (p.lambda_e / p.lam) * numer / denom


def asymptotic_bound(p: RateParams) -> float:
    """Large-n steady-state upper bound: 2 * lambda_e / lam + 1."""
    return 2.0 * p.lambda_e / p.lam + 1.0


def sensing_bound_seq(k: int, p: RateParams) -> float:
    """Sensing-phase mean-age bound sequence.

    b[1] = 1 and b[k] = 2 + b[k-1] * lambda_e / (lambda_e + lambda); evaluated
    through the equivalent closed form
    b[k] = 2 * sum_{l=0}^{k-2} r^l + r^(k-1).
    """
    if k < 1:
        raise ValueError(f"sequence index must be >= 1, got {k}")
    r = p.staleness_ratio
    return 2.0 * _geometric_sum(r, k - 1) + r ** (k - 1)


def sensing_bound_limit(p: RateParams) -> float:
    """Large-k limit of the sensing-phase bound: 2 * (lambda_e / lam + 1).

    Always exceeds the asymptotic steady-state bound by exactly 1.
    """
    return 2.0 * (p.lambda_e / p.lam + 1.0)
