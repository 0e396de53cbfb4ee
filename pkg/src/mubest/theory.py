"""Closed-form expected simple regret of mu-best averaging on the sphere.

Setting: ``lambda`` points drawn uniformly in the ball ``B(0, r)`` of
``R^d``, objective ``f(x) = ||x - y||^2``, recommendation equal to the mean
of the ``mu`` best points. ``epsilon = ||y|| / r`` measures how far the
optimum sits from the sampling center.

All gamma-function ratios are evaluated as ``exp`` of sums of
:func:`~mubest.mathkit.ln_gamma` so that ``lambda`` can reach 1e6 without
overflow.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DomainError
from .mathkit import binomial_cdf, ln_gamma


class TheoryWarning(UserWarning):
    """An expression was evaluated outside the hypotheses of its asymptotic result."""


@dataclass(frozen=True)
class TheoryParams:
    d: int
    lam: int
    mu: int
    r: float = 1.0
    epsilon: float = 0.0

    def __post_init__(self):
        if self.d < 1:
            raise DomainError(f"d must be >= 1, got {self.d}")
        if self.lam < 2:
            raise DomainError(f"lambda must be >= 2, got {self.lam}")
        if not 1 <= self.mu < self.lam:
            raise DomainError(f"need 1 <= mu < lambda, got mu={self.mu}, lambda={self.lam}")
        if not self.r > 0:
            raise DomainError(f"r must be positive, got {self.r}")
        if not 0.0 <= self.epsilon < 1.0:
            raise DomainError(f"epsilon must lie in [0, 1), got {self.epsilon}")


@dataclass(frozen=True)
class RegretBounds:
    lower: float
    upper: float

    @property
    def gap(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class AsymptoticSpec:
    c: float
    d: int
    r: float = 1.0
    epsilon: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.c < 1.0:
            raise DomainError(f"selection ratio c must lie in (0, 1), got {self.c}")
        if self.d < 1 or not self.r > 0 or not 0.0 <= self.epsilon < 1.0:
            raise DomainError("invalid d, r or epsilon")

    @property
    def threshold(self) -> float:
        """Largest admissible ratio ``(1 - epsilon)**d``."""
        return (1.0 - self.epsilon) ** self.d

    @property
    def admissible(self) -> bool:
        return self.c < self.threshold


def _log_gamma_shift_ratio(n: float, d: int) -> float:
    """``ln Gamma(n + 1 + 2/d) - ln Gamma(n + 1)``."""
    return ln_gamma(n + 1.0 + 2.0 / d) - ln_gamma(n + 1.0)


def regret_mu_avg_centered(p: TheoryParams) -> float:
    """Exact ``E[f(mean of mu best)]`` when the optimum is the sampling center.

    .. math::

        \\frac{r^2 d\\,\\Gamma(\\lambda+1)\\Gamma(\\mu+1+2/d)}
             {\\mu (d+2)\\Gamma(\\mu+1)\\Gamma(\\lambda+1+2/d)}

    ``p.epsilon`` is ignored.
    """
    log_ratio = _log_gamma_shift_ratio(p.mu, p.d) - _log_gamma_shift_ratio(p.lam, p.d)
    return p.r ** 2 * p.d / (p.mu * (p.d + 2)) * math.exp(log_ratio)


def regret_one_best_centered(d: int, lam: int, r: float = 1.0) -> float:
    """Exact ``E[f(best point)]`` for ``lam`` uniform draws in ``B(0, r)``."""
    if d < 1 or lam < 1 or not r > 0:
        raise DomainError(f"invalid arguments d={d}, lam={lam}, r={r}")
    log_val = ln_gamma((d + 2.0) / d) - _log_gamma_shift_ratio(lam, d)
    return r ** 2 * math.exp(log_val)


def conditional_regret_mu_avg(d: int, mu: int, h: float) -> float:
    """``E[f(mean of mu best) | f(X_(mu+1)) = h]``, equal to ``(h / mu) d / (d + 2)``."""
    if d < 1 or mu < 1 or not h > 0:
        raise DomainError(f"invalid arguments d={d}, mu={mu}, h={h}")
    return h / mu * d / (d + 2.0)


def conditional_regret_one_best(d: int, mu: int, h: float) -> float:
    """``E[f(best point) | f(X_(mu+1)) = h]`` (a beta integral, linear in ``h``)."""
    if d < 1 or mu < 1 or not h > 0:
        raise DomainError(f"invalid arguments d={d}, mu={mu}, h={h}")
    return h * math.exp(ln_gamma((d + 2.0) / d) - _log_gamma_shift_ratio(mu, d))


def regret_bounds_noncentered(p: TheoryParams) -> RegretBounds:
    """Lower and upper bounds on the regret when ``||y|| = epsilon r``.

    The lower bound is the centered value; the upper bound adds
    ``4 r^2 P(U <= mu)`` with ``U ~ Binomial(lambda, (1 - epsilon)^d)``.
    """
    lower = regret_mu_avg_centered(p)
    tail = binomial_cdf(p.lam, (1.0 - p.epsilon) ** p.d, p.mu)
    return RegretBounds(lower, lower + 4.0 * p.r ** 2 * tail)


def regret_asymptotic(a: AsymptoticSpec, lam: int) -> float:
    """Leading-order regret ``d r^2 c^(2/d - 1) / ((d + 2) lam)`` for ``mu = floor(c lam)``.

    Emits :class:`TheoryWarning` when ``c >= (1 - epsilon)^d``; the value is
    still returned because sweeps across the threshold are legitimate.
    """
    if lam < 1:
        raise DomainError(f"lambda must be >= 1, got {lam}")
    if not a.admissible:
        warnings.warn(
            f"c={a.c} is not below (1 - epsilon)^d = {a.threshold:.6g}; "
            "the asymptotic rate does not apply",
            TheoryWarning,
            stacklevel=2,
        )
    return a.d * a.r ** 2 * a.c ** (2.0 / a.d - 1.0) / ((a.d + 2.0) * lam)
