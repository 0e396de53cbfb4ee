"""Ranking a batch, choosing mu, and averaging the mu best points."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InputError


class RuleKind(Enum):
    SINGLE_BEST = "best"
    AVG = "avg"
    EAVG = "eavg"
    HCHAVG = "hchavg"
    TEAVG = "teavg"
    THCHAVG = "thchavg"
    FIXED_RATIO = "ratio"
    FIXED = "fixed"


_HULL_KINDS = (RuleKind.HCHAVG, RuleKind.THCHAVG)


@dataclass(frozen=True)
class MuRule:
    """How many of the ranked points to average.

    Build one with :meth:`parse` from its canonical spelling (``best``,
    ``avg``, ``eavg``, ``hchavg``, ``teavg``, ``thchavg``, ``ratio:<c>``,
    ``fixed:<m>``) or directly from a :class:`RuleKind`.
    """

    kind: RuleKind
    ratio: float | None = None
    count: int | None = None

    def __post_init__(self):
        if self.kind is RuleKind.FIXED_RATIO:
            if self.ratio is None or not 0.0 < self.ratio < 1.0:
                raise InputError(f"ratio rule needs c in (0, 1), got {self.ratio}")
        if self.kind is RuleKind.FIXED:
            if self.count is None or self.count < 1:
                raise InputError(f"fixed rule needs m >= 1, got {self.count}")

    @property
    def needs_hull(self) -> bool:
        return self.kind in _HULL_KINDS

    @property
    def name(self) -> str:
        if self.kind is RuleKind.FIXED_RATIO:
            return f"ratio:{self.ratio:g}"
        if self.kind is RuleKind.FIXED:
            return f"fixed:{self.count}"
        return self.kind.value

    def __str__(self):
        return self.name

    @classmethod
    def parse(cls, text: str) -> "MuRule":
        text = text.strip().lower()
        head, _, arg = text.partition(":")
        try:
            kind = RuleKind(head)
        except ValueError:
            raise InputError(f"unknown mu rule {text!r}") from None
        if kind is RuleKind.FIXED_RATIO:
            try:
                return cls(kind, ratio=float(arg))
            except ValueError:
                raise InputError(f"bad ratio in {text!r}") from None
        if kind is RuleKind.FIXED:
            try:
                return cls(kind, count=int(arg))
            except ValueError:
                raise InputError(f"bad count in {text!r}") from None
        if arg:
            raise InputError(f"rule {head!r} takes no argument")
        return cls(kind)


SINGLE_BEST = MuRule(RuleKind.SINGLE_BEST)
AVG = MuRule(RuleKind.AVG)
EAVG = MuRule(RuleKind.EAVG)
HCHAVG = MuRule(RuleKind.HCHAVG)
TEAVG = MuRule(RuleKind.TEAVG)
THCHAVG = MuRule(RuleKind.THCHAVG)
STANDARD_RULES = (SINGLE_BEST, AVG, EAVG, HCHAVG, TEAVG, THCHAVG)


@dataclass(frozen=True)
class RankedBatch:
    """Sampled points with their fitness, plus the ascending-fitness order."""

    points: np.ndarray
    fitness: np.ndarray
    order: np.ndarray

    @property
    def lam(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def ranked_points(self, count: int | None = None) -> np.ndarray:
        """Points in rank order, best first (optionally only the first ``count``)."""
        idx = self.order if count is None else self.order[:count]
        return self.points[idx]


@dataclass(frozen=True)
class Recommendation:
    point: np.ndarray
    mu_used: int
    h_used: int | None = None


def rank(points, fitness) -> RankedBatch:
    """Sort a batch by ascending fitness; ties keep input order."""
    points = np.asarray(points, dtype=float)
    fitness = np.asarray(fitness, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if points.ndim != 2 or fitness.ndim != 1 or points.shape[0] != fitness.shape[0]:
        raise InputError(
            f"points {points.shape} and fitness {fitness.shape} do not describe one batch"
        )
    if points.shape[0] < 1 or points.shape[1] < 1:
        raise InputError("empty batch")
    if not np.all(np.isfinite(fitness)):
        raise InputError("fitness values must be finite")
    order = np.argsort(fitness, kind="stable")
    return RankedBatch(points, fitness, order)


def clip(a: float, b: float, c: float) -> float:
    """Projection of ``c`` on ``[a, b]``, i.e. ``max(a, min(b, c))``.

    When ``a > b`` the result is ``a``, which is what the formula gives.
    """
    return max(a, min(b, c))


def compute_mu(rule: MuRule, lam: int, d: int, h: int | None = None) -> int:
    """Number of best points to average under ``rule``.

    The real-valued rule is floored, then clamped to ``[1, lam]``. An
    unbounded upper clip end is represented by ``lam``.
    """
    if lam < 1 or d < 1:
        raise InputError(f"need lam >= 1 and d >= 1, got lam={lam}, d={d}")
    kind = rule.kind
    if rule.needs_hull and h is None:
        raise InputError(f"rule {rule.name} requires the hull prefix h")

    if kind is RuleKind.SINGLE_BEST:
        value = 1.0
    elif kind is RuleKind.AVG:
        value = clip(1, d, lam / 4)
    elif kind is RuleKind.EAVG:
        value = clip(1, lam, lam / 1.1 ** d)
    elif kind is RuleKind.TEAVG:
        value = clip(1, lam, lam / 1.01 ** d)
    elif kind is RuleKind.HCHAVG:
        value = clip(1, min(h, lam / 4), d + lam / 1.1 ** d)
    elif kind is RuleKind.THCHAVG:
        value = clip(1, min(h, lam / 4), d + lam / 1.01 ** d)
    elif kind is RuleKind.FIXED_RATIO:
        value = rule.ratio * lam
    else:
        value = rule.count
    return int(min(max(math.floor(value), 1), lam))


def recommend(batch: RankedBatch, mu: int, h: int | None = None) -> Recommendation:
    """Coordinate-wise mean of the ``mu`` best points."""
    if not 1 <= mu <= batch.lam:
        raise InputError(f"mu must lie in [1, {batch.lam}], got {mu}")
    if mu == 1:
        point = batch.points[batch.order[0]].copy()
    else:
        point = batch.ranked_points(mu).mean(axis=0)
    return Recommendation(point, int(mu), h)
