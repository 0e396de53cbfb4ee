"""Convex-hull prefix statistic used by the hull-capped mu rules.

``h`` is the length of the longest rank-ordered prefix in which each point
lies on the boundary of the convex hull of itself and its predecessors.
A point is accepted when its Euclidean distance to the hull of the strictly
better points exceeds a tolerance; the distance comes from Wolfe's
minimum-norm-point algorithm.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .selection import RankedBatch

# Wolfe's tolerances: objective-decrease test, positivity of affine weights,
# and weight pruning.
_TOL_DECREASE = 1e-12
_TOL_WEIGHT = 1e-10
_TOL_PRUNE = 1e-12


@dataclass(frozen=True)
class MinNormResult:
    distance: float
    weights: np.ndarray
    converged: bool
    iterations: int


@dataclass(frozen=True)
class HullPrefixResult:
    h: int
    first_interior_index: int | None
    distances: np.ndarray = field(repr=False)


def _affine_minimizer(P: np.ndarray) -> np.ndarray:
    """Weights (summing to one) of the min-norm point of the affine hull of the rows of P."""
    k = P.shape[0]
    G = P @ P.T
    A = np.empty((k + 1, k + 1))
    A[:k, :k] = G
    A[:k, k] = 1.0
    A[k, :k] = 1.0
    A[k, k] = 0.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    try:
        sol = np.linalg.solve(A, rhs)
        if not np.all(np.isfinite(sol)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        sol = np.linalg.lstsq(A, rhs, rcond=None)[0]
    w = sol[:k]
    return w / w.sum()


def min_norm_point(P: np.ndarray, max_iter: int | None = None) -> MinNormResult:
    """Point of minimum Euclidean norm in the convex hull of the rows of ``P``.

    Wolfe (1976). The returned weights are over all rows of ``P``.
    """
    P = np.asarray(P, dtype=float)
    k, d = P.shape
    if max_iter is None:
        max_iter = 10 * (d + k)
    sq = np.einsum("ij,ij->i", P, P)
    scale = sq.max()
    if scale == 0.0:
        w = np.zeros(k)
        w[0] = 1.0
        return MinNormResult(0.0, w, True, 0)

    active = [int(np.argmin(sq))]
    weights = np.array([1.0])
    x = P[active[0]].copy()
    iterations = 0
    converged = False
    while iterations < max_iter:
        iterations += 1
        xx = x @ x
        if xx <= _TOL_DECREASE * scale:
            converged = True
            break
        proj = P @ x
        j = int(np.argmin(proj))
        if proj[j] > xx - _TOL_DECREASE * scale or j in active:
            converged = True
            break
        active.append(j)
        weights = np.append(weights, 0.0)

        # minor cycles: move toward the affine minimizer until it is interior
        while iterations < max_iter:
            S = P[active]
            v = _affine_minimizer(S)
            if np.all(v > _TOL_WEIGHT):
                weights = v
                x = v @ S
                break
            iterations += 1
            neg = v <= _TOL_WEIGHT
            denom = weights[neg] - v[neg]
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(denom > 0, weights[neg] / denom, np.inf)
            theta = min(1.0, float(ratios.min()))
            weights = (1.0 - theta) * weights + theta * v
            keep = weights > _TOL_PRUNE
            if not np.any(keep):
                keep[np.argmax(weights)] = True
            active = [a for a, kept in zip(active, keep) if kept]
            weights = weights[keep]
            weights = weights / weights.sum()
            x = weights @ P[active]

    full = np.zeros(k)
    full[active] = weights
    return MinNormResult(float(np.sqrt(max(x @ x, 0.0))), full, converged, iterations)


def dist_to_hull(x, vertices, max_iter: int | None = None) -> float:
    """Euclidean distance from ``x`` to the convex hull of ``vertices`` (k x d)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    V = np.asarray(vertices, dtype=float)
    if V.ndim == 1:
        V = V[None, :]
    if V.ndim != 2 or V.shape[0] < 1:
        raise InputError("vertices must be a non-empty k x d array")
    if x.ndim != 1 or V.shape[1] != x.shape[0]:
        raise InputError(f"point of shape {x.shape} does not match vertices {V.shape}")
    return min_norm_point(V - x, max_iter=max_iter).distance


def default_tolerance(points: np.ndarray) -> float:
    return 1e-9 * (1.0 + float(np.linalg.norm(points, axis=1).max()))


def _separation_margin(prefix: np.ndarray, x: np.ndarray) -> float:
    """Lower bound on the distance from ``x`` to the hull of ``prefix``.

    Tries two candidate separating directions (away from the best point and
    away from the prefix centroid); returns the larger certified margin, or
    a non-positive value when neither separates.
    """
    best = -np.inf
    for anchor in (prefix[0], prefix.mean(axis=0)):
        u = x - anchor
        norm = np.sqrt(u @ u)
        if norm == 0.0:
            continue
        margin = float(((x - prefix) @ u).min()) / norm
        best = max(best, margin)
    return best


def frontier_prefix_h(batch: RankedBatch, tol: float | None = None,
                      stop_at: int | None = None, exact_distances: bool = False
                      ) -> HullPrefixResult:
    """Longest ranked prefix whose points all sit on their running hull boundary.

    Parameters
    ----------
    batch : RankedBatch
    tol : float, optional
        A point counts as interior when its distance to the hull of the
        better points is ``<= tol``. Defaults to
        ``1e-9 * (1 + max point norm)``.
    stop_at : int, optional
        Stop scanning once the prefix reaches this length. The returned
        ``h`` is then ``min(h, stop_at)``; hull-capped rules never need
        more than ``lambda / 4``.
    exact_distances : bool
        By default a point separated from its predecessors by a cheap
        hyperplane test skips the min-norm solve, and its recorded distance
        is the certified lower bound. Set to True to always solve.

    Notes
    -----
    If the min-norm solver hits its iteration cap the point is kept on the
    frontier, which can only make ``h`` larger.
    """
    pts = batch.ranked_points()
    lam = pts.shape[0]
    if tol is None:
        tol = default_tolerance(pts)
    limit = lam if stop_at is None else max(1, min(int(stop_at), lam))
    distances = np.full(limit, np.inf)
    for j in range(1, limit):
        if not exact_distances:
            margin = _separation_margin(pts[:j], pts[j])
            if margin > tol:
                distances[j] = margin
                continue
        res = min_norm_point(pts[:j] - pts[j])
        distances[j] = res.distance
        if res.converged and res.distance <= tol:
            return HullPrefixResult(j, j, distances[: j + 1])
    return HullPrefixResult(limit, None, distances)
