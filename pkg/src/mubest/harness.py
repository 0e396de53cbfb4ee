"""Monte Carlo experiments: exact-formula validation and rule comparison.

Every repetition draws from its own :class:`~mubest.mathkit.RngStream`, so
results depend only on the configuration and the master seed, never on the
order in which repetitions run or on the number of workers.

Stream ids
----------
* validation experiments: repetition ``i`` uses stream id ``i``;
* rule comparison: repetition ``i`` at batch size ``lam`` uses stream id
  ``(lam << 32) | i`` so that each budget is an independent experiment.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import InputError
from .hull import frontier_prefix_h
from .mathkit import BallSpec, RngStream, sample_gaussian, sample_uniform_ball
from .objectives import Kind, Objective, make_translated, optimum_regret
from .selection import MuRule, compute_mu, rank, recommend
from .theory import TheoryParams, regret_bounds_noncentered, regret_mu_avg_centered

CENTERED = "centered-validation"
NONCENTERED = "noncentered-validation"
RULE_COMPARISON = "rule-comparison"
EXPERIMENT_KINDS = (CENTERED, NONCENTERED, RULE_COMPARISON)

DEFAULT_LAMBDAS = (16, 64, 256, 1024, 4096)
DEFAULT_REPS = {CENTERED: 1000, NONCENTERED: 10000, RULE_COMPARISON: 100}


@dataclass(frozen=True)
class UniformBallSampler:
    center: np.ndarray
    radius: float = 1.0

    def draw(self, rng: RngStream, lam: int) -> np.ndarray:
        return sample_uniform_ball(rng, BallSpec(self.center, self.radius), lam)


@dataclass(frozen=True)
class GaussianSampler:
    d: int
    scale: float = 1.0

    def draw(self, rng: RngStream, lam: int) -> np.ndarray:
        return sample_gaussian(rng, self.d, self.scale, size=lam)


@dataclass(frozen=True)
class RegretEstimate:
    mean: float
    stderr: float
    reps: int

    @classmethod
    def from_samples(cls, values) -> "RegretEstimate":
        """Mean and standard error, summed with ``math.fsum`` so order does not matter."""
        values = [float(v) for v in values]
        n = len(values)
        if n == 0:
            raise InputError("no samples")
        mean = math.fsum(values) / n
        if n == 1:
            return cls(mean, 0.0, 1)
        var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
        return cls(mean, math.sqrt(var / n), n)


@dataclass
class CurveSeries:
    label: str
    x: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.mean = np.asarray(self.mean, dtype=float)
        self.stderr = np.asarray(self.stderr, dtype=float)
        if not (self.x.shape == self.mean.shape == self.stderr.shape) or self.x.ndim != 1:
            raise InputError(f"series {self.label!r} has mismatched lengths")
        if np.any(np.diff(self.x) <= 0):
            raise InputError(f"series {self.label!r} must have strictly increasing x")

    @classmethod
    def from_estimates(cls, label, x, estimates: Sequence[RegretEstimate]) -> "CurveSeries":
        return cls(label, x, [e.mean for e in estimates], [e.stderr for e in estimates])

    @classmethod
    def exact(cls, label, x, values) -> "CurveSeries":
        return cls(label, x, values, np.zeros(len(values)))


@dataclass
class ExperimentConfig:
    kind: str
    d: int
    lambdas: tuple = DEFAULT_LAMBDAS
    mus: tuple = ()
    rules: tuple = ()
    r: float = 1.0
    scale: float = 1.0
    epsilon: float = 0.0
    objective: str = "sphere"
    reps: int | None = None
    seed: int = 0
    out_dir: str | None = None
    workers: int = 1
    translation: str = "std"

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise InputError(f"unknown experiment kind {self.kind!r}")
        if self.reps is None:
            self.reps = DEFAULT_REPS[self.kind]
        self.lambdas = tuple(int(v) for v in np.atleast_1d(self.lambdas))
        self.mus = tuple(sorted({int(v) for v in np.atleast_1d(self.mus)})) if len(self.mus) else ()
        rules = (r if isinstance(r, MuRule) else MuRule.parse(r) for r in self.rules)
        self.rules = tuple(dict.fromkeys(rules))
        self.objective = Kind.parse(self.objective).value
        if self.d < 1:
            raise InputError(f"d must be >= 1, got {self.d}")
        if self.reps < 1:
            raise InputError(f"reps must be >= 1, got {self.reps}")
        if not self.lambdas or min(self.lambdas) < 2:
            raise InputError("lambda list must be non-empty with entries >= 2")
        if not self.r > 0 or not self.scale > 0:
            raise InputError("r and scale must be positive")
        if not 0.0 <= self.epsilon < 1.0:
            raise InputError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if self.workers < 1:
            raise InputError("workers must be >= 1")
        if self.kind == RULE_COMPARISON:
            if not self.rules:
                raise InputError("rule comparison needs at least one rule")
        else:
            if len(self.lambdas) != 1:
                raise InputError("validation experiments take exactly one lambda")
            if not self.mus:
                raise InputError("validation experiments need a non-empty mu list")
            if self.mus[0] < 1 or self.mus[-1] >= self.lambdas[0]:
                raise InputError("every mu must satisfy 1 <= mu < lambda")

    @property
    def lam(self) -> int:
        return self.lambdas[0]


def _map_reps(fn: Callable[[int], object], reps: int, workers: int) -> list:
    if workers == 1:
        return [fn(i) for i in range(reps)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(reps)))


def prefix_mean_regrets(ranked_points: np.ndarray, mus, y) -> np.ndarray:
    """Sphere regret ``||mean of first mu rows - y||^2`` for every ``mu`` in ``mus``."""
    mus = np.asarray(mus, dtype=int)
    csum = np.cumsum(ranked_points[: mus.max()], axis=0)
    means = csum[mus - 1] / mus[:, None]
    diff = means - y
    return np.einsum("ij,ij->i", diff, diff)


def hull_prefix_for(batch, lam: int) -> int:
    """Hull prefix ``h``, scanned only as far as the hull-capped rules can use it."""
    return frontier_prefix_h(batch, stop_at=math.ceil(lam / 4)).h


def one_shot_trial(rng: RngStream, objective: Objective, sampler, lam: int, rule: MuRule) -> float:
    """Sample one batch, select and average, return the simple regret of the recommendation."""
    return one_shot_trial_rules(rng, objective, sampler, lam, (rule,))[0]


def one_shot_trial_rules(rng: RngStream, objective: Objective, sampler, lam: int,
                         rules: Sequence[MuRule]) -> list[float]:
    """Like :func:`one_shot_trial` but scores several rules on one shared batch."""
    return _score_rules(objective, sampler.draw(rng, lam), rules)[0]


def _score_rules(objective: Objective, points: np.ndarray, rules: Sequence[MuRule]):
    lam = points.shape[0]
    batch = rank(points, optimum_regret(objective, points))
    h = hull_prefix_for(batch, lam) if any(r.needs_hull for r in rules) else None
    regrets = []
    for rule in rules:
        mu = compute_mu(rule, lam, objective.d, h)
        rec = recommend(batch, mu, h if rule.needs_hull else None)
        regrets.append(float(optimum_regret(objective, rec.point)))
    return regrets, h


class MomentAccumulator:
    """Running mean and variance of vectors, with Neumaier-compensated sums.

    Values are shifted by the first observation before accumulating, which
    keeps the sum of squares free of cancellation.
    """

    def __init__(self):
        self.n = 0
        self._shift = None
        self._sums = None

    def _add(self, idx, value):
        total, comp = self._sums[idx]
        t = total + value
        big = np.abs(total) >= np.abs(value)
        comp += np.where(big, (total - t) + value, (value - t) + total)
        self._sums[idx] = (t, comp)

    def add(self, values) -> None:
        values = np.asarray(values, dtype=float)
        if self._shift is None:
            self._shift = values.copy()
            zero = np.zeros_like(values)
            self._sums = [(zero.copy(), zero.copy()), (zero.copy(), zero.copy())]
        dev = values - self._shift
        self._add(0, dev)
        self._add(1, dev * dev)
        self.n += 1

    def estimates(self) -> list[RegretEstimate]:
        if self.n == 0:
            raise InputError("no samples")
        s1 = self._sums[0][0] + self._sums[0][1]
        s2 = self._sums[1][0] + self._sums[1][1]
        mean = self._shift + s1 / self.n
        if self.n == 1:
            stderr = np.zeros_like(mean)
        else:
            var = np.maximum(s2 - s1 * s1 / self.n, 0.0) / (self.n - 1)
            stderr = np.sqrt(var / self.n)
        return [RegretEstimate(float(m), float(e), self.n) for m, e in zip(mean, stderr)]


def _validation_estimates(cfg: ExperimentConfig, y: np.ndarray) -> list[RegretEstimate]:
    """Per-mu regret estimates on uniform-ball batches.

    All mu values of one repetition share that repetition's batch;
    repetitions are reduced in index order.
    """
    sampler = UniformBallSampler(np.zeros(cfg.d), cfg.r)
    mus = np.asarray(cfg.mus)

    def rep(i):
        rng = RngStream(cfg.seed, i)
        pts = sampler.draw(rng, cfg.lam)
        fit = np.einsum("ij,ij->i", pts - y, pts - y)
        batch = rank(pts, fit)
        return prefix_mean_regrets(batch.ranked_points(), mus, y)

    acc = MomentAccumulator()
    chunk = max(1, 64 * cfg.workers)
    for start in range(0, cfg.reps, chunk):
        stop = min(cfg.reps, start + chunk)
        for row in _map_reps(lambda k: rep(start + k), stop - start, cfg.workers):
            acc.add(row)
    return acc.estimates()


def run_validation_centered(cfg: ExperimentConfig) -> tuple[CurveSeries, CurveSeries]:
    """Monte Carlo regret vs exact value over the mu grid, optimum at the center."""
    if cfg.kind != CENTERED:
        raise InputError(f"expected a {CENTERED} config, got {cfg.kind}")
    est = _validation_estimates(cfg, np.zeros(cfg.d))
    empirical = CurveSeries.from_estimates("empirical", cfg.mus, est)
    theory = [regret_mu_avg_centered(TheoryParams(cfg.d, cfg.lam, mu, cfg.r)) for mu in cfg.mus]
    return empirical, CurveSeries.exact("theory", cfg.mus, theory)


@dataclass
class NoncenteredResult:
    empirical: CurveSeries
    lower: CurveSeries
    upper: CurveSeries
    argmin_mu: int
    estimates: list = field(repr=False, default_factory=list)

    @property
    def series(self) -> list[CurveSeries]:
        return [self.empirical, self.lower, self.upper]


def run_validation_noncentered(cfg: ExperimentConfig) -> NoncenteredResult:
    """Monte Carlo regret against the lower and upper bounds, ``||y|| = epsilon r``.

    The optimum sits on the first axis. ``argmin_mu`` is the grid value
    with the smallest empirical mean.
    """
    if cfg.kind != NONCENTERED:
        raise InputError(f"expected a {NONCENTERED} config, got {cfg.kind}")
    y = np.zeros(cfg.d)
    y[0] = cfg.epsilon * cfg.r
    est = _validation_estimates(cfg, y)
    bounds = [
        regret_bounds_noncentered(TheoryParams(cfg.d, cfg.lam, mu, cfg.r, cfg.epsilon))
        for mu in cfg.mus
    ]
    argmin = cfg.mus[int(np.argmin([e.mean for e in est]))]
    return NoncenteredResult(
        CurveSeries.from_estimates("empirical", cfg.mus, est),
        CurveSeries.exact("lower bound", cfg.mus, [b.lower for b in bounds]),
        CurveSeries.exact("upper bound", cfg.mus, [b.upper for b in bounds]),
        int(argmin),
        est,
    )


def rule_comparison_stream(seed: int, lam: int, rep: int) -> RngStream:
    return RngStream(seed, (int(lam) << 32) | int(rep))


def run_rule_comparison(cfg: ExperimentConfig, on_hull: Callable[[int, int], None] | None = None
                        ) -> list[CurveSeries]:
    """Mean regret of each rule as a function of the batch size.

    Each repetition draws a fresh translated objective and a Gaussian batch
    shared by all rules. ``on_hull(lam, h)`` is called with every computed
    hull prefix, for diagnostics.
    """
    if cfg.kind != RULE_COMPARISON:
        raise InputError(f"expected a {RULE_COMPARISON} config, got {cfg.kind}")
    sampler = GaussianSampler(cfg.d, cfg.scale)
    needs_hull = any(r.needs_hull for r in cfg.rules)
    lambdas = sorted(set(cfg.lambdas))
    per_rule = {rule: [] for rule in cfg.rules}
    for lam in lambdas:
        def rep(i, lam=lam):
            rng = rule_comparison_stream(cfg.seed, lam, i)
            obj = make_translated(rng, cfg.objective, cfg.d, cfg.translation)
            return _score_rules(obj, sampler.draw(rng, lam), cfg.rules)

        results = _map_reps(rep, cfg.reps, cfg.workers)
        if on_hull is not None and needs_hull:
            for _, h in results:
                on_hull(lam, h)
        matrix = np.array([r for r, _ in results])
        for j, rule in enumerate(cfg.rules):
            per_rule[rule].append(RegretEstimate.from_samples(matrix[:, j]))
    return [CurveSeries.from_estimates(rule.name, lambdas, per_rule[rule]) for rule in cfg.rules]


def log_log_slope(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])


def output_dir(cfg: ExperimentConfig) -> Path:
    if cfg.out_dir is None:
        raise InputError("no output directory configured")
    path = Path(cfg.out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path
