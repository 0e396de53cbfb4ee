"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``[criterion N] PASS|FAIL`` line (visible even
without ``-s``) before asserting, so the full report survives a failure.
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from mubest.cli import main
from mubest.harness import (
    CENTERED,
    NONCENTERED,
    RULE_COMPARISON,
    ExperimentConfig,
    run_rule_comparison,
    run_validation_centered,
    run_validation_noncentered,
)
from mubest.hull import frontier_prefix_h
from mubest.mathkit import BallSpec, RngStream, binomial_cdf, log_binomial_cdf, sample_uniform_ball
from mubest.selection import rank
from mubest.theory import TheoryParams, regret_mu_avg_centered, regret_one_best_centered

GRID = [(d, lam) for d in (2, 3, 5, 10) for lam in (10, 100, 1000)]


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")
        return ok

    return emit


def test_criterion_01_centered_validation(report):
    mus = (1, 2, 5, 10, 20, 50, 100, 200, 500, 999)
    cfg = ExperimentConfig(CENTERED, 5, (1000,), mus, r=1.0, reps=1000, seed=0, workers=1)
    t0 = time.perf_counter()
    emp, theory = run_validation_centered(cfg)
    elapsed = time.perf_counter() - t0
    z = np.abs(emp.mean - theory.mean) / emp.stderr
    ok = bool(np.all(z < 4) and elapsed < 60)
    assert report(1, ok, f"max |z| = {z.max():.2f} (< 4) over {len(mus)} mu values, {elapsed:.1f} s (< 60 s)")


def test_criterion_02_strict_decrease(report):
    worst = -math.inf
    for d, lam in GRID:
        vals = np.array([regret_mu_avg_centered(TheoryParams(d, lam, mu)) for mu in range(1, lam)])
        # largest value of v[mu+1] / v[mu] - (1 - 1e-12); must stay negative
        worst = max(worst, float(np.max(vals[1:] / vals[:-1])) - (1 - 1e-12))
    ok = worst < 0
    assert report(2, ok, f"max consecutive ratio exceeds 1 - 1e-12 by {worst:.3e} (must be < 0)")


def test_criterion_03_mu_one_reduction(report):
    worst = max(
        abs(regret_mu_avg_centered(TheoryParams(d, lam, 1)) - regret_one_best_centered(d, lam))
        / regret_one_best_centered(d, lam)
        for d, lam in GRID
    )
    ok = worst < 1e-10
    assert report(3, ok, f"max relative difference {worst:.2e} (< 1e-10)")


def test_criterion_04_rate_exponents(report):
    d = 5
    lams = np.array([10 ** 2, 10 ** 3, 10 ** 4, 10 ** 5])
    best = [regret_mu_avg_centered(TheoryParams(d, int(l), 1)) for l in lams]
    prop = [regret_mu_avg_centered(TheoryParams(d, int(l), int(0.1 * l))) for l in lams]
    s1 = np.polyfit(np.log(lams), np.log(best), 1)[0]
    s2 = np.polyfit(np.log(lams), np.log(prop), 1)[0]
    ok = abs(s1 + 2 / d) <= 0.02 and abs(s2 + 1) <= 0.05
    assert report(4, ok, f"slope(mu=1) = {s1:.4f} (target {-2 / d:.2f} +/- 0.02), "
                         f"slope(mu=0.1 lambda) = {s2:.4f} (target -1 +/- 0.05)")


def test_criterion_05_asymptotic_constant(report):
    d, c, r, lam = 5, 0.1, 1.0, 10 ** 5
    exact = regret_mu_avg_centered(TheoryParams(d, lam, math.floor(c * lam), r))
    asym = d * r ** 2 * c ** (2 / d - 1) / ((d + 2) * lam)
    ratio = exact / asym
    ok = abs(ratio - 1) <= 0.02
    assert report(5, ok, f"exact / asymptotic = {ratio:.5f} (within 0.02 of 1)")


def test_criterion_06a_noncentered_sandwich(report):
    mus = (1, 2, 5, 10, 20, 30, 50, 70, 90, 99)
    cfg = ExperimentConfig(NONCENTERED, 5, (100,), mus, r=1.0, epsilon=1 / 3, reps=10_000, seed=0)
    res = run_validation_noncentered(cfg)
    e = res.empirical
    below = (res.lower.mean - 3 * e.stderr) - e.mean
    above = e.mean - (res.upper.mean + 3 * e.stderr)
    ok = bool(np.all(below <= 0) and np.all(above <= 0))
    assert report("6a", ok, f"lambda=100: all {len(mus)} means inside [lower - 3 se, upper + 3 se] "
                            f"(worst excess {max(below.max(), above.max()):.3e})")


@pytest.mark.slow
def test_criterion_06b_noncentered_argmin(report):
    d, eps, lam = 5, 1 / 3, 10_000
    cfg = ExperimentConfig(NONCENTERED, d, (lam,), tuple(range(1, lam)), r=1.0, epsilon=eps,
                           reps=10_000, seed=0)
    res = run_validation_noncentered(cfg)
    transition = (1 - eps) ** d * lam
    lo, hi = 0.3 * transition, 1.5 * transition
    ok = lo <= res.argmin_mu <= hi
    assert report("6b", ok, f"lambda=10000: empirical argmin mu* = {res.argmin_mu} "
                            f"({res.argmin_mu / transition:.3f} x transition) in [{lo:.1f}, {hi:.1f}]")


def test_criterion_07_binomial_kernel(report):
    worst = 0.0
    for p in (0.05, 0.3, 0.5, 0.77, 0.95):
        q = Fraction(p)
        for n in range(1, 21):
            pmf = [math.comb(n, i) * q ** i * (1 - q) ** (n - i) for i in range(n + 1)]
            for k in range(n + 1):
                worst = max(worst, abs(binomial_cdf(n, p, k) - float(sum(pmf[: k + 1]))))
    tail = binomial_cdf(10_000, (2 / 3) ** 5, 100)
    log_tail = log_binomial_cdf(10_000, (2 / 3) ** 5, 100)
    ok = worst < 1e-12 and tail < 1e-6
    assert report(7, ok, f"max |error| for n <= 20 is {worst:.2e} (< 1e-12); "
                         f"P(Bin(1e4, (2/3)^5) <= 100) = {tail:.3e}, log = {log_tail:.1f} (< 1e-6)")


def test_criterion_08_hull_statistic(report):
    pts = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, 0.1]])
    h_constructed = frontier_prefix_h(rank(pts, np.arange(4.0))).h
    hits = 0
    for seed in range(100):
        x = sample_uniform_ball(RngStream(2024, seed), BallSpec.centered(3), 200)
        hits += frontier_prefix_h(rank(x, np.sum(x ** 2, axis=1))).h == 200
    ok = h_constructed == 3 and hits >= 95
    assert report(8, ok, f"constructed instance h = {h_constructed} (== 3); h = lambda in {hits}/100 runs (>= 95)")


def test_criterion_09_rule_comparison(report):
    cfg = ExperimentConfig(RULE_COMPARISON, 3, (1024,), rules=("best", "thchavg"), objective="sphere",
                           reps=200, seed=0)
    best, thch = run_rule_comparison(cfg)
    gap = best.mean[0] - thch.mean[0]
    combined = math.hypot(best.stderr[0], thch.stderr[0])
    ok = gap >= 3 * combined
    assert report(9, ok, f"SingleBest {best.mean[0]:.4g} +/- {best.stderr[0]:.2g}, "
                         f"THCHAvg {thch.mean[0]:.4g} +/- {thch.stderr[0]:.2g}; "
                         f"gap = {gap / combined:.1f} combined se (>= 3)")


def test_criterion_10_bench_determinism(report, tmp_path, capsys):
    def bench(out):
        return main(["bench", "--objective", "sphere,rastrigin", "--d", "3", "--lambdas", "16,64,256",
                     "--reps", "20", "--seed", "42", "--out", str(out)])

    codes = (bench(tmp_path / "a"), bench(tmp_path / "b"))
    capsys.readouterr()
    same = all(
        (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        for name in ("bench_sphere_d3.csv", "bench_rastrigin_d3.csv")
    )
    ok = codes == (0, 0) and same
    assert report(10, ok, f"exit codes {codes}; CSV files byte-identical: {same}")
