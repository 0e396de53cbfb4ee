"""
Exact regret of mu-best averaging on the sphere
===============================================

Sample lambda points uniformly in the unit ball, keep the mu closest to the
center and average them. The expected squared distance of that average to
the center has a closed form; here we tabulate it and check it against a
short simulation.
"""
import sys
from pathlib import Path

import numpy as np

from mubest import ExperimentConfig, TheoryParams, regret_mu_avg_centered, regret_one_best_centered
from mubest.harness import CENTERED, run_validation_centered
from mubest.output import AxesSpec, render_svg, write_csv

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

d, lam = 5, 1000

# the exact value for a few mu; mu=1 coincides with keeping the single best point
for mu in (1, 10, 100, 999):
    print(f"mu={mu:4d}  exact regret = {regret_mu_avg_centered(TheoryParams(d, lam, mu)):.6e}")
print("single best:", regret_one_best_centered(d, lam))

# near mu = lambda the average is almost the centroid of the whole batch,
# whose squared norm has mean d / ((d + 2) lambda)
print("centroid reference:", d / ((d + 2) * lam))

# averaging more points always helps when the optimum is at the center
mus = np.arange(1, lam)
vals = np.array([regret_mu_avg_centered(TheoryParams(d, lam, int(m))) for m in mus])
print("strictly decreasing in mu:", bool(np.all(np.diff(vals) < 0)))

# Monte Carlo check, 1000 repetitions
cfg = ExperimentConfig(CENTERED, d, (lam,), (1, 2, 5, 10, 20, 50, 100, 200, 500, 999), reps=1000)
empirical, theory = run_validation_centered(cfg)
for mu, m, s, t in zip(empirical.x, empirical.mean, empirical.stderr, theory.mean):
    print(f"mu={int(mu):4d}  simulated {m:.4e} +/- {s:.1e}   exact {t:.4e}   z={(m - t) / s:+.2f}")

write_csv([empirical, theory], out / "exact_regret.csv")
render_svg([empirical, theory], out / "exact_regret.svg",
           AxesSpec(title=f"centered sphere, d={d}, lambda={lam}", xlabel="mu"))
print("wrote", out / "exact_regret.svg")
