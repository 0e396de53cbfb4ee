"""
Comparing the rules across budgets
==================================

Each repetition translates the optimum by a small Gaussian offset, samples
lambda standard-normal candidates and scores every rule on the same batch.
This is a scaled-down version of the `mubest bench` command.
"""
import sys
from pathlib import Path

from mubest import STANDARD_RULES, ExperimentConfig, log_log_slope, run_rule_comparison
from mubest.harness import RULE_COMPARISON
from mubest.output import AxesSpec, render_svg, write_csv

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

for objective in ("sphere", "rastrigin"):
    cfg = ExperimentConfig(RULE_COMPARISON, 3, (16, 64, 256, 1024), rules=STANDARD_RULES,
                           objective=objective, reps=40, seed=3)
    series = run_rule_comparison(cfg)
    print(objective)
    for s in series:
        print(f"  {s.label:>8}: regret at lambda=1024 {s.mean[-1]:.3e}, slope {log_log_slope(s.x, s.mean):+.2f}")
    write_csv(series, out / f"rules_{objective}.csv")
    render_svg(series, out / f"rules_{objective}.svg",
               AxesSpec(title=f"{objective}, d=3", xlabel="lambda"))
