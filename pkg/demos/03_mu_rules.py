"""
Choosing mu without knowing the landscape
=========================================

The rules below pick mu from lambda, the dimension d and, for the hull-based
ones, the hull prefix h of the ranked batch.
"""
from mubest import STANDARD_RULES, MuRule, compute_mu

print(f"{'rule':>8} " + " ".join(f"{lam:>6}" for lam in (16, 64, 256, 1024, 4096)))
for d in (3, 25):
    print(f"d = {d}")
    for rule in STANDARD_RULES + (MuRule.parse("ratio:0.1"),):
        # pretend the hull prefix covers a tenth of the batch
        mus = [compute_mu(rule, lam, d, h=max(1, lam // 10)) for lam in (16, 64, 256, 1024, 4096)]
        print(f"{rule.name:>8} " + " ".join(f"{m:>6}" for m in mus))
