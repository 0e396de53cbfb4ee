"""
The hull prefix as a convexity probe
====================================

Rank a batch by fitness and walk down the ranking. Each point that lies
outside the convex hull of the better ones extends the prefix h. On a
quasi-convex function every point does, so h = lambda; on a rugged function
the walk stops early.
"""
import numpy as np

from mubest import BallSpec, Objective, RngStream, evaluate, frontier_prefix_h, rank, sample_uniform_ball

# a tiny example: the fourth point sits inside the triangle of the first three
pts = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, 0.1]])
print("constructed instance h =", frontier_prefix_h(rank(pts, np.arange(4.0))).h)

lam, d = 200, 3
for kind in ("sphere", "cigar", "hm", "rastrigin"):
    obj = Objective.centered(kind, d)
    hs = []
    for seed in range(20):
        x = sample_uniform_ball(RngStream(7, seed), BallSpec.centered(d, 3.0), lam)
        hs.append(frontier_prefix_h(rank(x, evaluate(obj, x))).h)
    print(f"{kind:>9}: median h = {int(np.median(hs)):4d} of {lam}")
