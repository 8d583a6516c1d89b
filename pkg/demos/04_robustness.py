"""
How far can one observation move the estimate?
==============================================

Replace a single point by an arbitrary one, re-rank, and measure the change
in Phi_n. The worst case is bounded by 12/n.
"""

import numpy as np

from wfootrule import Gaussian, M, sample
from wfootrule.estimation import RankedSample, perturbation_bound_check, rank_data

rng = np.random.default_rng(7)

for n in (25, 50, 100, 200):
    b = sample(Gaussian(-0.5), n, seed=n)
    rs = rank_data(b.u, b.v)
    worst = max(perturbation_bound_check(rs, rng.random(2), rng.integers(n)) for _ in range(2000))
    print(f"n={n:4d}  max |dPhi_n| = {worst:.4f}   12/n = {12 / n:.4f}   n*max = {n * worst:.2f}")

# an adversarial move: drag the smallest comonotone point to the far corner
i = np.arange(1, 101)
print("comonotone, (u1, v1) -> (0.99, 0.01):", perturbation_bound_check(RankedSample(i, i), (0.99, 0.01)))

# the same data through the sampler
b = sample(M, 100, seed=1)
print("sampled comonotone:", perturbation_bound_check(rank_data(b.u, b.v), (0.99, 0.01)))
