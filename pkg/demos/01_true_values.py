"""
Population values of the W-footrule
====================================

Closed forms for the Gaussian family, adaptive quadrature for everything
else, and a Monte Carlo check through the L1 representation.
"""

import numpy as np

from wfootrule import Clayton, Frank, Gaussian, Gumbel, M, PI, W, TwoSegment
from wfootrule.truth import Method, phi_oracle_L1, phi_true, true_values

# the three reference copulas sit at -1, 0 and 1/2
for c in (W, PI, M):
    print(f"{str(c):>4}  Phi = {phi_true(c).value:+.5f}")

# Gaussian: closed form against brute-force quadrature
for rho in np.linspace(-0.9, 0.9, 7):
    c = Gaussian(rho)
    closed = phi_true(c).value
    quad = phi_true(c, method=Method.QUADRATURE)
    print(f"rho={rho:+.1f}  closed {closed:+.8f}  quadrature {quad.value:+.8f}  (bound {quad.error:.1e})")

# Archimedean families have no closed form
for c in (Clayton(5), Gumbel(3), Frank(-5), TwoSegment()):
    tv = true_values(c)
    print(f"{str(c):<18} Phi={tv.phi_w:+.5f} footrule={tv.footrule:+.5f} gini={tv.gini:+.5f} [{tv.method.value}]")

# 3 E|1-U-V| - 1 gives the same number from a sample
est = phi_oracle_L1(Frank(-5), n_mc=10**6)
print(f"Monte Carlo: {est.value:+.5f} +- {3 * est.se:.5f}   exact: {phi_true(Frank(-5)).value:+.5f}")
