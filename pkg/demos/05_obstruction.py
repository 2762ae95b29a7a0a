"""
No analytic extension of the multiplication
===========================================

Transporting ``r f`` along constant rotations gives the slice
``h(z) = r f(exp(i z))``.  For real ``z`` this is an honest chart
computation; its analytic continuation hits a pole at ``z = iR`` however
small ``r`` is, so the Taylor radius at 0 stays ``R``.
"""

import numpy as np

from circlediff.obstruction import (PoleObstruction, divergence_fit, divergence_scan,
                                    radius_estimate, slice_value, slice_via_mu)

obs = PoleObstruction.normalized(R=1.0, n=2)
print(f"r = {obs.r:.4e}, grid sup of r f on U_2 = {obs.scaled_sup:.4f}")

# Real slice: chart transport and closed form agree
for t in (-0.4, 0.1, 0.4):
    print(f"t={t:+.1f}: mu {slice_via_mu(obs, t):+.15f}  closed form {slice_value(obs, t).real:+.15f}")

# Blow-up along the imaginary axis
rows = divergence_scan(obs)
print("|h(it)| at the ends of the scan:", rows[0], rows[-1])
print("fitted pole order:", divergence_fit(obs, rows)["slope"])

# The radius does not care about r or the level
for r in (1e-1, 1e-3, 1e-5):
    print(f"r={r:g}: radius {radius_estimate(PoleObstruction(1.0, r, 2)):.5f}")
for n in (2, 4, 8):
    print(f"n={n}: radius {radius_estimate(PoleObstruction.normalized(1.0, n)):.5f}")
print("growing K:", np.round([radius_estimate(obs, K) for K in (16, 32, 64)], 5))
