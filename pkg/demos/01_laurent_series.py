"""
Laurent series on annuli
========================

Truncated Laurent series are the basic currency of the package.  This script
fits a function with a pole outside the unit circle, evaluates it, and
compares the two norms computed on the annuli ``U_n``.
"""

import math

import numpy as np

from circlediff.laurent import (AnnulusLevel, LaurentSeries, cauchy_derivative_bound,
                                fit_function, supnorm)

# A pole at e^{1/2}: the coefficients decay like e^{-k/2} on the analytic side
s = fit_function(lambda z: 1 / (z - math.exp(0.5)), degree=32)
print("first coefficients c_0..c_4:", np.round(s.coeffs[32:37].real, 6))
print("closed form           :", np.round([-math.exp(-0.5 * (k + 1)) for k in range(5)], 6))

# Evaluation is two-sided Horner, vectorised over z; off the unit circle the
# truncated tail shows up at the 1e-5 level for K = 32
z = np.array([1.0, 1j, -1.2])
print("series vs function at", z, ":", np.max(np.abs(s(z) - 1 / (z - math.exp(0.5)))))

# norm_upper is the coefficient sum, norm_lower a grid max; the true sup lies between
for n in (3, 4, 8):
    g = supnorm(s, AnnulusLevel(n))
    print(f"level {n}: {g.norm_lower:.6f} <= sup|s| <= {g.norm_upper:.6f}")

# Cauchy: on the annulus shrunk by r the derivative is bounded by norm_upper / r
g = supnorm(LaurentSeries.from_terms({-1: 1, 1: 1}), 1)
print("derivative bound for z + 1/z on U_1 shrunk by 1/2:", cauchy_derivative_bound(g, 0.5))
