"""
The Silva level structure
=========================

Germs along the circle live in an increasing chain of Banach spaces indexed
by the annulus width.  Restriction to a thinner annulus shrinks the norm of
``z^k`` by a factor that decays geometrically in ``k``; this is the numerical
face of compactness.
"""

import math

from circlediff.laurent import LaurentSeries, fit_function, supnorm
from circlediff.silva import assign_level, compactness_table, restrict

g = supnorm(LaurentSeries.monomial(8), 1)
print("||z^8|| at level 1 and 2:", g.norm_upper, restrict(g, 2).norm_upper)

# Measured vs closed-form bonding ratios for a few (k, n)
for k, n, closed, measured in compactness_table(12, 3)[::6]:
    print(f"k={k:2d} n={n}  closed {closed:.12f}  measured {measured:.12f}")

# The smallest certified level grows as the pole approaches the circle
for a in (1.0, 0.5, 0.25, 0.125):
    s = fit_function(lambda z: 1 / (z - math.exp(a)), 64)
    res = assign_level(s)
    print(f"pole at e^{a}: decay rate {res.decay_rate:.4f}, level {res.certified_level}")
