"""
Diffeomorphisms near the identity
=================================

A diffeomorphism close to the identity is stored through its chart
coordinate ``eta`` with ``gamma(z) = z exp(i eta(z))``.  Composition and
inversion act on samples of the lift ``theta + eta(theta)``.
"""

import numpy as np

from circlediff.diffeo import (chart_out, chart_product, compose, grid_distance, invert, mu,
                               random_eta)
from circlediff.laurent import circle_points

rng = np.random.default_rng(0)
a = chart_out(random_eta(rng))
b = chart_out(random_eta(rng))
print("sup|eta_a| =", a.grid_sup, " orientation margin =", a.orientation_margin)

# Inverse by Newton on the lift; a working degree of 128 keeps the truncation small
ai = invert(a, degree=128)
print("a o a^-1 distance from identity:", compose(a, ai, degree=128).eta.grid_sup())

# The group product agrees with applying the maps one after another
z = circle_points(512)
ab = compose(a, b)
print("compose vs pointwise:", np.max(np.abs(ab(z) - a(b(z)))))

# mu(eta1, eta2) = eta1 o E(eta2) transports eta1; the product adds eta2 back
e1, e2 = a.eta, b.eta
print("chart product - (eta2 + mu):", grid_distance(chart_product(e1, e2), e2 + mu(e1, e2)))
print("mu alone misses eta2 by     :", grid_distance(chart_product(e1, e2), mu(e1, e2)))
