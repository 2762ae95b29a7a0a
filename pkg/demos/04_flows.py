"""
Flows, evolution and the bracket
================================

A time-dependent field ``X_t`` generates a curve of diffeomorphisms by
integrating ``u' = X_t(u)`` at every grid angle.  A field inside the ball of
radius ``1/(4n)`` keeps the complexified flow inside ``U_{2n}``.
"""

import warnings

import numpy as np

from circlediff.diffeo import RealCircleFunction, grid_distance
from circlediff.flow import (ball_certificate, bracket, commutator_quotient, integrate_flow,
                             random_field, right_log_derivative)

rng = np.random.default_rng(3)
f = random_field(rng, level=2)
cert = ball_certificate(f)
print(f"certificate at n=2: holds={cert.holds}, sup bound {cert.sup_bound:.4f} < {cert.radius}")

traj = integrate_flow(f, step=1e-3, degree=32)
print("max displacement:", traj.max_displacement, " max |Im u|:", traj.max_imag)

# Differentiating the trajectory and undoing the state recovers the field
rec = right_log_derivative(traj, stride=100)
print("recovery error:", max(grid_distance(X, f.at(t)) for t, X in zip(rec.times, rec.fields)))

# Bracket of sin and cos, and the commutator of their flows
X, Y = RealCircleFunction.trig(sin=[1.0]), RealCircleFunction.trig(cos=[1.0])
print("bracket(sin, cos) on the grid:", np.unique(np.round(bracket(X, Y).on_grid(16), 12)))
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    for s in (1e-1, 1e-2):
        q = commutator_quotient(X, Y, s, step=1e-2)
        print(f"s={s}: commutator quotient off by {grid_distance(q, bracket(X, Y)):.2e}")
