"""Real-analytic circle diffeomorphisms near the identity.

A diffeomorphism ``gamma`` close to the identity is stored through its chart
coordinate ``eta = arg(gamma(z) / z)``, a real-valued analytic function on the
circle, so that ``gamma(z) = z * exp(i eta(z))``.  In angle terms the lift
``theta -> theta + eta(exp(i theta))`` is strictly increasing.

Compositions are computed on circle samples and refitted; inversion solves
for the inverse lift by Newton's method.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ChartDomainError, IllConditionedError, NotADiffeomorphismError, PoleError
from .laurent import (
    DEFAULT_DEGREE,
    LaurentSeries,
    circle_points,
    derivative_theta,
    evaluate,
    fit_from_circle_samples,
)

HERMITIAN_TOL = 1e-12
UNIT_TOL = 1e-12
ANTIPODAL_TOL = 1e-10
NEWTON_TOL = 1e-12
NEWTON_MAXITER = 50


def grid_size(degree):
    """Default number of circle samples for a series of this degree."""
    return max(256, 4 * (2 * degree + 1))


def angle_grid(points):
    return 2.0 * np.pi * np.arange(points) / points


class RealCircleFunction:
    """Analytic function on the circle that is real on ``|z| = 1``.

    Wraps a :class:`LaurentSeries` with ``c_{-k} = conj(c_k)``.  Used both for
    chart coordinates and for vector fields (``X`` stands for ``z * i X(z)``).
    """

    __slots__ = ("series",)

    def __init__(self, series):
        if not isinstance(series, LaurentSeries):
            series = LaurentSeries(series)
        defect = series.hermitian_defect()
        if defect > HERMITIAN_TOL:
            raise ValueError(f"series is not Hermitian symmetric (defect {defect:.3g})")
        self.series = series.hermitian_part()

    @classmethod
    def zero(cls, degree=0):
        return cls(LaurentSeries.zeros(degree))

    @classmethod
    def constant(cls, value, degree=0):
        return cls(LaurentSeries.constant(float(value), degree))

    @classmethod
    def from_samples(cls, values, degree):
        """Fit real samples taken at the angles ``2 pi j / N``."""
        s = fit_from_circle_samples(np.asarray(values, dtype=float), 1.0, degree)
        return cls(s.hermitian_part())

    @classmethod
    def from_function(cls, func, degree=DEFAULT_DEGREE, points=None):
        """Fit a real function of the angle ``theta``."""
        theta = angle_grid(points or grid_size(degree))
        return cls.from_samples(func(theta), degree)

    @classmethod
    def trig(cls, cos=(), sin=(), const=0.0, degree=None):
        """``const + sum a_k cos(k theta) + sum b_k sin(k theta)`` (k from 1)."""
        terms = {0: const}
        for k, a in enumerate(cos, start=1):
            terms[k] = terms.get(k, 0) + a / 2
            terms[-k] = terms.get(-k, 0) + a / 2
        for k, b in enumerate(sin, start=1):
            terms[k] = terms.get(k, 0) - 1j * b / 2
            terms[-k] = terms.get(-k, 0) + 1j * b / 2
        return cls(LaurentSeries.from_terms(terms, degree))

    @property
    def degree(self):
        return self.series.degree

    @property
    def coeffs(self):
        return self.series.coeffs

    def __call__(self, z):
        return evaluate(self.series, z)

    def at_angle(self, theta):
        """Values at real or complex angles (``z = exp(i theta)``)."""
        v = evaluate(self.series, np.exp(1j * np.asarray(theta)))
        if np.isrealobj(theta) or np.all(np.imag(theta) == 0):
            return np.real(v)
        return v

    def on_grid(self, points=None):
        return self.at_angle(angle_grid(points or grid_size(self.degree)))

    def derivative(self):
        return RealCircleFunction(derivative_theta(self.series))

    def resize(self, degree):
        return RealCircleFunction(self.series.resize(degree))

    def grid_sup(self, points=256):
        return float(np.max(np.abs(self.on_grid(points))))

    def reality_defect(self, points=256):
        return float(np.max(np.abs(np.imag(evaluate(self.series, circle_points(points))))))

    def __add__(self, other):
        if isinstance(other, RealCircleFunction):
            return RealCircleFunction(self.series + other.series)
        if np.isscalar(other) and np.isreal(other):
            return RealCircleFunction(self.series + float(np.real(other)))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return RealCircleFunction(-self.series)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other) and np.isreal(other):
            return RealCircleFunction(self.series * float(np.real(other)))
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"RealCircleFunction(degree={self.degree})"

    def to_dict(self):
        return self.series.to_dict()

    @classmethod
    def from_dict(cls, data):
        return cls(LaurentSeries.from_dict(data))


def grid_distance(a, b, points=None):
    """Sup of ``|a - b|`` over circle samples (accepts functions or diffeos)."""
    a = a.eta if isinstance(a, CircleDiffeo) else a
    b = b.eta if isinstance(b, CircleDiffeo) else b
    points = points or grid_size(max(a.degree, b.degree))
    return float(np.max(np.abs(a.on_grid(points) - b.on_grid(points))))


@dataclass(frozen=True, eq=False)
class CircleDiffeo:
    """``z -> z exp(i eta(z))`` with ``|eta| < pi`` and an increasing lift.

    Build instances with :func:`chart_out`, which checks both conditions.
    """

    eta: RealCircleFunction
    orientation_margin: float

    @property
    def degree(self):
        return self.eta.degree

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return z * np.exp(1j * self.eta(z))

    def lift(self, theta):
        theta = np.asarray(theta)
        return theta + self.eta.at_angle(theta)

    def __matmul__(self, other):
        return compose(self, other)

    @cached_property
    def grid_sup(self):
        return self.eta.grid_sup(grid_size(self.degree))

    def to_dict(self):
        return {"eta": self.eta.to_dict(), "orientation_margin": float(self.orientation_margin)}

    @classmethod
    def from_dict(cls, data):
        return chart_out(RealCircleFunction.from_dict(data["eta"]))


def local_addition(z, r):
    """``Sigma(z, r) = z exp(i r)`` for ``|z| = 1`` and real ``r``."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(np.abs(z) - 1.0) > UNIT_TOL):
        raise ValueError("local addition needs unit-modulus base points")
    out = z * np.exp(1j * np.asarray(r, dtype=float))
    return out[()] if out.ndim == 0 else out


def local_addition_inverse(z, w):
    """``arg(w / z)`` in ``(-pi, pi)`` for unit-modulus ``z, w``.

    Raises:
        ChartDomainError: if ``w`` is within ``1e-10`` of ``-z``.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    q = w / z
    if np.any(np.abs(q + 1.0) <= ANTIPODAL_TOL):
        raise ChartDomainError("antipodal pair w = -z lies outside the chart")
    out = np.angle(q)
    return out[()] if out.ndim == 0 else out


def complex_local_addition_inverse(z, w):
    """Holomorphic extension ``-i Log(w / z)`` of the inverse local addition.

    Raises:
        PoleError: if ``z`` or ``w`` is zero.
        ChartDomainError: if ``w / z`` lies on the closed negative real axis.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if np.any(z == 0) or np.any(w == 0):
        raise PoleError("complex local addition is defined on nonzero points only")
    q = w / z
    if np.any((q.imag == 0) & (q.real <= 0)):
        raise ChartDomainError("w / z on the branch cut of the principal logarithm")
    out = -1j * np.log(q)
    return out[()] if out.ndim == 0 else out


def orientation_margin(eta, points=None):
    """``min (1 + d eta / d theta)`` over the circle grid."""
    points = points or grid_size(eta.degree)
    return float(1.0 + np.min(eta.derivative().on_grid(points)))


def chart_out(eta, points=None):
    """Inverse chart: the diffeomorphism ``z -> z exp(i eta(z))``.

    Raises:
        ChartDomainError: if ``|eta| >= pi`` somewhere on the grid.
        NotADiffeomorphismError: if the lift is not strictly increasing.
    """
    if not isinstance(eta, RealCircleFunction):
        eta = RealCircleFunction(eta)
    points = points or grid_size(eta.degree)
    sup = float(np.max(np.abs(eta.on_grid(points))))
    if not sup < math.pi:
        raise ChartDomainError(f"sup |eta| = {sup:.6g} reaches the chart boundary pi")
    margin = orientation_margin(eta, points)
    if not margin > 0:
        raise NotADiffeomorphismError(f"orientation margin {margin:.6g} is not positive")
    return CircleDiffeo(eta, margin)


def chart_in(gamma, degree=DEFAULT_DEGREE, points=None):
    """Chart coordinate ``eta(z) = arg(gamma(z) / z)``.

    ``gamma`` is either a vectorised callable on the unit circle or an array
    of its values at ``exp(2 pi i j / N)``.
    """
    if callable(gamma):
        z = circle_points(points or grid_size(degree))
        values = gamma(z)
    else:
        values = np.asarray(gamma, dtype=complex)
        z = circle_points(values.size)
    return RealCircleFunction.from_samples(local_addition_inverse(z, values), degree)


def identity(degree=0):
    return chart_out(RealCircleFunction.zero(degree))


def rotation(angle, degree=0):
    return chart_out(RealCircleFunction.constant(angle, degree))


def _working_degree(*funcs, degree=None):
    return degree if degree is not None else max(DEFAULT_DEGREE, *(f.degree for f in funcs))


def mu(eta1, eta2, degree=None, points=None):
    """Chart transport ``eta1 o E(eta2)`` with ``E(eta)(z) = z exp(i eta(z))``.

    Sampled on the circle and refitted to ``degree`` (default: the larger of
    64 and the input degrees).  The group product in the chart is
    ``eta2 + mu(eta1, eta2)``; see :func:`chart_product`.

    Raises:
        ChartDomainError: if the result reaches ``|mu| >= pi`` on the grid.
    """
    eta1 = eta1.eta if isinstance(eta1, CircleDiffeo) else eta1
    eta2 = eta2.eta if isinstance(eta2, CircleDiffeo) else eta2
    degree = _working_degree(eta1, eta2, degree=degree)
    points = points or grid_size(degree)
    theta = angle_grid(points)
    values = eta1.at_angle(theta + eta2.at_angle(theta))
    if not np.max(np.abs(values)) < math.pi:
        raise ChartDomainError("mu(eta1, eta2) leaves the chart")
    return RealCircleFunction.from_samples(values, degree)


def chart_product(eta1, eta2, degree=None, points=None):
    """Chart coordinate of ``E(eta1) o E(eta2)``, i.e. ``eta2 + eta1 o E(eta2)``."""
    a = chart_out(eta1) if not isinstance(eta1, CircleDiffeo) else eta1
    b = chart_out(eta2) if not isinstance(eta2, CircleDiffeo) else eta2
    return compose(a, b, degree=degree, points=points).eta


def compose(a, b, degree=None, points=None):
    """Group product ``a o b`` (apply ``b`` first)."""
    degree = _working_degree(a.eta, b.eta, degree=degree)
    points = points or grid_size(degree)
    theta = angle_grid(points)
    # lift of a o b is theta + eta_b + eta_a(theta + eta_b)
    inner = b.eta.at_angle(theta)
    values = inner + a.eta.at_angle(theta + inner)
    if not np.max(np.abs(values)) < math.pi:
        raise ChartDomainError("composition leaves the chart")
    return chart_out(RealCircleFunction.from_samples(values, degree), points)


def invert_lift(a, theta, tol=NEWTON_TOL, maxiter=NEWTON_MAXITER):
    """Solve ``v + eta_a(v) = theta`` for ``v`` by Newton's method.

    Works for real or complex ``theta``.  Returns the solution array.

    Raises:
        IllConditionedError: no convergence within ``maxiter`` steps.
    """
    theta = np.asarray(theta)
    deta = a.eta.derivative()
    v = theta - a.eta.at_angle(theta)
    for _ in range(maxiter):
        resid = v + a.eta.at_angle(v) - theta
        if np.max(np.abs(resid)) <= tol:
            return v
        v = v - resid / (1.0 + deta.at_angle(v))
    resid = v + a.eta.at_angle(v) - theta
    if np.max(np.abs(resid)) <= tol:
        return v
    raise IllConditionedError(
        f"Newton inversion stalled at residual {np.max(np.abs(resid)):.3g} "
        f"(orientation margin {a.orientation_margin:.3g})"
    )


def invert(a, degree=None, points=None):
    """Inverse diffeomorphism; the inverse lift is found by Newton on the grid."""
    degree = _working_degree(a.eta, degree=degree)
    points = points or grid_size(degree)
    theta = angle_grid(points)
    v = invert_lift(a, theta)
    values = v - theta
    if not np.max(np.abs(values)) < math.pi:
        raise ChartDomainError("inverse leaves the chart")
    return chart_out(RealCircleFunction.from_samples(values, degree), points)


def random_eta(rng, degree=16, sup=0.3, slope=0.3, decay=0.5):
    """Random smooth chart coordinate for tests and demos.

    Coefficients are Gaussian with envelope ``exp(-decay |k|)``; the result is
    scaled so that ``sup |eta| <= sup`` and ``sup |eta'| <= slope`` on the grid.
    """
    k = np.arange(1, degree + 1)
    pos = (rng.normal(size=degree) + 1j * rng.normal(size=degree)) * np.exp(-decay * k)
    c = np.concatenate([np.conj(pos[::-1]), [rng.normal()], pos])
    eta = RealCircleFunction(LaurentSeries(c))
    scale = min(sup / eta.grid_sup(), slope / eta.derivative().grid_sup())
    return eta * scale
