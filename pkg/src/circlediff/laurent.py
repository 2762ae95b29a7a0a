"""Truncated Laurent series on annuli centred at the origin.

A :class:`LaurentSeries` of degree ``K`` stores the ``2K+1`` coefficients of

.. math:: s(z) = \\sum_{k=-K}^{K} c_k z^k

in the order ``k = -K, ..., K``.  Everything else in the package (circle
functions, vector fields, diffeomorphisms in the chart) is built on top of it.

Norms are taken on the annuli ``U_n = {exp(-1/n) < |z| < exp(1/n)}``. A
:class:`BanachGerm` carries two numbers for the sup norm on ``U_n``: a
certified upper bound (the weighted coefficient sum) and a lower bound
measured on a grid of the boundary circles and the unit circle.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import PoleError

DEFAULT_DEGREE = 64
# fitting on an annulus uses 4x oversampling
DEFAULT_OVERSAMPLE = 4


class LaurentSeries:
    """Two-sided power series truncated at degree ``K``.

    Instances are immutable; arithmetic returns new objects.

    Args:
        coeffs: complex coefficients ordered ``k = -K..K`` (odd length).
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex).ravel()
        if c.size % 2 != 1:
            raise ValueError(f"need an odd number of coefficients, got {c.size}")
        c.setflags(write=False)
        self._c = c

    @classmethod
    def zeros(cls, degree=DEFAULT_DEGREE):
        return cls(np.zeros(2 * degree + 1, dtype=complex))

    @classmethod
    def constant(cls, value, degree=0):
        c = np.zeros(2 * degree + 1, dtype=complex)
        c[degree] = value
        return cls(c)

    @classmethod
    def monomial(cls, k, degree=None, value=1.0):
        degree = abs(k) if degree is None else degree
        if abs(k) > degree:
            raise ValueError(f"|k|={abs(k)} exceeds degree {degree}")
        c = np.zeros(2 * degree + 1, dtype=complex)
        c[degree + k] = value
        return cls(c)

    @classmethod
    def from_terms(cls, terms, degree=None):
        """Build from a ``{k: c_k}`` mapping."""
        degree = max((abs(k) for k in terms), default=0) if degree is None else degree
        c = np.zeros(2 * degree + 1, dtype=complex)
        for k, v in terms.items():
            if abs(k) > degree:
                raise ValueError(f"|k|={abs(k)} exceeds degree {degree}")
            c[degree + k] += v
        return cls(c)

    @property
    def coeffs(self):
        return self._c

    @property
    def degree(self):
        return (self._c.size - 1) // 2

    @property
    def indices(self):
        K = self.degree
        return np.arange(-K, K + 1)

    def coeff(self, k):
        K = self.degree
        return self._c[K + k] if abs(k) <= K else 0j

    def resize(self, degree):
        """Zero-pad or truncate to ``degree``."""
        K = self.degree
        if degree >= K:
            c = np.zeros(2 * degree + 1, dtype=complex)
            c[degree - K : degree + K + 1] = self._c
        else:
            c = self._c[K - degree : K + degree + 1]
        return LaurentSeries(c)

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other):
        if isinstance(other, LaurentSeries):
            K = max(self.degree, other.degree)
            return LaurentSeries(self.resize(K)._c + other.resize(K)._c)
        if np.isscalar(other):
            c = self._c.copy()
            c[self.degree] += other
            return LaurentSeries(c)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(-self._c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return LaurentSeries(self._c * other)
        if isinstance(other, LaurentSeries):
            return multiply(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.isscalar(other):
            return LaurentSeries(self._c / other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.degree == other.degree and np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash(self._c.tobytes())

    def __repr__(self):
        return f"LaurentSeries(degree={self.degree})"

    def hermitian_defect(self):
        """``max_k |c_{-k} - conj(c_k)|``; zero for series real on the circle."""
        return float(np.max(np.abs(self._c[::-1] - np.conj(self._c))))

    def hermitian_part(self):
        """Projection onto series that are real-valued on the unit circle."""
        return LaurentSeries(0.5 * (self._c + np.conj(self._c[::-1])))

    def to_dict(self):
        return {
            "degree": self.degree,
            "coeffs": [[float(c.real), float(c.imag)] for c in self._c],
        }

    @classmethod
    def from_dict(cls, data):
        K = int(data["degree"])
        raw = np.asarray(data["coeffs"], dtype=float)
        if raw.shape != (2 * K + 1, 2):
            raise ValueError(
                f"expected {2 * K + 1} [re, im] pairs for degree {K}, got shape {raw.shape}"
            )
        return cls(raw[:, 0] + 1j * raw[:, 1])


def evaluate(s, z):
    """Evaluate ``s`` at ``z`` (scalar or array) by two-sided Horner.

    Raises:
        PoleError: if any ``z`` is zero.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise PoleError("Laurent series cannot be evaluated at z = 0")
    c = s.coeffs
    K = s.degree
    pos = np.full(z.shape, c[-1], dtype=complex)
    for ck in c[-2 : K - 1 : -1]:
        pos = pos * z + ck
    if K == 0:
        return pos[()] if pos.ndim == 0 else pos
    w = 1.0 / z
    neg = np.full(z.shape, c[0], dtype=complex)
    for ck in c[1:K]:
        neg = neg * w + ck
    out = pos + neg * w
    return out[()] if out.ndim == 0 else out


def circle_points(count, radius=1.0):
    """``count`` equispaced points ``radius * exp(2 pi i j / count)``."""
    return radius * np.exp(2j * np.pi * np.arange(count) / count)


def fit_from_circle_samples(values, radius, degree):
    """Fit a degree-``degree`` series to samples on the circle ``|z| = radius``.

    The samples must sit at ``radius * exp(2 pi i j / N)`` for ``j = 0..N-1``;
    coefficients are the scaled DFT.  Exact for Laurent polynomials of degree
    at most ``degree``.

    Raises:
        ValueError: if ``N < 2 (2 degree + 1)``.
    """
    values = np.asarray(values, dtype=complex).ravel()
    N = values.size
    if N < 2 * (2 * degree + 1):
        raise ValueError(
            f"{N} samples cannot resolve degree {degree}; need at least {2 * (2 * degree + 1)}"
        )
    if radius <= 0:
        raise ValueError("sampling radius must be positive")
    F = np.fft.fft(values) / N
    k = np.arange(-degree, degree + 1)
    return LaurentSeries(F[k % N] * float(radius) ** (-k.astype(float)))


def fit_function(func, degree=DEFAULT_DEGREE, radius=1.0, oversample=DEFAULT_OVERSAMPLE):
    """Sample a vectorised callable on ``|z| = radius`` and fit it."""
    z = circle_points(oversample * (2 * degree + 1), radius)
    return fit_from_circle_samples(func(z), radius, degree)


def multiply(a, b, degree=None):
    """Product of two series, by sampling on the unit circle and refitting.

    The exact product has degree ``a.degree + b.degree``; the result is
    truncated to ``degree`` when given.
    """
    full = a.degree + b.degree
    z = circle_points(2 * (2 * full + 1))
    prod = fit_from_circle_samples(evaluate(a, z) * evaluate(b, z), 1.0, full)
    return prod if degree is None or degree >= full else prod.resize(degree)


def derivative_theta(s):
    """``d/dtheta`` along ``z = exp(i theta)``: ``c_k -> i k c_k``."""
    return LaurentSeries(1j * s.indices * s.coeffs)


def derivative_z(s):
    """Complex derivative ``d/dz``; the degree grows by one."""
    K = s.degree
    c = np.zeros(2 * K + 3, dtype=complex)
    # k c_k z^{k-1} lands at index (k - 1) of the degree K+1 array
    c[: 2 * K + 1] = s.indices * s.coeffs
    return LaurentSeries(c)


@dataclass(frozen=True)
class AnnulusLevel:
    """The annulus ``U_n = {exp(-1/n) < |z| < exp(1/n)}``."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"level must be a positive integer, got {self.n!r}")

    @property
    def inner(self):
        return float(np.exp(-1.0 / self.n))

    @property
    def outer(self):
        return float(np.exp(1.0 / self.n))

    def contains(self, z):
        r = np.abs(np.asarray(z))
        return (r > self.inner) & (r < self.outer)


@dataclass(frozen=True, eq=False)
class BanachGerm:
    """A series viewed as an element of the Banach space of bounded holomorphic
    functions on ``U_n``, with a sup-norm bracket ``norm_lower <= ||s|| <= norm_upper``."""

    series: LaurentSeries
    level: AnnulusLevel
    norm_upper: float
    norm_lower: float

    @cached_property
    def norm_gap(self):
        return self.norm_upper - self.norm_lower


def coefficient_norm(s, level):
    """``sum_k |c_k| exp(|k|/n)``, an upper bound for the sup over ``U_n``."""
    n = level.n if isinstance(level, AnnulusLevel) else level
    k = np.abs(s.indices)
    return float(np.sum(np.abs(s.coeffs) * np.exp(k / n)))


def supnorm(s, level, points=None):
    """Bracket the sup norm of ``s`` on the annulus ``level``.

    The lower bound is the largest ``|s|`` over ``points`` equispaced points on
    each of the circles ``|z| = exp(-1/n), 1, exp(1/n)``; ``points`` defaults to
    ``4 (2K + 1)``.
    """
    if not isinstance(level, AnnulusLevel):
        level = AnnulusLevel(level)
    K = s.degree
    points = max(points or 0, 4 * (2 * K + 1))
    lower = 0.0
    for radius in (level.inner, 1.0, level.outer):
        lower = max(lower, float(np.max(np.abs(evaluate(s, circle_points(points, radius))))))
    upper = coefficient_norm(s, level)
    # the coefficient sum dominates every point value; rounding may not know it
    upper = max(upper, lower)
    return BanachGerm(s, level, upper, lower)


def cauchy_derivative_bound(germ, r):
    """Cauchy estimate for ``|d/dz s|`` on the annulus shrunk by ``r``.

    For ``x`` with the closed disc ``B(x, r)`` inside the closure of ``U_n``,
    ``|s'(x)| <= sup |s| / r <= norm_upper / r``.  The shrunk annulus
    ``exp(-1/n) + r <= |x| <= exp(1/n) - r`` is nonempty iff ``r <= sinh(1/n)``.

    Raises:
        ValueError: unless ``0 < r < sinh(1/n)``.
    """
    limit = float(np.sinh(1.0 / germ.level.n))
    if not 0.0 < r < limit:
        raise ValueError(f"r must lie in (0, {limit:.6g}) at level {germ.level.n}, got {r}")
    return germ.norm_upper / r


def shrunk_annulus(level, r):
    """Radii ``(exp(-1/n) + r, exp(1/n) - r)`` of the annulus shrunk by ``r``."""
    return level.inner + r, level.outer - r
