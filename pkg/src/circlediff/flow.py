"""Flows of time-dependent analytic vector fields on the circle.

A vector field is a real analytic function ``X`` on the circle standing for
``z -> z * i X(z)``; in the angle coordinate its flow solves
``u'(t) = X_t(exp(i u))``.  Integration is classical RK4 with a fixed step,
run on the circle grid and, for the confinement check, on two complexified
rows ``Im u = +-0.999 / (4n)`` (the circles ``|z| = exp(-+0.999/(4n))``).

Sup norms of fields are measured on the annulus ``U_n`` of the field's level;
the ball certificate asks for ``sup_t ||X_t||_n < 1/(4n)``, under which every
complexified trajectory started in ``U_{4n}`` moves less than ``1/(4n)`` and
stays inside ``U_{2n}``.
"""

import math
import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from .diffeo import (
    RealCircleFunction,
    angle_grid,
    chart_out,
    compose,
    grid_distance,
    grid_size,
    invert_lift,
)
from .errors import ChartOverflowError, NumericalFailureError
from .laurent import DEFAULT_DEGREE, AnnulusLevel, LaurentSeries, coefficient_norm, evaluate, multiply

INTERPOLATIONS = ("cubic-hermite", "piecewise-linear")
# max of |h10| and |h11| on [0, 1] for the cubic Hermite basis
_HERMITE_SLOPE_WEIGHT = 4.0 / 27.0
# complexified start rows sit just inside U_{4n}
_ROW_FRACTION = 0.999


class UncertifiedFlowWarning(UserWarning):
    """Integration of a field outside the ball ``sup ||X_t||_n < 1/(4n)``."""


class C0InterpolationWarning(UserWarning):
    """Piecewise-linear knots give a field that is only continuous in time."""


def _as_level(level):
    return level if isinstance(level, AnnulusLevel) else AnnulusLevel(int(level))


@dataclass(frozen=True, eq=False)
class TimeDependentField:
    """Curve ``t -> X_t`` on ``[0, 1]`` given by knots and an interpolation rule.

    The default cubic Hermite rule uses finite-difference slopes at the knots
    and is C^1 in time.  All knot fields are padded to a common degree.
    """

    times: np.ndarray
    fields: tuple
    level: AnnulusLevel
    interpolation: str = "cubic-hermite"
    _coeffs: np.ndarray = dc_field(init=False, repr=False)
    _slopes: np.ndarray = dc_field(init=False, repr=False)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size < 2:
            raise ValueError("a time-dependent field needs at least two knots")
        if t[0] != 0.0 or t[-1] != 1.0 or np.any(np.diff(t) <= 0):
            raise ValueError("knot times must increase strictly from 0 to 1")
        if len(self.fields) != t.size:
            raise ValueError("one field per knot time is required")
        if self.interpolation not in INTERPOLATIONS:
            raise ValueError(f"interpolation must be one of {INTERPOLATIONS}")
        if self.interpolation == "piecewise-linear":
            warnings.warn(
                "piecewise-linear interpolation gives a C^0 curve of fields",
                C0InterpolationWarning,
                stacklevel=3,
            )
        deg = max(f.degree for f in self.fields)
        fields = tuple(f.resize(deg) for f in self.fields)
        coeffs = np.array([f.coeffs for f in fields])
        if self.interpolation == "cubic-hermite":
            slopes = np.gradient(coeffs, t, axis=0)
        else:
            slopes = np.zeros_like(coeffs)
        t.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "fields", fields)
        object.__setattr__(self, "level", _as_level(self.level))
        object.__setattr__(self, "_coeffs", coeffs)
        object.__setattr__(self, "_slopes", slopes)

    @classmethod
    def constant(cls, X, level=1):
        return cls(np.array([0.0, 1.0]), (X, X), level)

    @classmethod
    def from_function(cls, func, knots=17, level=1, interpolation="cubic-hermite"):
        """Sample ``func(t) -> RealCircleFunction`` at equispaced knots."""
        t = np.linspace(0.0, 1.0, knots)
        return cls(t, tuple(func(s) for s in t), level, interpolation)

    @property
    def degree(self):
        return self.fields[0].degree

    def coeffs_at(self, t):
        """Interpolated coefficient vector at time ``t`` in ``[0, 1]``."""
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"time {t} outside [0, 1]")
        knots = self.times
        j = min(int(np.searchsorted(knots, t, side="right")) - 1, knots.size - 2)
        dt = knots[j + 1] - knots[j]
        s = (t - knots[j]) / dt
        c0, c1 = self._coeffs[j], self._coeffs[j + 1]
        if self.interpolation == "piecewise-linear":
            return (1 - s) * c0 + s * c1
        m0, m1 = self._slopes[j], self._slopes[j + 1]
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        return h00 * c0 + h10 * dt * m0 + h01 * c1 + h11 * dt * m1

    def at(self, t):
        return RealCircleFunction(LaurentSeries(self.coeffs_at(t)))

    def sup_bound(self, level=None):
        """Upper bound for ``sup_t ||X_t||`` on ``U_n`` from the coefficient norms.

        On each Hermite interval ``||X_t|| <= max(||y0||, ||y1||) + 4/27 dt (||m0|| + ||m1||)``.
        """
        n = _as_level(level or self.level).n
        weights = np.exp(np.abs(self.fields[0].series.indices) / n)
        knot_norms = np.abs(self._coeffs) @ weights
        bound = float(np.max(knot_norms))
        if self.interpolation == "cubic-hermite":
            slope_norms = np.abs(self._slopes) @ weights
            dt = np.diff(self.times)
            per_interval = np.maximum(knot_norms[:-1], knot_norms[1:]) + _HERMITE_SLOPE_WEIGHT * dt * (
                slope_norms[:-1] + slope_norms[1:]
            )
            bound = max(bound, float(np.max(per_interval)))
        return bound

    def scaled(self, factor):
        return TimeDependentField(self.times, tuple(f * factor for f in self.fields), self.level,
                                  self.interpolation)

    def __add__(self, other):
        if not np.array_equal(self.times, other.times):
            raise ValueError("fields must share knot times")
        return TimeDependentField(
            self.times,
            tuple(a + b for a, b in zip(self.fields, other.fields)),
            self.level,
            self.interpolation,
        )

    def to_dict(self):
        return {
            "interpolation": self.interpolation,
            "level": self.level.n,
            "knots": [{"t": float(t), "field": f.to_dict()} for t, f in zip(self.times, self.fields)],
        }

    @classmethod
    def from_dict(cls, data):
        knots = data["knots"]
        return cls(
            np.array([k["t"] for k in knots], dtype=float),
            tuple(RealCircleFunction.from_dict(k["field"]) for k in knots),
            int(data["level"]),
            data.get("interpolation", "cubic-hermite"),
        )


def field_distance(a, b, samples=65):
    """Sup over time (knots of both and ``samples`` uniform times) of the grid distance."""
    ts = np.union1d(np.union1d(a.times, b.times), np.linspace(0.0, 1.0, samples))
    return max(grid_distance(a.at(t), b.at(t)) for t in ts)


@dataclass(frozen=True)
class BallCertificate:
    level: int
    radius: float
    holds: bool
    margin: float
    sup_bound: float


def ball_certificate(field, n=None):
    """Check ``sup_t ||X_t||_n < 1/(4n)`` (strict) with the certified norm bound."""
    n = field.level.n if n is None else int(n)
    radius = 1.0 / (4 * n)
    bound = field.sup_bound(n)
    return BallCertificate(n, radius, bool(bound < radius), radius - bound, bound)


@dataclass(frozen=True, eq=False)
class FlowTrajectory:
    times: np.ndarray
    states: list
    max_displacement: float
    level: int
    certificate: BallCertificate
    max_imag: float

    @property
    def certified(self):
        return self.certificate.holds

    @property
    def confined(self):
        """Every complexified trajectory stayed inside ``U_{2n}``."""
        return self.max_imag < 1.0 / (2 * self.level)

    @property
    def final(self):
        return self.states[-1]


def _rhs(coeffs, u, real_rows):
    s = LaurentSeries(coeffs)
    v = evaluate(s, np.exp(1j * u))
    v[:real_rows] = v[:real_rows].real
    return v


def integrate_flow(field, step=1e-3, t_end=1.0, t_start=0.0, degree=DEFAULT_DEGREE, points=None,
                   record_every=1, complex_rows=True):
    """RK4 flow of ``field`` from the identity at ``t_start`` up to ``t_end``.

    Args:
        field: the :class:`TimeDependentField`.
        step: nominal step; the interval is split into equal steps not longer than this.
        degree: degree of the refitted chart coordinates of the states.
        points: circle grid size (default ``4 (2 degree + 1)``).
        record_every: keep every ``record_every``-th state (the endpoint is always kept);
            ``None`` keeps only the start and end.
        complex_rows: also integrate from the circles ``|z| = exp(+-0.999/(4n))``
            to measure confinement.

    Raises:
        ChartOverflowError: if a state reaches ``|eta| >= pi``.
        NumericalFailureError: on NaN, or if a certified field violates confinement.
    """
    if not 0.0 < step <= 1.0:
        raise ValueError("step must lie in (0, 1]")
    if not 0.0 <= t_start < t_end <= 1.0:
        raise ValueError("need 0 <= t_start < t_end <= 1")
    n = field.level.n
    cert = ball_certificate(field, n)
    if not cert.holds:
        warnings.warn(
            f"field violates the ball certificate at level {n} (margin {cert.margin:.3g})",
            UncertifiedFlowWarning,
            stacklevel=2,
        )
    points = points or grid_size(degree)
    theta = angle_grid(points)
    starts = [theta.astype(complex)]
    if complex_rows:
        sigma = _ROW_FRACTION / (4 * n)
        starts += [theta + 1j * sigma, theta - 1j * sigma]
    u0 = np.concatenate(starts)
    u = u0.copy()
    nsteps = max(1, math.ceil((t_end - t_start) / step - 1e-9))
    h = (t_end - t_start) / nsteps

    times = [t_start]
    states = [chart_out(RealCircleFunction.zero(degree), points)]
    disp = 0.0
    max_imag = float(np.max(np.abs(u0.imag)))
    for i in range(nsteps):
        t = t_start + i * h
        c_a = field.coeffs_at(t)
        c_m = field.coeffs_at(t + h / 2)
        c_b = field.coeffs_at(min(t + h, 1.0))
        k1 = _rhs(c_a, u, points)
        k2 = _rhs(c_m, u + h / 2 * k1, points)
        k3 = _rhs(c_m, u + h / 2 * k2, points)
        k4 = _rhs(c_b, u + h * k3, points)
        u = u + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(u)):
            raise NumericalFailureError(f"non-finite state at t = {t + h:.6g}")
        eta = (u[:points] - theta).real
        if np.max(np.abs(eta)) >= math.pi:
            raise ChartOverflowError(f"flow leaves the chart at t = {t + h:.6g}")
        disp = max(disp, float(np.max(np.abs(u - u0))))
        max_imag = max(max_imag, float(np.max(np.abs(u.imag))))
        last = i == nsteps - 1
        if last or (record_every and (i + 1) % record_every == 0):
            times.append(t_start + (i + 1) * h)
            states.append(chart_out(RealCircleFunction.from_samples(eta, degree), points))
    if cert.holds and not disp < cert.radius:
        raise NumericalFailureError(
            f"certified field moved {disp:.6g} >= {cert.radius:.6g}; integration is unreliable"
        )
    return FlowTrajectory(np.array(times), states, disp, n, cert, max_imag)


def evol(field, step=1e-3, **kwargs):
    """Time-one value of the evolution of ``field``."""
    kwargs.setdefault("record_every", None)
    return integrate_flow(field, step, 1.0, **kwargs).final


def right_log_derivative(traj, stride=1, degree=None):
    """Recover ``X_t = (d/dt eta_t) o eta_t^{-1}`` from a trajectory on ``[0, 1]``.

    Time derivatives are central differences (one-sided at the ends) over the
    recorded states; the inversion is evaluated every ``stride`` states (the
    last state always included).
    """
    times = np.asarray(traj.times)
    if times.size < 3:
        raise ValueError("need at least three states")
    if times[0] != 0.0 or abs(times[-1] - 1.0) > 1e-12:
        raise ValueError("trajectory must cover [0, 1]")
    coeffs = np.array([s.eta.coeffs for s in traj.states])
    dcoeffs = np.gradient(coeffs, times, axis=0)
    idx = list(range(0, times.size, stride))
    if idx[-1] != times.size - 1:
        idx.append(times.size - 1)
    degree = degree or traj.states[0].degree
    knots_t, knots_f = [], []
    for j in idx:
        state = traj.states[j]
        points = grid_size(state.degree)
        phi = angle_grid(points)
        v = invert_lift(state, phi)
        deta = RealCircleFunction(LaurentSeries(dcoeffs[j]).hermitian_part())
        knots_t.append(times[j])
        knots_f.append(RealCircleFunction.from_samples(deta.at_angle(v), degree))
    knots_t[-1] = 1.0
    return TimeDependentField(np.array(knots_t), tuple(knots_f), traj.level)


def certified_level(X, max_level=64):
    """Smallest ``n`` with ``||X||_n < 1/(4n)``, or ``None``."""
    for n in range(1, max_level + 1):
        if coefficient_norm(X.series, n) < 1.0 / (4 * n):
            return n
    return None


def exp(X, step=1e-3, **kwargs):
    """Time-one flow of the autonomous field ``X``."""
    level = certified_level(X) or 1
    return evol(TimeDependentField.constant(X, level), step, **kwargs)


def flow_of(X, t, step=1e-3, **kwargs):
    """Time-``t`` flow of the autonomous field ``X`` (``t`` may be negative)."""
    return exp(X * t, step, **kwargs)


def bracket(X, Y, degree=DEFAULT_DEGREE):
    """Lie algebra bracket ``-(X Y' - Y X')`` (negative vector-field bracket).

    Products are formed on circle samples; the result is truncated to
    ``degree`` and a ``RuntimeWarning`` reports any dropped mass above 1e-12.
    """
    dX, dY = X.derivative(), Y.derivative()
    full = multiply(Y.series, dX.series) - multiply(X.series, dY.series)
    result = full.resize(min(degree, full.degree))
    if full.degree > degree:
        dropped = float(np.sum(np.abs(full.coeffs))) - float(np.sum(np.abs(result.coeffs)))
        if dropped > 1e-12:
            warnings.warn(f"bracket truncated to degree {degree}; dropped coefficient mass {dropped:.3g}",
                          RuntimeWarning, stacklevel=2)
    return RealCircleFunction(result.hermitian_part())


def commutator_quotient(X, Y, s, step=1e-3, degree=DEFAULT_DEGREE):
    """``chart_in(exp(sX) o exp(sY) o exp(-sX) o exp(-sY)) / s^2``."""
    kw = dict(degree=degree, complex_rows=False)
    a, b = exp(X * s, step, **kw), exp(Y * s, step, **kw)
    ai, bi = exp(X * -s, step, **kw), exp(Y * -s, step, **kw)
    g = compose(a, compose(b, compose(ai, bi, degree=degree), degree=degree), degree=degree)
    return g.eta * (1.0 / s**2)


def lipschitz_probe(center, perturbations, step=1e-3, **kwargs):
    """Largest ``d(evol(center), evol(p)) / d(center, p)`` over the perturbations.

    Distances are grid sups (over time for fields).  Pairs at distance zero are skipped.
    """
    kwargs.setdefault("complex_rows", False)
    e0 = evol(center, step, **kwargs)
    best = 0.0
    for p in perturbations:
        d_in = field_distance(center, p)
        if d_in == 0.0:
            continue
        best = max(best, grid_distance(evol(p, step, **kwargs), e0) / d_in)
    return best


def random_field(rng, level=2, knots=5, degree=8, fill=0.8, decay=0.5):
    """Random cubic-Hermite field whose certified bound is ``fill / (4 level)``."""
    t = np.linspace(0.0, 1.0, knots)
    fields = []
    k = np.arange(1, degree + 1)
    for _ in t:
        pos = (rng.normal(size=degree) + 1j * rng.normal(size=degree)) * np.exp(-decay * k)
        c = np.concatenate([np.conj(pos[::-1]), [rng.normal()], pos])
        fields.append(RealCircleFunction(LaurentSeries(c)))
    f = TimeDependentField(t, tuple(fields), level)
    return f.scaled(fill / (4 * level) / f.sup_bound())
