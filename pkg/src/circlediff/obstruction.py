"""Numerical evidence that the chart multiplication is not complex-analytic at (0, 0).

The test function is

.. math:: f(z) = \\frac{1}{z - e^R} + \\frac{1}{1/z - e^R},

real on the unit circle and with simple poles at ``exp(+-R)``.  Along the
constant second argument ``z * 1`` the chart transport gives the slice
``h(z) = r f(exp(i z))``; it is computed for real ``z`` by :func:`diffeo.mu`
and has its nearest singularities at ``z = +-iR``.  So ``|h(it)|`` blows up as
``t -> R`` and the Taylor series of ``h`` at 0 has radius exactly ``R``, no
matter how small ``r`` is or how deep the annulus level.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .diffeo import RealCircleFunction, mu
from .errors import OutOfDiscError, PoleError, UnstableEstimateError
from .laurent import DEFAULT_DEGREE, AnnulusLevel, circle_points

SYMMETRY_TOL = 1e-12
SLICE_TOL = 1e-8
SLOPE_TOL = 0.05
RADIUS_TOL = 0.05
CONTOUR_FRACTION = 0.8
# per-coefficient root-test estimates may spread this much before we call them unstable
SPREAD_LIMIT = 0.25
_POLE_TOL = 1e-14


def pole_function(R, z):
    """``f(z) = 1/(z - e^R) + 1/(1/z - e^R)``.

    Raises:
        PoleError: at ``z = 0`` or at the poles ``exp(+-R)``.
    """
    z = np.asarray(z, dtype=complex)
    eR = math.exp(R)
    if np.any(z == 0):
        raise PoleError("f is evaluated at z = 0")
    if np.any(np.abs(z - eR) <= _POLE_TOL * eR) or np.any(np.abs(z - 1 / eR) <= _POLE_TOL):
        raise PoleError(f"z hits a pole exp(+-{R})")
    out = 1.0 / (z - eR) + 1.0 / (1.0 / z - eR)
    return out[()] if out.ndim == 0 else out


def grid_sup_on_level(R, n, points=1024):
    """Largest ``|f|`` over the boundary circles and the unit circle of ``U_n``."""
    level = AnnulusLevel(n)
    return max(
        float(np.max(np.abs(pole_function(R, circle_points(points, rad)))))
        for rad in (level.inner, 1.0, level.outer)
    )


@dataclass(frozen=True)
class PoleObstruction:
    """Parameters of the counterexample: pole exponent ``R``, scale ``r``, level ``n``."""

    R: float
    r: float
    n: int

    def __post_init__(self):
        if not self.R > 0 or not self.r > 0:
            raise ValueError("R and r must be positive")
        if not 1.0 / self.n < self.R:
            raise ValueError(f"level {self.n} does not avoid the poles: need 1/n < R = {self.R}")

    @classmethod
    def normalized(cls, R=1.0, n=2, target=None):
        """Choose ``r`` so that the grid sup of ``r f`` on ``U_n`` equals ``target``
        (default ``1/(4n)``)."""
        if not 1.0 / n < R:
            raise ValueError(f"level {n} does not avoid the poles: need 1/n < R = {R}")
        target = 1.0 / (4 * n) if target is None else target
        return cls(R, target / grid_sup_on_level(R, n), n)

    @property
    def scaled_sup(self):
        return self.r * grid_sup_on_level(self.R, self.n)


def slice_value(obs, z):
    """``h(z) = r f(exp(i z))`` for ``|z| < R``."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= obs.R):
        raise OutOfDiscError(f"slice is defined on |z| < R = {obs.R}")
    out = obs.r * pole_function(obs.R, np.exp(1j * z))
    return out[()] if out.ndim == 0 else out


def circle_function(obs, degree=DEFAULT_DEGREE):
    """``r f`` restricted to the circle, as a chart coordinate."""
    return RealCircleFunction.from_function(
        lambda th: np.real(obs.r * pole_function(obs.R, np.exp(1j * th))), degree
    )


def slice_via_mu(obs, t, degree=DEFAULT_DEGREE, eta1=None):
    """``mu(r f, t 1)(1)`` for real ``t``, computed by the chart transport."""
    eta1 = eta1 if eta1 is not None else circle_function(obs, degree)
    out = mu(eta1, RealCircleFunction.constant(t), degree=degree)
    return float(out.at_angle(0.0))


def default_t_grid(R, points=61):
    return R - np.logspace(-1, -4, points)


def divergence_scan(obs, t_grid=None):
    """Rows ``(t, |h(i t)|)`` for ``t`` approaching ``R`` from below."""
    t = default_t_grid(obs.R) if t_grid is None else np.asarray(t_grid, dtype=float)
    if np.any(t >= obs.R):
        raise ValueError("scan times must stay below R")
    return [(float(s), float(abs(slice_value(obs, 1j * s)))) for s in t]


def divergence_fit(obs, rows):
    """Least-squares fit ``log|h(it)| = slope * (-log(R - t)) + intercept``."""
    t = np.array([row[0] for row in rows])
    v = np.array([row[1] for row in rows])
    slope, intercept = np.polyfit(-np.log(obs.R - t), np.log(v), 1)
    return {"slope": float(slope), "intercept": float(intercept),
            "window": [float(t.min()), float(t.max())]}


def taylor_coefficients(obs, K, contour_fraction=CONTOUR_FRACTION):
    """First ``K + 1`` Taylor coefficients of ``h`` at 0 from ``4K`` samples on
    the circle ``|z| = contour_fraction * R``."""
    N = 4 * K
    rho = contour_fraction * obs.R
    samples = slice_value(obs, circle_points(N, rho))
    a = np.fft.fft(samples) / N
    m = np.arange(K + 1)
    return a[: K + 1] / rho**m, rho


def radius_estimate(obs, K=64, contour_fraction=CONTOUR_FRACTION, details=False):
    """Cauchy-Hadamard radius ``1 / limsup |a_m / a_0|^{1/m}`` over ``m`` in ``[K/2, K]``.

    Normalising by ``a_0`` makes the estimate independent of the scale ``r``.
    Coefficients at the rounding floor (the odd ones vanish since ``h`` is even)
    are left out.

    Raises:
        ValueError: if ``K < 16``.
        UnstableEstimateError: if ``a_0`` vanishes, too few coefficients are
            resolved, or the per-coefficient estimates spread more than 25 %.
    """
    if K < 16:
        raise ValueError("radius estimation needs K >= 16")
    a, rho = taylor_coefficients(obs, K, contour_fraction)
    m = np.arange(K + 1)
    scaled = np.abs(a) * rho**m
    resolved = scaled > 1e-12 * scaled.max()
    tail = (m >= K // 2) & resolved & (m > 0)
    diagnostics = {"K": K, "contour_radius": rho, "resolved_tail": int(tail.sum())}
    if not resolved[0] or tail.sum() < 2:
        raise UnstableEstimateError("too few resolved Taylor coefficients", diagnostics)
    per_m = np.abs(a[tail] / a[0]) ** (-1.0 / m[tail])
    estimate = float(per_m.min())
    spread = float(per_m.max() / per_m.min() - 1.0)
    diagnostics.update(spread=spread, per_m=dict(zip(m[tail].tolist(), per_m.tolist())))
    if spread > SPREAD_LIMIT:
        raise UnstableEstimateError(f"root-test estimates spread by {spread:.1%}", diagnostics)
    return (estimate, diagnostics) if details else estimate


def symmetry_checks(R, samples=1000, seed=0):
    """Max defects of ``f(conj z) = conj f(z)``, ``f(1/z) = f(z)`` and reality on the circle.

    Sample points have ``|log|z|| <= R/2``; defects are relative to ``max(1, |f|)``.
    """
    rng = np.random.default_rng(seed)
    z = np.exp(rng.uniform(-R / 2, R / 2, samples) + 1j * rng.uniform(-np.pi, np.pi, samples))
    fz = pole_function(R, z)
    scale = np.maximum(1.0, np.abs(fz))
    conj = np.max(np.abs(pole_function(R, np.conj(z)) - np.conj(fz)) / scale)
    inv = np.max(np.abs(pole_function(R, 1.0 / z) - fz) / scale)
    w = np.exp(1j * rng.uniform(-np.pi, np.pi, samples))
    real = np.max(np.abs(pole_function(R, w).imag) / np.maximum(1.0, np.abs(pole_function(R, w))))
    return {"conjugation": float(conj), "inversion": float(inv), "circle_reality": float(real)}


def slice_consistency(obs, fractions=(-0.4, -0.1, 0.1, 0.4), degree=DEFAULT_DEGREE):
    """Max ``|h(t) - mu(r f, t 1)(1)|`` over ``t = fraction * R``."""
    eta1 = circle_function(obs, degree)
    errs = [abs(float(np.real(slice_value(obs, q * obs.R))) - slice_via_mu(obs, q * obs.R, degree, eta1))
            for q in fractions]
    return float(max(errs))


def obstruction_report(obs, sweep_r=(1e-1, 1e-3, 1e-5), sweep_n=(2, 4, 8), K=64, t_grid=None,
                       degree=DEFAULT_DEGREE):
    """Collect every check into a JSON-ready dict. Failures are recorded, not raised."""
    R = obs.R
    report = {
        "params": {"R": R, "r": obs.r, "n": obs.n, "K": K, "degree": degree,
                   "contour_fraction": CONTOUR_FRACTION, "scaled_sup": obs.scaled_sup,
                   "sweep_r": list(sweep_r), "sweep_n": list(sweep_n)},
        "notes": [],
    }
    checks = {}

    sym = symmetry_checks(R)
    report["symmetry_checks"] = sym
    checks["symmetry"] = all(v <= SYMMETRY_TOL for v in sym.values())

    try:
        err = slice_consistency(obs, degree=degree)
        report["slice_consistency_max_error"] = err
        checks["slice_consistency"] = err <= SLICE_TOL
    except Exception as exc:  # recorded, not raised
        report["slice_consistency_max_error"] = None
        report["notes"].append(f"slice consistency failed: {exc}")
        checks["slice_consistency"] = False

    rows = divergence_scan(obs, t_grid)
    fit = divergence_fit(obs, rows)
    report["divergence_fit"] = fit
    checks["divergence"] = abs(fit["slope"] - 1.0) <= SLOPE_TOL and rows[-1][1] > rows[0][1]

    estimates = []
    cases = [(r, obs.n) for r in sweep_r] + [(None, n) for n in sweep_n]
    for r, n in cases:
        if not 1.0 / n < R:
            report["notes"].append(f"level n={n} skipped: 1/n >= R")
            continue
        case = PoleObstruction.normalized(R, n) if r is None else PoleObstruction(R, r, n)
        entry = {"r": case.r, "n": n, "K": K}
        try:
            entry["estimate"] = radius_estimate(case, K)
        except UnstableEstimateError as exc:
            entry["estimate"] = None
            report["notes"].append(f"unstable radius estimate at r={case.r}, n={n}: {exc}")
        estimates.append(entry)
    report["radius_estimates"] = estimates
    checks["radius"] = bool(estimates) and all(
        e["estimate"] is not None and abs(e["estimate"] - R) <= RADIUS_TOL * R for e in estimates
    )

    report["checks"] = checks
    report["verdict"] = "pass" if all(checks.values()) else "fail"
    return report


def write_scan_csv(fh, rows):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t", "abs_value"])
    for t, v in rows:
        w.writerow([f"{t:.17g}", f"{v:.17g}"])
