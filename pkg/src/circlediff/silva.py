"""Level structure of the germ space along the circle.

The space of holomorphic germs along the unit circle is the increasing union
of the Banach spaces of bounded holomorphic functions on the annuli ``U_n``.
The bonding maps are restrictions ``U_n -> U_m`` (``m >= n``); on the monomial
basis each one shrinks norms by ``exp(-|k| (1/n - 1/m))``, which is how
compactness shows up numerically.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .laurent import AnnulusLevel, BanachGerm, LaurentSeries, supnorm

MAX_LEVEL = 64
# coefficients below this fraction of the largest one are treated as rounding noise
NOISE_FLOOR = 1e-13
# a side that stops above this fraction of the largest coefficient ends abruptly,
# i.e. it is a finite Laurent polynomial rather than a truncated tail
ABRUPT_END = 1e-8
TAIL_FACTOR = 10.0
# below this degree the tail is too short to fit a rate; the series is taken as exact
MIN_FIT_DEGREE = 16


@dataclass(frozen=True)
class LevelAssignment:
    germ: BanachGerm
    certified_level: int
    decay_margin: float
    decay_rate: float


def restrict(germ, m):
    """Bonding map: view a germ at level ``n`` as a germ at level ``m >= n``."""
    n = germ.level.n
    if m < n:
        raise ValueError(f"restriction goes from level {n} to a deeper level, got m={m}")
    return supnorm(germ.series, AnnulusLevel(m))


def compactness_ratio(k, n):
    """``||z^k||_{n+1} / ||z^k||_n = exp(-|k| / (n (n+1)))``."""
    return math.exp(-abs(k) / (n * (n + 1)))


def measured_ratio(k, n, points=64):
    """Grid-measured ``sup_{U_{n+1}} |z^k| / sup_{U_n} |z^k|``."""
    mono = LaurentSeries.monomial(k)
    return supnorm(mono, n + 1, points).norm_lower / supnorm(mono, n, points).norm_lower


def compactness_table(k_max, n_max):
    """Rows ``(k, n, closed_form_ratio, measured_ratio)`` for ``0<=k<=k_max``, ``1<=n<=n_max``."""
    return [
        (k, n, compactness_ratio(k, n), measured_ratio(k, n))
        for n in range(1, n_max + 1)
        for k in range(0, k_max + 1)
    ]


def write_compactness_csv(path_or_file, k_max, n_max):
    rows = compactness_table(k_max, n_max)
    own = isinstance(path_or_file, str)
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "n", "closed_form_ratio", "measured_ratio"])
        for k, n, cf, me in rows:
            w.writerow([k, n, f"{cf:.17g}", f"{me:.17g}"])
    finally:
        if own:
            fh.close()
    return rows


def _side_rate(mags, scale):
    """Geometric decay rate of one side ``|c_1|, |c_2|, ...`` of a series.

    Returns ``inf`` when the side vanishes or ends abruptly (a polynomial),
    otherwise the least-squares slope of ``-log|c_k|`` over the upper half of
    the resolved indices.
    """
    resolved = np.nonzero(mags > NOISE_FLOOR * scale)[0]
    if resolved.size == 0:
        return math.inf
    last = resolved[-1]
    if last < mags.size - 1 and mags[last] > ABRUPT_END * scale:
        return math.inf
    idx = resolved[resolved >= last // 2]
    if idx.size < 2:
        return math.inf
    k = idx + 1.0
    slope = np.polyfit(k, np.log(mags[idx]), 1)[0]
    return float(-slope)


def decay_rate(s):
    """Estimated ``rho`` with ``|c_k| ~ exp(-rho |k|)``; the slower side wins.

    Series of degree below ``MIN_FIT_DEGREE`` are exact Laurent polynomials
    (rate ``inf``).
    """
    c = np.abs(s.coeffs)
    K = s.degree
    scale = float(np.max(c))
    if scale == 0.0 or K < MIN_FIT_DEGREE:
        return math.inf
    return min(_side_rate(c[K + 1 :], scale), _side_rate(c[K - 1 :: -1], scale))


def tail_threshold_holds(germ):
    """``|c_k| <= 10 norm_upper exp(-|k|/n)`` for ``|k| > K/2``."""
    s = germ.series
    k = s.indices
    tail = np.abs(k) > s.degree / 2
    bound = TAIL_FACTOR * germ.norm_upper * np.exp(-np.abs(k[tail]) / germ.level.n)
    return bool(np.all(np.abs(s.coeffs[tail]) <= bound))


def assign_level(s, tolerance=1e-3):
    """Smallest level ``n <= 64`` that certifiably contains the germ ``s``.

    A level is certified when the coefficient decay rate ``rho`` exceeds
    ``1/n`` by at least ``tolerance`` and the tail threshold holds.  Finite
    Laurent polynomials (coefficients ending abruptly before ``K``) decay
    infinitely fast and land at level 1.

    Returns:
        A :class:`LevelAssignment`, or ``None`` when no level up to 64 works.

    Raises:
        ValueError: for the zero series.
    """
    if not np.any(s.coeffs):
        raise ValueError("the zero series lies in every level; assignment is meaningless")
    rho = decay_rate(s)
    for n in range(1, MAX_LEVEL + 1):
        margin = rho - 1.0 / n
        if margin < tolerance:
            continue
        germ = supnorm(s, n)
        if tail_threshold_holds(germ):
            return LevelAssignment(germ, n, margin, rho)
    return None

