import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circlediff.laurent import LaurentSeries, fit_function, supnorm
from circlediff.silva import (
    assign_level,
    compactness_ratio,
    compactness_table,
    decay_rate,
    measured_ratio,
    restrict,
    tail_threshold_holds,
    write_compactness_csv,
)

from .conftest import random_series


def test_restrict_constant():
    g = restrict(supnorm(LaurentSeries.constant(1.0), 1), 2)
    assert g.level.n == 2
    assert g.norm_upper == 1 and g.norm_lower == 1


def test_restrict_monomial():
    g1 = supnorm(LaurentSeries.monomial(8), 1)
    g2 = restrict(g1, 2)
    assert g1.norm_upper == pytest.approx(math.exp(8))
    assert g2.norm_upper == pytest.approx(math.exp(4))
    assert g2.series is g1.series


def test_restrict_z_plus_inverse():
    g1 = supnorm(LaurentSeries.from_terms({-1: 1, 1: 1}), 1)
    g3 = restrict(g1, 3)
    assert g1.norm_upper == pytest.approx(2 * math.e)
    assert g3.norm_upper == pytest.approx(2 * math.exp(1 / 3))


def test_restrict_rejects_deeper_to_shallower():
    with pytest.raises(ValueError):
        restrict(supnorm(LaurentSeries.constant(1.0), 3), 2)


def test_restrict_same_level_is_identity():
    g = supnorm(LaurentSeries.monomial(3), 2)
    h = restrict(g, 2)
    assert h.norm_upper == g.norm_upper and h.norm_lower == g.norm_lower


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 32), st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(0, 5))
def test_restrict_is_norm_monotone(K, seed, n, dm):
    s = random_series(np.random.default_rng(seed), K)
    g = supnorm(s, n)
    h = restrict(g, n + dm)
    assert h.norm_upper <= g.norm_upper * (1 + 1e-13)
    assert h.norm_lower <= g.norm_lower * (1 + 1e-13)
    np.testing.assert_array_equal(h.series.coeffs, s.coeffs)


def test_compactness_ratio_examples():
    for n in (1, 2, 7):
        assert compactness_ratio(0, n) == 1.0
    assert compactness_ratio(6, 1) == pytest.approx(math.exp(-3))
    assert compactness_ratio(6, 1) == pytest.approx(0.0498, abs=5e-5)
    assert compactness_ratio(-6, 1) == compactness_ratio(6, 1)
    ratios = [compactness_ratio(k, 3) for k in range(0, 400, 10)]
    assert all(b < a for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] < 1e-8


def test_measured_ratio_matches_closed_form():
    worst = max(abs(me - cf) for _, _, cf, me in compactness_table(32, 8))
    assert worst <= 1e-10


def test_measured_ratio_negative_index():
    assert measured_ratio(-5, 2) == pytest.approx(compactness_ratio(-5, 2), abs=1e-12)


def test_compactness_csv_columns():
    buf = io.StringIO()
    write_compactness_csv(buf, 2, 2)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "k,n,closed_form_ratio,measured_ratio"
    assert len(lines) == 1 + 3 * 2
    k, n, cf, me = lines[2].split(",")
    assert (int(k), int(n)) == (1, 1)
    assert float(cf) == math.exp(-0.5)


def test_assign_level_polynomial_is_level_one(rng):
    for _ in range(5):
        s = random_series(rng, 8)
        a8 = assign_level(s)
        a64 = assign_level(s.resize(64))
        assert a8.certified_level == 1
        assert a64.certified_level == 1


@pytest.mark.parametrize("a,minimum", [(0.5, 3), (0.125, 9), (1.0, 2)])
def test_assign_level_pole_expansion(a, minimum):
    s = fit_function(lambda z: 1 / (z - math.exp(a)), 64)
    res = assign_level(s)
    assert res.certified_level >= minimum
    # the smallest level whose annulus misses the pole, 1/n < a
    assert res.certified_level == math.floor(1 / a) + 1
    assert res.decay_margin > 0
    assert res.decay_rate == pytest.approx(a, rel=0.02)
    assert tail_threshold_holds(res.germ)


def test_assign_level_zero_series_raises():
    with pytest.raises(ValueError):
        assign_level(LaurentSeries.zeros(8))


def test_assign_level_none_beyond_cap():
    s = fit_function(lambda z: 1 / (z - math.exp(0.01)), 64)
    assert assign_level(s) is None


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([0.5, 0.3, 0.2, 1.0]), st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3))
def test_assign_level_scale_invariant(a, lam):
    s = fit_function(lambda z: 1 / (z - math.exp(a)) + 0.5 / (1 / z - math.exp(a)), 64)
    base = assign_level(s)
    assert assign_level(s * lam).certified_level == base.certified_level


def test_decay_rate_of_geometric_tail():
    s = LaurentSeries(np.exp(-0.3 * np.abs(np.arange(-40, 41))))
    assert decay_rate(s) == pytest.approx(0.3, rel=1e-10)
