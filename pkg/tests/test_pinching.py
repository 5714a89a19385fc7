"""Pinching thresholds, origin classification, and sequence taxonomy.

Evaluation points were fixed by hand from the closed forms:
    threshold(l1, t) = -l1 * (ln(-l1) + ln(1 + c0*t) - ln(c0) - 3)
    l3_bound(l1, t)  = -l1/2 * ln(-l1 * (1/c0 + t) * e^-2)
before being compared against the implementation.
"""
from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collapselab import (
    CurvatureSpectrum,
    PinchingParams,
    SpectrumHistory,
    ansc_verify,
    check_pinching,
    cigar_profile,
    classify_origin,
    classify_sequence,
    evolve,
    hamilton_ivey_threshold,
    lambda3_lower_bound,
    lift_product,
    spectrum_history,
    sphere_profile,
)
from collapselab.pinching import BumpLike, SequenceKind, SplitLike

_P1 = PinchingParams(c0=1.0, tolerance=0.0)


def _flat_history(lambdas, times=(0.0,)):
    """Spatially constant synthetic history with one spectrum per time."""
    specs = []
    for _ in times:
        l1, l2, l3 = lambdas
        specs.append(
            CurvatureSpectrum(
                lambda1=np.full(4, l1),
                lambda2=np.full(4, l2),
                lambda3=np.full(4, l3),
            )
        )
    return SpectrumHistory(np.asarray(times, dtype=float), specs)


# -- threshold evaluation points ---------------------------------------------


def test_threshold_at_unit_eigenvalue():
    assert hamilton_ivey_threshold(-1.0, _P1, 0.0) == pytest.approx(-3.0, abs=1e-12)


def test_threshold_root_of_bracket():
    # -l1 = c0*e^3/(1 + c0*t) makes the bracket vanish for any (c0, t)
    for c0, t in ((1.0, 0.7), (2.5, 0.0), (0.5, 1.3)):
        l1 = -c0 * math.exp(3.0) / (1.0 + c0 * t)
        got = hamilton_ivey_threshold(l1, PinchingParams(c0=c0, tolerance=0.0), t)
        assert abs(got) < 1e-12


def test_threshold_vanishing_eigenvalue():
    # x*ln(x) -> 0: magnitude stays below 3e-8 at l1 = -1e-9
    assert abs(hamilton_ivey_threshold(-1e-9, _P1, 0.0)) < 3e-8


def test_lambda3_bound_root_of_logarithm():
    for c0, t in ((1.0, 0.5), (2.0, 0.0)):
        l1 = -math.exp(2.0) / (1.0 / c0 + t)
        got = lambda3_lower_bound(l1, PinchingParams(c0=c0, tolerance=0.0), t)
        assert abs(got) < 1e-12


def test_lambda3_bound_direct_point():
    got = lambda3_lower_bound(-math.exp(4.0), _P1, 0.0)
    assert got == pytest.approx(math.exp(4.0), abs=1e-12)


def test_lambda3_bound_at_unit_eigenvalue():
    # -1/2 * (-1) * ln(e^-2) = -1
    assert lambda3_lower_bound(-1.0, _P1, 0.0) == pytest.approx(-1.0, abs=1e-12)


@settings(max_examples=80, deadline=None)
@given(
    l1=st.floats(min_value=-1e4, max_value=-1e-6),
    t=st.floats(min_value=0.0, max_value=5.0),
    dt=st.floats(min_value=1e-3, max_value=2.0),
    c0=st.floats(min_value=0.1, max_value=10.0),
)
def test_threshold_monotone_in_time(l1, t, dt, c0):
    p = PinchingParams(c0=c0, tolerance=0.0)
    assert hamilton_ivey_threshold(l1, p, t + dt) > hamilton_ivey_threshold(l1, p, t)


@settings(max_examples=60, deadline=None)
@given(
    mag=st.floats(min_value=1.0, max_value=50.0),
    t=st.floats(min_value=0.0, max_value=3.0),
    c0=st.floats(min_value=0.2, max_value=5.0),
)
def test_lambda3_bound_superlinear(mag, t, c0):
    """bound / (-l1) grows without bound; it passes 10 once
    -l1 exceeds e^22 / (1/c0 + t)."""
    l1 = -mag * math.exp(22.0) / (1.0 / c0 + t)
    p = PinchingParams(c0=c0, tolerance=0.0)
    ratio = lambda3_lower_bound(l1, p, t) / (-l1)
    assert ratio >= 10.0


# -- pinching sweep ----------------------------------------------------------


def test_sphere_product_lift_reports_empty():
    sol = evolve(sphere_profile(n=101), 0.3, output_stride=200)
    hist = spectrum_history(sol)
    report = check_pinching(hist, _P1)
    assert report.violations == ()
    assert report.checked == 0  # lambda1 = 0 everywhere, hypothesis never active


def test_cigar_product_lift_reports_empty():
    sol = evolve(cigar_profile(r_max=6.0, n=121), 0.2, output_stride=200)
    report = check_pinching(spectrum_history(sol), _P1)
    assert report.violations == ()
    assert report.checked == 0


def test_no_violation_above_threshold():
    # R = -1 against threshold -3
    report = check_pinching(_flat_history((-1.0, 0.0, 0.0)), _P1)
    assert report.checked == 4
    assert report.violations == ()


def test_constructed_violation_is_flagged():
    # l1 = -e^4 gives threshold e^4*(1 + ln(1+t)) > 0 > scalar = -e^4
    report = check_pinching(_flat_history((-math.exp(4.0), 0.0, 0.0)), _P1)
    assert report.checked == 4
    assert len(report.violations) == 4
    v = report.violations[0]
    assert v.threshold > v.scalar
    assert v.lambda1 == -math.exp(4.0)


def test_tolerance_suppresses_marginal_violations():
    loose = PinchingParams(c0=1.0, tolerance=1e9)
    report = check_pinching(_flat_history((-math.exp(4.0), 0.0, 0.0)), loose)
    assert report.violations == ()
    assert report.checked == 4


# -- origin classification ---------------------------------------------------


def test_isotropic_origin_is_bump_like():
    got = classify_origin((1.0, 1.0, 1.0), c_threshold=0.1)
    assert isinstance(got, BumpLike)
    assert got.c == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-12)


def test_product_origin_is_split_like():
    assert isinstance(classify_origin((0.0, 0.0, 2.0)), SplitLike)


def test_small_ratio_origin_is_split_like():
    # 0.01 / sqrt(0.01^2 + 1 + 1) ~ 0.00707 < 0.1
    assert isinstance(classify_origin((0.01, 1.0, 1.0), c_threshold=0.1), SplitLike)


@settings(max_examples=80, deadline=None)
@given(
    l1=st.floats(min_value=-2.0, max_value=2.0),
    l2=st.floats(min_value=-2.0, max_value=2.0),
    l3=st.floats(min_value=0.1, max_value=2.0),
    s=st.floats(min_value=1e-3, max_value=1e3),
)
def test_classify_origin_scale_invariant(l1, l2, l3, s):
    base = classify_origin((l1, l2, l3))
    scaled = classify_origin((s * l1, s * l2, s * l3))
    assert type(base) is type(scaled)
    if isinstance(base, BumpLike):
        assert scaled.c == pytest.approx(base.c, rel=1e-9)


# -- sequence taxonomy -------------------------------------------------------


def test_bounded_products_are_type_iii():
    t = [float(i) for i in range(1, 9)]
    k = [1.0 / i for i in range(1, 9)]
    got = classify_sequence(t, k, c=1.0)
    assert got.kind is SequenceKind.TYPE_III_LIKE
    np.testing.assert_allclose(got.tk_products, np.ones(8))


def test_unbounded_products_are_type_iib():
    # monotone escape needs the last product past 10x the first
    t = [float(i) for i in range(1, 17)]
    got = classify_sequence(t, [1.0] * 16, c=1.0)
    assert got.kind is SequenceKind.TYPE_IIB_LIKE


def test_log_growth_is_type_iib():
    n = 1500  # ln(1+n) must clear 10*ln(2) for the escape test
    t = [float(i) for i in range(1, n + 1)]
    k = [math.log(1.0 + i) / i for i in range(1, n + 1)]
    got = classify_sequence(t, k, c=1.0)
    assert got.kind is SequenceKind.TYPE_IIB_LIKE


def test_short_unbounded_sample_is_indeterminate():
    # eight points cannot witness escape; the verdict must stay open
    t = [float(i) for i in range(1, 9)]
    got = classify_sequence(t, [1.0] * 8, c=1.0)
    assert got.kind is SequenceKind.INDETERMINATE


@settings(max_examples=60, deadline=None)
@given(
    sigma=st.floats(min_value=1e-3, max_value=1e3),
    ks=st.lists(st.floats(min_value=0.01, max_value=10.0), min_size=4, max_size=12),
)
def test_classify_sequence_reparametrization_invariant(sigma, ks):
    t = [float(i) for i in range(1, len(ks) + 1)]
    base = classify_sequence(t, ks, c=1.0)
    moved = classify_sequence([sigma * x for x in t], [k / sigma for k in ks], c=1.0)
    assert moved.kind is base.kind
    np.testing.assert_allclose(moved.tk_products, base.tk_products, rtol=1e-9)


# -- asymptotic nonnegativity ------------------------------------------------


def test_ansc_nonnegative_members_pass():
    members = [np.zeros(5), np.full(5, 0.3), np.linspace(0.0, 2.0, 5)]
    ok, worst = ansc_verify(members, delta_list=[1.0, 0.5, 0.25])
    assert ok
    assert worst >= 0.0


def test_ansc_constructed_failure_ratio():
    deltas = [1.0, 0.5, 0.25]
    members = [np.zeros(3), np.array([0.0, -1.0, 0.0]), np.zeros(3)]
    ok, worst = ansc_verify(members, delta_list=deltas)
    assert not ok
    assert worst == pytest.approx(-2.0, rel=1e-12)


def test_ansc_geometric_default_schedule():
    # default deltas are delta0 * 2^-i; a -delta0/2 dip in member 0 passes,
    # the same dip in member 2 fails
    dip = np.array([0.0, -0.5, 0.0])
    ok_early, _ = ansc_verify([dip, np.zeros(3), np.zeros(3)])
    ok_late, _ = ansc_verify([np.zeros(3), np.zeros(3), dip])
    assert ok_early
    assert not ok_late


def test_ansc_synthetic_schedule_from_lower_bound():
    """Members whose worst eigenvalue tracks -sqrt(3)*C'/L over the window
    schedule L in {2, 4, 8} stay inside matching deltas."""
    c_prime = 1.0
    ls = [2.0, 4.0, 8.0]
    deltas = [math.sqrt(3.0) * c_prime / l for l in ls]
    members = [np.array([0.0, -0.9 * d, 0.2]) for d in deltas]
    ok, worst = ansc_verify(members, delta_list=deltas)
    assert ok
    assert worst == pytest.approx(-0.9, rel=1e-12)
