import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kinmerit.stats import (
    InsufficientDataError, betainc, students_t_test, t_cdf, t_two_tailed_p,
)

scipy_stats = pytest.importorskip("scipy.stats")
scipy_special = pytest.importorskip("scipy.special")


def test_identical_samples():
    r = students_t_test([1, 2, 4], [1, 2, 4])
    assert (r.t_statistic, r.p_two_tailed) == (0.0, 1.0)


def test_hand_case():
    r = students_t_test([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
    assert r.t_statistic == pytest.approx(-1.0, abs=1e-12)
    assert r.degrees_of_freedom == 8
    assert r.p_two_tailed == pytest.approx(0.3466, abs=1e-4)


def test_strong_separation():
    assert students_t_test([0] * 5, [10, 10, 10, 10, 11]).p_two_tailed < 0.001


def test_degenerate():
    r = students_t_test([3, 3], [3, 3, 3])
    assert r.degenerate and (r.t_statistic, r.p_two_tailed) == (0.0, 1.0)
    r = students_t_test([3, 3], [4, 4])
    assert r.degenerate and r.t_statistic == -math.inf and r.p_two_tailed == 0.0


def test_too_small():
    with pytest.raises(InsufficientDataError):
        students_t_test([1], [1, 2])


samples = st.lists(st.floats(-100, 100, allow_nan=False), min_size=2, max_size=40)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
@settings(max_examples=150, deadline=None)
@given(samples, samples, st.booleans())
def test_matches_scipy_and_antisymmetric(a, b, welch):
    ours = students_t_test(a, b, welch=welch)
    if ours.degenerate:
        return
    ref = scipy_stats.ttest_ind(a, b, equal_var=not welch)
    assert ours.t_statistic == pytest.approx(ref.statistic, rel=1e-6, abs=1e-6)
    assert ours.p_two_tailed == pytest.approx(ref.pvalue, abs=1e-8)
    back = students_t_test(b, a, welch=welch)
    assert abs(back.t_statistic + ours.t_statistic) <= 1e-12 * max(1, abs(ours.t_statistic))
    assert abs(back.p_two_tailed - ours.p_two_tailed) <= 1e-12


@pytest.mark.parametrize("df", [1, 2, 5, 30, 500])
def test_p_decreasing_in_abs_t(df):
    ps = [t_two_tailed_p(t, df) for t in np.linspace(0, 12, 121)]
    assert ps[0] == 1.0
    assert all(x > y for x, y in zip(ps, ps[1:]) if y > 0)
    assert t_cdf(0.7, df) == pytest.approx(scipy_stats.t.cdf(0.7, df), abs=1e-10)


@settings(max_examples=300, deadline=None)
@given(st.floats(0.05, 400), st.floats(0.05, 400), st.floats(0, 1))
def test_betainc_against_reference(a, b, x):
    assert betainc(a, b, x) == pytest.approx(float(scipy_special.betainc(a, b, x)), abs=1e-8)


def test_betainc_domain():
    with pytest.raises(ValueError):
        betainc(0, 1, 0.5)
    with pytest.raises(ValueError):
        betainc(1, 1, 1.5)
