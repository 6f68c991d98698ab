"""Tests for the visit-correction function xi_n and its threshold scan.

Oracle values are brute-force rational sums computed here with math.comb
and Fraction, independently of the package's log-domain evaluation.
"""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubewalk.combinatorics import (
    XiTable,
    binom_exact,
    binom_gaussian_approx,
    find_g,
    gaussian_approx_ratio,
    log_binom,
    log_xi_all,
    xi,
    xi_exact,
    xi_second_form,
)


def brute_xi(n: int, k: int) -> Fraction:
    # 2^-n (n/2) C(n,k)^-1 sum_j C(n,k+j)/j, straight off the definition
    s = sum(Fraction(math.comb(n, k + j), j) for j in range(1, n - k + 1))
    return Fraction(n, 2) * s / (Fraction(2) ** n * math.comb(n, k))


def test_hand_values():
    assert xi_exact(2, 1) == Fraction(1, 8)
    assert xi_exact(4, 1) == Fraction(25, 96)
    assert xi_exact(4, 4) == 0


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 13])
def test_against_brute_force(n):
    for k in range(n + 1):
        assert xi_exact(n, k) == brute_xi(n, k)
        assert xi(n, k) == pytest.approx(float(brute_xi(n, k)), rel=1e-13)


@pytest.mark.parametrize("n", [1, 4, 9, 17, 30])
def test_second_form_equality(n):
    for k in range(n + 1):
        assert xi_exact(n, k) == xi_second_form(n, k)


def test_log_path_matches_exact():
    for n in (3, 10, 25):
        vals = np.exp(log_xi_all(n))
        for k in range(n):
            assert vals[k] == pytest.approx(float(xi_exact(n, k)), rel=1e-12)
        assert vals[n] == 0.0


def test_monotone_decreasing_and_positive():
    for n in (2, 7, 40, 120):
        vals = np.exp(log_xi_all(n))
        assert np.all(vals[:-1] > vals[1:])
        assert np.all(vals[:-1] > 0)


def test_lower_bound_half_inverse_binomial():
    # xi_n(k) >= C(n,k)^-1 / 2 on k < n/2; the boundary k = n/2 also holds
    # for every n except n = 2, where xi_2(1) = 1/8 < 1/4
    for n in (2, 11, 64, 200):
        logs = log_xi_all(n)
        top = (n - 1) // 2 if n == 2 else n // 2
        for k in range(1, top + 1):
            assert logs[k] >= math.log(0.5) - log_binom(n, k) - 1e-12
    assert xi_exact(2, 1) < Fraction(1, 2) / binom_exact(2, 1)


def test_product_with_binomial_tends_to_one():
    logs = log_xi_all(2000)
    for k in range(4):
        assert math.exp(logs[k] + log_binom(2000, k)) == pytest.approx(1.0, abs=0.05)


def test_domain_errors():
    with pytest.raises(ValueError):
        binom_exact(5, 6)
    with pytest.raises(ValueError):
        binom_exact(5, -1)
    with pytest.raises(ValueError):
        xi(5, 6)
    with pytest.raises(ValueError):
        xi(0, 0)


def test_table_build_and_exact_cutoff():
    t = XiTable.build(12, exact_cutoff=30)
    assert t.exact_values is not None
    assert float(t.exact_values[1]) == pytest.approx(t.value(1), rel=1e-13)
    t2 = XiTable.build(40, exact_cutoff=30)
    assert t2.exact_values is None
    assert t2.xi_times_binom(0) == pytest.approx(t2.value(0))


def test_threshold_scan_pinned_case():
    # brute rational rescan of the same rule the float path uses
    g = find_g(16, 4096.0)
    assert g.feasible and g.g == 3
    assert g.m_prime == pytest.approx(math.sqrt(4096.0 * 16 * math.log(16)))
    thr = Fraction(g.m_prime) / 2**16
    ks = [k for k in range(1, 9) if xi_exact(16, k) <= thr]
    assert min(ks) == 3


def test_threshold_scan_infeasible():
    g = find_g(8, 1.0)
    assert not g.feasible and g.g is None


def test_gaussian_binomial_approx_improves_with_n():
    errs = [abs(gaussian_approx_ratio(n, 0) - 1.0) for n in (20, 200, 2000)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-3
    # the closed form itself at n=200, i=5 (raw value; overflows past n~1000)
    val = binom_gaussian_approx(200, 5)
    assert val == pytest.approx(math.comb(200, 105), rel=0.01)


@settings(deadline=None, max_examples=40)
@given(n=st.integers(min_value=2, max_value=40))
def test_property_shape(n):
    vals = np.exp(log_xi_all(n))
    assert vals.shape == (n + 1,)
    assert vals[n] == 0.0
    assert np.all(np.diff(vals) < 0)


@settings(deadline=None, max_examples=20)
@given(n=st.integers(min_value=1, max_value=16), data=st.data())
def test_property_forms_agree(n, data):
    k = data.draw(st.integers(min_value=0, max_value=n))
    assert xi_exact(n, k) == xi_second_form(n, k)
