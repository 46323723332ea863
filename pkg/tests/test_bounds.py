import math
import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from chow_census.bounds import (
    E_LOWER, E_UPPER, BoundDomainError, Rounding, ScaledPower, avg_weil_bounds, c_bound,
    certainly_le, chow_degree_bounds, chow_dim, component_dims, count_bounds,
    degree_bound_calculator, g_coeff, nonplanar_fraction_bound, plane_reducible_interval,
    prob_reducible_interval, reducible_codim, rel_irr_degree_bound, rel_irr_interval,
    weil_regime,
)
from chow_census.qcount import planar_curves_count, plane_curve_space_count


def _b(d, r):
    """Chow variety dimension straight from the two component dimensions."""
    if d == 1:
        return 2 * (r - 1)
    return max(2 * d * (r - 1), 3 * (r - 2) + d * (d + 3) // 2)


def test_e_rationals_bracket_e():
    with mp.workdps(250):
        assert mpf(E_LOWER.numerator) / E_LOWER.denominator < mp.e < mpf(E_UPPER.numerator) / E_UPPER.denominator
    assert E_UPPER - E_LOWER < Fraction(1, 10**60)


def test_component_dims_examples():
    assert component_dims(2, 3) == (8, 8)
    assert component_dims(3, 3) == (12, 12)
    assert component_dims(4, 3) == (16, 17)
    with pytest.raises(BoundDomainError):
        component_dims(1, 3)


def test_chow_dim_examples():
    rep = chow_dim(4, 3)
    assert (rep.b, rep.tag) == (17, "PLANAR")
    assert (chow_dim(2, 4).b, chow_dim(2, 4).tag) == (12, "LINES")
    rep = chow_dim(2, 3)
    assert (rep.b, rep.tag, rep.exceptional) == (8, "TIE", True)


def test_chow_dim_tie_only_on_exceptional_list():
    for r in range(3, 12):
        for d in range(2, 60):
            rep = chow_dim(d, r)
            assert rep.b == _b(d, r)
            assert (rep.tag == "TIE") == ((d, r) in {(2, 3), (3, 3)})


def test_codim_examples():
    rep = reducible_codim(4, 3)
    assert (rep.codim, rep.dim) == (1, 16)
    rep = reducible_codim(7, 3)
    assert rep.codim == 4 and rep.u_table == {1: 4, 2: 7, 3: 9} and rep.argmin == 1
    assert reducible_codim(9, 4).codim == 4
    with pytest.raises(BoundDomainError):
        reducible_codim(3, 4)


@settings(max_examples=200, deadline=None)
@given(st.integers(3, 10), st.integers(0, 80))
def test_codim_equals_direct_minimum(r, extra):
    d = max(2, 4 * r - 8) + extra
    rep = reducible_codim(d, r)
    direct = min(_b(d, r) - _b(k, r) - _b(d - k, r) for k in range(1, d // 2 + 1))
    assert rep.codim == direct
    assert rep.dim == _b(d, r) - direct


def test_g_examples():
    assert [g_coeff(d, 3) for d in (1, 2, 3)] == [3, 6, 10]


def _two_row_tableaux(d, n):
    """Semistandard tableaux with two rows of length d and entries in 1..n."""
    # state: (top entry, bottom entry) of the current column
    counts = {(a, b): 1 for a in range(1, n + 1) for b in range(a + 1, n + 1)}
    for _ in range(d - 1):
        new = {}
        for (a, b), c in counts.items():
            for a2 in range(a, n + 1):
                for b2 in range(max(b, a2 + 1), n + 1):
                    new[(a2, b2)] = new.get((a2, b2), 0) + c
        counts = new
    return sum(counts.values())


@pytest.mark.parametrize("r", range(3, 13))
def test_g_matches_tableau_count(r):
    for d in range(1, 41 if r <= 6 else 12):
        assert g_coeff(d, r) == _two_row_tableaux(d, r)


def test_degree_bound_examples():
    res = chow_degree_bounds(1, 3)
    assert res["full"].factors == ((2, 60),) and res["full"].e_exponent == 60
    res = chow_degree_bounds(2, 3)
    assert res["full"].factors == ((4, 132),) and res["full"].e_exponent == 132
    assert res["hat"].coeff == 2 and res["restricted"].coeff == 1
    assert not chow_degree_bounds(2, 3)["restricted_in_domain"]
    assert chow_degree_bounds(3, 3)["restricted_in_domain"]
    logs = [c_bound(d, 3).log10() for d in range(1, 11)]
    assert all(a < b for a, b in zip(logs, logs[1:]))


def test_rel_irr_degree_examples():
    D = rel_irr_degree_bound(2, 6, 3)
    assert D.factors == ((3, 240),) and D.e_exponent == 240
    D = rel_irr_degree_bound(3, 3, 3)
    assert D.factors == () and D.e_exponent == 60
    for d in range(2, 9):
        for ell in {p for p in (2, 3, 5, 7) if d % p == 0}:
            assert certainly_le(rel_irr_degree_bound(ell, d, 3), c_bound(d, 3))
    with pytest.raises(BoundDomainError):
        rel_irr_degree_bound(4, 8, 3)


def test_calculator_examples():
    assert degree_bound_calculator("BEZOUT", 3, 5).exact() == 15
    assert degree_bound_calculator("COMPONENTS_CODIM", d=4, s=3).exact() == 64
    assert degree_bound_calculator("IMAGE", deg_v=2, d=3, m=2).exact() == 18
    assert degree_bound_calculator("HEINTZ_SCHNORR", 2, 3, 4).exact() == 162
    with pytest.raises(BoundDomainError):
        degree_bound_calculator("IMAGE", 2, 3)


def test_prob_reducible_examples():
    assert prob_reducible_interval(7, 3, 5).q_exponent == -4
    iv = prob_reducible_interval(4, 3, 9)
    assert iv.q_exponent == -1
    inv = c_bound(4, 3).reciprocal(Rounding.DOWN)
    assert iv.lower.coeff == Fraction(1, 2 * factorial(4)) * inv.coeff
    assert iv.lower.factors == inv.factors and iv.lower.e_exponent == inv.e_exponent
    iv = prob_reducible_interval(7, 3, 2)
    assert not iv.clamped and iv.is_ordered()
    assert prob_reducible_interval(5, 3, 2).clamped


def test_nonplanar_fraction():
    assert nonplanar_fraction_bound(4, 3, 2).log10() > 0
    vals = [nonplanar_fraction_bound(4, 3, q).log10() for q in (2, 3, 10, 1000, 10**6)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_rel_irr_examples():
    rep = rel_irr_interval(5, 3, 7)
    assert [g.regime for g in rep.regimes] == ["A"] and rep.regimes[0].count_exponent == 20
    assert rep.regimes[0].probability_exponent == -3 == 20 - _b(5, 3)
    rep = rel_irr_interval(8, 3, 7)
    assert rep.overlap and [g.regime for g in rep.regimes] == ["A", "B"]
    assert rep.count_intersection.is_ordered() or rep.count_intersection.lower.is_zero


def test_weil_examples():
    assert weil_regime(8, 10**6) == (10**18 >= 3375 * 8**13)
    rep = avg_weil_bounds(6, 3, 10**6)
    with mp.workdps(50):
        assert rep.concentration_bound <= 1
        assert rep.expectation_bound >= 36 * mp.sqrt(10**6)
    with pytest.raises(BoundDomainError):
        avg_weil_bounds(5, 3, 7)


def test_plane_reducible_examples():
    iv = plane_reducible_interval(3, 2)
    assert iv.lower.coeff == 0 and iv.clamped and iv.upper.coeff == Fraction(1023 * 4, 8)
    P = int(plane_curve_space_count(3, 5))
    iv = plane_reducible_interval(3, 5)
    assert iv.lower.coeff == Fraction(2 * P, 125) and iv.upper.coeff == Fraction(7 * P, 125)


def test_count_bounds_examples():
    cb = count_bounds(2, 3, 2)
    assert (cb.P_lower, cb.P_upper) == (256, 1792)
    assert cb.P_lower <= planar_curves_count(2, 3, 2) <= cb.P_upper
    assert count_bounds(4, 3, 2).R_upper == 212992
    for d, r, q in [(4, 3, 2), (5, 3, 3), (8, 4, 2), (6, 3, 7)]:
        cb = count_bounds(d, r, q)
        assert cb.C_lower <= planar_curves_count(d, r, q)
        assert certainly_le(ScaledPower(cb.C_lower), cb.C_upper)


@settings(max_examples=300, deadline=None)
@given(st.integers(3, 10), st.integers(0, 40), st.integers(2, 10**6))
def test_intervals_ordered(r, extra, q):
    d = max(2, 4 * r - 8) + extra
    assert prob_reducible_interval(d, r, q).is_ordered()
    for g in rel_irr_interval(d, r, q).regimes:
        assert g.count.is_ordered()
        assert g.probability.is_ordered()
        assert g.probability_exponent == g.count_exponent - _b(d, r)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10**4), st.integers(1, 10**4), st.fractions(Fraction(1, 100), Fraction(100)))
def test_scaled_power_brackets_true_value(n, m, base):
    for e_exp in (n, -n, 0):
        up = ScaledPower(base, ((Fraction(m, 7), m % 50),), e_exp, Rounding.UP)
        down = ScaledPower(base, ((Fraction(m, 7), m % 50),), e_exp, Rounding.DOWN)
        with mp.workdps(210):
            true = up.real_value()
            hi, lo = up.value(), down.value()
            assert lo <= true <= hi
            assert (hi - lo) / true < mpf("1e-6")


def test_certainly_le_agrees_with_exact_comparison():
    rng = random.Random(5)
    for _ in range(500):
        a = ScaledPower(Fraction(rng.randint(1, 99), rng.randint(1, 99)), ((rng.randint(2, 9), rng.randint(-30, 30)),))
        b = ScaledPower(Fraction(rng.randint(1, 99), rng.randint(1, 99)), ((rng.randint(2, 9), rng.randint(-30, 30)),))
        assert certainly_le(a, b) == (a.exact() <= b.exact())


def test_scaled_power_log10_is_directed():
    c = c_bound(2, 3)
    with mp.workdps(60):
        exact = 132 * mp.log10(4 * mp.e)
        assert c.log10() >= exact
        assert c.reciprocal(Rounding.DOWN).log10() <= -exact
    assert math.isclose(float(c.log10()), float(exact), rel_tol=1e-12)


def test_invalid_q_rejected():
    for q in (0, 1, -3, 2.5):
        with pytest.raises(BoundDomainError):
            prob_reducible_interval(4, 3, q)
