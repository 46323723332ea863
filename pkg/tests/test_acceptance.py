"""One test per acceptance criterion; conftest prints a PASS/FAIL line for each."""

import random
import time
from fractions import Fraction
from math import comb

import pytest
from mpmath import mp, mpf

from chow_census import census
from chow_census.bounds import (
    Rounding, ScaledPower, g_coeff, plane_reducible_interval, prob_reducible_interval,
    reducible_codim, rel_irr_interval,
)
from chow_census.census import (
    EXHAUSTIVE_GRID, classify_census, planar_in_Pr_census, point_statistics,
)
from chow_census.chow import (
    Line, LineCycle, cycle_chow_form, field_of_definition, line_chow_form, lines_of, norm_map,
    support_points,
)
from chow_census.forms import HomogeneousForm, IrreducibilityKind, classify, norm
from chow_census.gf import make_field
from chow_census.qcount import planar_curves_count, plane_curve_space_count

F2, F3, F4 = make_field(2), make_field(3), make_field(2, 2)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def _b(d, r):
    if d == 1:
        return 2 * (r - 1)
    return max(2 * d * (r - 1), 3 * (r - 2) + d * (d + 3) // 2)


def test_criterion_01_exact_counting():
    with Timer() as t:
        assert planar_curves_count(2, 3, 2) == 875
        for d, r, q in [(2, 3, 2), (2, 3, 3), (3, 3, 2)]:
            assert int(planar_in_Pr_census(d, r, q)) == int(planar_curves_count(d, r, q))
    assert t.elapsed < 10


def test_criterion_02_census_classification():
    with Timer() as t:
        assert classify_census(2, 2).as_tuple() == (28, 7, 28)
        assert classify_census(2, 3).as_tuple() == (91, 39, 234)
        for q in (2, 3, 5):
            assert classify_census(2, q).absolutely_irreducible == q**5 - q**2
    assert t.elapsed < 60


def test_criterion_03_plane_reducibility_bounds():
    with Timer() as t:
        for d, q in [(3, 2), (3, 3), (3, 5), (4, 2), (4, 3), (5, 2)]:
            red = classify_census(d, q).fq_reducible
            P = int(plane_curve_space_count(d, q))
            lo = max(Fraction(0), Fraction(P * (q - 3), q**d))
            hi = Fraction(P * (q + 2), q**d)
            assert lo <= red <= hi, (d, q, red)
            assert plane_reducible_interval(d, q).contains(red)
    assert t.elapsed < 1800


def test_criterion_04_codimension():
    with Timer() as t:
        for r in range(3, 11):
            for d in range(max(2, 4 * r - 8), 301):
                direct = min(_b(d, r) - _b(k, r) - _b(d - k, r) for k in range(1, d // 2 + 1))
                rep = reducible_codim(d, r)
                assert rep.codim == direct
                assert rep.dim == _b(d, r) - direct
    assert t.elapsed < 10


def test_criterion_05_g_identities():
    with Timer() as t:
        for d in range(1, 41):
            for r in range(3, 13):
                defn = Fraction(comb(r + d - 2, d) ** 2 * (r + d - 1), (r - 1) * (d + 1))
                diff = Fraction(comb(r + d - 2, d) ** 2 - comb(r + d - 2, d - 1) * comb(r + d - 2, d + 1))
                binoms = Fraction(comb(d + r - 2, r - 2) * comb(d + r - 1, r - 1), d + 1)
                assert defn == diff == binoms
                assert defn.denominator == 1
                assert g_coeff(d, r) == defn
    assert t.elapsed < 1


def test_criterion_06_chow_support_recovery():
    with Timer() as t:
        for field, expected in ((F2, 35), (F3, 130)):
            lines = list(lines_of(field, 3))
            assert len(lines) == expected
            for L in lines:
                F = line_chow_form(L)
                for s in (1, 2):
                    ext = make_field(field.p, field.m * s)
                    assert support_points(F, s) == L.points(ext)
        rng = random.Random(6)
        for i in range(50):
            field = (F2, F3)[i % 2]
            L, M = rng.sample(list(lines_of(field, 3)), 2)
            F = cycle_chow_form(LineCycle.of(L, M))
            assert support_points(F) == L.points() | M.points()
    assert t.elapsed < 60


def test_criterion_07_norm_relative_irreducibility():
    rng = random.Random(7)
    with Timer() as t:
        done = 0
        while done < 50:
            rows = [[rng.randrange(4) for _ in range(4)] for _ in range(2)]
            try:
                L = Line(F4, rows)
            except ValueError:
                continue
            coeffs = [rng.randrange(4) for _ in range(3)]
            if not any(coeffs):
                continue
            lin = HomogeneousForm.linear(F4, coeffs)
            # both constructions must be genuinely over F_4, not over F_2
            if L.frobenius(1) == L or lin.frobenius(1).canonical() == lin.canonical():
                continue
            N = norm_map(line_chow_form(L), F2)
            assert field_of_definition(N) is F2
            assert field_of_definition(N.embed(F4)) is F2
            c = classify(norm(lin, F2))
            assert c.kind is IrreducibilityKind.RELATIVELY_IRREDUCIBLE and c.splitting_degree == 2
            done += 1
    assert t.elapsed < 30


def test_criterion_08_point_statistics():
    with Timer() as t:
        for q in (2, 3, 5):
            stats = point_statistics(2, q, IrreducibilityKind.ABSOLUTELY_IRREDUCIBLE)
            assert stats.total == q**5 - q**2
            assert set(stats.histogram) == {q + 1}
            assert stats.mean == q + 1 and stats.max_deviation == 0
        for q, bound in ((3, 3), (5, 4)):
            stats = point_statistics(3, q, IrreducibilityKind.ABSOLUTELY_IRREDUCIBLE)
            assert stats.max_deviation <= bound
            assert stats.max_deviation**2 <= (2 * 1) ** 2 * q
    assert t.elapsed < 300


PRIME_POWERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128, 1024]


def _grid_point(rng):
    r = rng.randint(3, 10)
    d = rng.randint(max(2, 4 * r - 8), 4 * r + 40)
    # the space-curve bounds accept any integer q >= 2; plane bounds need a field size
    q = rng.choice(PRIME_POWERS) if rng.random() < 0.5 else rng.randint(2, 10**6)
    return d, r, q


def test_criterion_09_bound_calculator_consistency():
    rng = random.Random(2024)
    with Timer() as t:
        for _ in range(10**4):
            d, r, q = _grid_point(rng)
            intervals = [prob_reducible_interval(d, r, q)]
            rep = rel_irr_interval(d, r, q)
            for g in rep.regimes:
                intervals += [g.count, g.probability]
                assert g.probability_exponent == g.count_exponent - _b(d, r)
            if rep.overlap:
                intervals += [rep.count_intersection, rep.probability_intersection]
            for iv in intervals:
                assert iv.is_ordered()
            if q in PRIME_POWERS:
                assert plane_reducible_interval(d, q).is_ordered()
        for _ in range(200):
            n = rng.randint(1, 10**4)
            base = Fraction(rng.randint(1, 400), rng.randint(1, 50))
            up = ScaledPower(Fraction(rng.randint(1, 9), rng.randint(1, 9)), ((base, n),), n, Rounding.UP)
            down = ScaledPower(up.coeff, up.factors, n, Rounding.DOWN)
            with mp.workdps(200):
                true, hi, lo = up.real_value(), up.value(), down.value()
                assert lo <= true <= hi
                assert (hi - lo) / true < mpf("1e-6")
    assert t.elapsed < 10


@pytest.mark.parametrize("workers", [(1, 4, 8)])
def test_criterion_10_determinism(workers):
    census._census_labels_cached.cache_clear()
    with Timer() as t:
        for d, q in EXHAUSTIVE_GRID:
            outputs = {w: classify_census(d, q, workers=w).to_json() for w in workers}
            assert len(set(outputs.values())) == 1, (d, q)
            stats = {w: point_statistics(d, q, workers=w).to_dict() for w in workers}
            assert stats[1] == stats[4] == stats[8]
    assert t.elapsed < 1800
