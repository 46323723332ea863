import math

import numpy as np
import pytest

from chow_census.census import (
    CensusError, EXHAUSTIVE_GRID, census_labels, class_total, classify_by_trial_division,
    classify_census, coeffs_from_indices, enumerate_plane_curves, indices_of, planar_in_Pr_census,
    point_statistics, run_suite, sample_census, sample_index, verify_bounds, weil_check,
    wilson_interval,
)
from chow_census.forms import form_index, point_count
from chow_census.qcount import planar_curves_count, plane_curve_space_count, smooth_conic_count

CODE = {"ABSOLUTELY_IRREDUCIBLE": 0, "RELATIVELY_IRREDUCIBLE": 1, "FQ_REDUCIBLE": 2}


def test_class_totals():
    assert class_total(1, 2) == 7
    assert class_total(2, 2) == 63
    assert class_total(2, 3) == 364 == len(list(enumerate_plane_curves(2, 3)))


def test_enumeration_order_matches_form_index():
    for i, f in enumerate(enumerate_plane_curves(2, 3)):
        assert f.is_canonical and form_index(f) == i


def test_index_coefficient_round_trip():
    for q, D in [(2, 6), (3, 10), (4, 6), (5, 6)]:
        total = (q**D - 1) // (q - 1)
        idx = np.unique(np.random.default_rng(q).integers(0, total, 500))
        C = coeffs_from_indices(idx, q, D)
        assert np.array_equal(indices_of(C, q), idx)


def test_census_examples():
    assert classify_census(2, 2).as_tuple() == (28, 7, 28)
    assert classify_census(2, 3).as_tuple() == (91, 39, 234)
    for q in (2, 3, 5):
        assert classify_census(2, q).absolutely_irreducible == smooth_conic_count(q)
    rep = classify_census(1, 2)
    assert rep.as_tuple() == (0, 0, 7)


@pytest.mark.parametrize("d,q,n", [(2, 2, None), (2, 3, None), (3, 2, None), (2, 5, 150),
                                   (3, 3, 60), (4, 2, 60), (2, 4, 150),
                                   (4, 3, 100), (5, 2, 100), (3, 5, 150)])
def test_sieve_matches_trial_division(d, q, n):
    lab = census_labels(d, q)
    total = len(lab.labels)
    if n is None:
        idx = np.arange(total)
    else:
        idx = np.random.default_rng(d * 100 + q).choice(total, size=n, replace=False)
    for i, c in classify_by_trial_division(d, q, idx).items():
        assert CODE[c.kind.value] == lab.labels[i]
        assert (c.splitting_degree or 0) == lab.split[i]


@pytest.mark.parametrize("d,q", EXHAUSTIVE_GRID)
def test_census_partition_and_line_powers(d, q):
    rep = classify_census(d, q)
    assert sum(rep.as_tuple()) == rep.total == plane_curve_space_count(d, q)
    assert rep.line_powers == q * q + q + 1
    assert sum(rep.splitting_degrees.values()) == rep.relatively_irreducible


def test_relative_counts_small_degree_closed_forms():
    # conics: norms of the (q^4 - q)/2 conjugate pairs of non-rational lines
    for q in (2, 3, 4, 5):
        assert classify_census(2, q).relatively_irreducible == (q**4 - q) // 2
    # cubics: norms of non-rational lines over F_{q^3}
    for q in (2, 3):
        assert classify_census(3, q).relatively_irreducible == (q**6 + q**3 + 1 - (q * q + q + 1)) // 3


def test_workers_do_not_change_results():
    a = classify_census(3, 3, workers=1).to_json()
    b = classify_census(3, 3, workers=3).to_json()
    assert a == b


def test_sampling_is_deterministic_and_calibrated():
    a = sample_census(2, 2, 10_000, seed=7)
    b = sample_census(2, 2, 10_000, seed=7)
    assert a.to_json() == b.to_json()
    lo, hi = a.intervals["FQ_REDUCIBLE"]
    assert lo <= 28 / 63 <= hi
    assert sample_index(7, 0, 63) == sample_index(7, 0, 63)
    assert sample_census(2, 2, 1000, seed=8).to_json() != a.to_json()
    with pytest.raises(CensusError):
        sample_census(2, 2, 999, seed=1)


def test_sample_agrees_with_exhaustive_labels():
    rep = sample_census(3, 2, 1000, seed=3)
    lab = census_labels(3, 2)
    counts = np.bincount([lab.labels[sample_index(3, i, rep.total)] for i in range(1000)], minlength=3)
    assert rep.as_tuple() == (counts[2], counts[1], counts[0])


def test_wilson_interval():
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert math.isclose(lo, 0.4038, abs_tol=1e-3) and math.isclose(hi, 0.5962, abs_tol=1e-3)
    assert wilson_interval(0, 10)[0] == 0.0


@pytest.mark.parametrize("q", [2, 3, 5])
def test_smooth_conics_have_q_plus_one_points(q):
    stats = point_statistics(2, q, "ABSOLUTELY_IRREDUCIBLE")
    assert stats.histogram == {q + 1: q**5 - q**2}
    assert stats.mean == q + 1 and stats.max_deviation == 0


def test_point_histogram_matches_scalar_counts():
    stats = point_statistics(2, 2)
    hist = {}
    for f in enumerate_plane_curves(2, 2):
        k = point_count(f)
        hist[k] = hist.get(k, 0) + 1
    assert stats.histogram == hist
    assert point_statistics(2, 2, "FQ_REDUCIBLE").histogram == {3: 7, 5: 21}


@pytest.mark.parametrize("q,bound", [(3, 3), (5, 4)])
def test_cubic_deviation_within_weil(q, bound):
    stats = point_statistics(3, q, "ABSOLUTELY_IRREDUCIBLE")
    assert stats.max_deviation <= bound
    assert weil_check(3, q).status == "PASS"


def test_planar_pair_enumeration():
    assert planar_in_Pr_census(2, 3, 2) == 875
    assert planar_in_Pr_census(2, 3, 3) == planar_curves_count(2, 3, 3)
    assert planar_in_Pr_census(3, 3, 2) == planar_curves_count(3, 3, 2)
    assert planar_in_Pr_census(1, 3, 2) == 35


def test_verify_bounds_reports():
    rep = verify_bounds(3, 3, 2)
    assert not rep.failed
    statuses = {c.name: c.status for c in rep.checks}
    assert statuses["plane reducible count within interval"] == "PASS"
    rep = verify_bounds(2, 3, 2)
    assert not rep.failed
    assert any(c.status == "PASS" and c.detail.get("count") == 875 for c in rep.checks)
    rep = verify_bounds(4, 3, 2)
    assert not rep.failed
    assert any(c.status == "VACUOUS" for c in rep.checks)


def test_infeasible_census_rejected():
    with pytest.raises(CensusError):
        classify_census(99, 2)
    with pytest.raises(CensusError):
        verify_bounds(99, 3, 2)
    with pytest.raises(CensusError):
        classify_census(2, 6)


def test_named_suites():
    for name in ("lemma-counting", "codim", "g-identities"):
        rep = run_suite(name)
        assert rep.checks and not rep.failed
    with pytest.raises(CensusError):
        run_suite("nope")
