"""Exhaustive and sampled censuses of plane curves over small finite fields.

The exhaustive census labels every projective class of ternary degree-d forms
as F_q-reducible, relatively irreducible or absolutely irreducible. Instead of
factoring each class, it builds the labels by a sieve over the class index
space:

* reducible classes are exactly the products f*g of canonical forms of
  degrees k and d-k, 1 <= k <= d/2;
* an F_q-irreducible form that splits over F_{q^l} is the product of one
  Galois orbit of l conjugate forms of degree d/l, i.e. the norm of a form
  over F_{q^l}. So the relatively irreducible classes are the norms (for
  primes l | d, smallest first) that are not already reducible;
* everything else is absolutely irreducible.

The per-form trial-division classifier in :mod:`chow_census.forms` is the
oracle the sieve is tested against. Work is split into fixed tasks whose
results are merged by set union, so reports do not depend on worker count.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from statistics import NormalDist

import numpy as np

from . import _linalg
from .bounds import (
    certainly_le,
    count_bounds,
    exact_value,
    nonplanar_fraction_bound,
    plane_reducible_interval,
    planar_dim,
    prob_reducible_interval,
    rel_irr_interval,
    weil_deviation_ok,
    Rounding,
)
from .forms import (
    HomogeneousForm,
    IrreducibilityKind,
    classify,
    form_from_index,
    is_power_of_line,
    monomial_index,
    monomials,
    prime_divisors,
)
from .gf import FieldError, make_field, prime_power
from .qcount import (
    ExactCount,
    grassmannian_count,
    plane_curve_space_count,
    planar_curves_count,
    reducible_planar_count,
)

SCHEMA_VERSION = 1
CENSUS_CAP = 10**8
PAIR_CAP = 10**7
EXHAUSTIVE_GRID = ((2, 2), (2, 3), (2, 5), (3, 2), (3, 3), (3, 5), (4, 2), (4, 3), (5, 2))
CHUNK_ROWS = 1 << 17

FQ_REDUCIBLE = IrreducibilityKind.FQ_REDUCIBLE
RELATIVELY_IRREDUCIBLE = IrreducibilityKind.RELATIVELY_IRREDUCIBLE
ABSOLUTELY_IRREDUCIBLE = IrreducibilityKind.ABSOLUTELY_IRREDUCIBLE
KINDS = (FQ_REDUCIBLE, RELATIVELY_IRREDUCIBLE, ABSOLUTELY_IRREDUCIBLE)
_LABEL = {ABSOLUTELY_IRREDUCIBLE: 0, RELATIVELY_IRREDUCIBLE: 1, FQ_REDUCIBLE: 2}


class CensusError(ValueError):
    """Census parameters outside the feasible range."""


def class_total(d: int, q: int, n: int = 3) -> int:
    D = math.comb(n + d - 1, d)
    return (q**D - 1) // (q - 1)


def _check_feasible(d: int, q: int, cap: int = CENSUS_CAP) -> int:
    if d < 1:
        raise CensusError(f"degree must be >= 1, got {d}")
    try:
        prime_power(q)
    except FieldError as exc:
        raise CensusError(str(exc)) from None
    total = class_total(d, q)
    if total > cap:
        raise CensusError(
            f"census of about 10^{len(str(total)) - 1} classes (d={d}, q={q}) exceeds the cap {cap}; use sampled mode"
        )
    return total


# -- vectorized form arithmetic ---------------------------------------------------

def _offsets(q: int, D: int) -> np.ndarray:
    return np.array([(q**L - 1) // (q - 1) for L in range(D + 1)], dtype=np.int64)


def coeffs_from_indices(idx: np.ndarray, q: int, D: int) -> np.ndarray:
    """Canonical coefficient rows for class indices (vectorized form_from_index)."""
    idx = np.asarray(idx, dtype=np.int64)
    off = _offsets(q, D)
    L = np.searchsorted(off, idx, side="right") - 1
    tail = idx - off[L]
    powers = q ** np.arange(D - 1, -1, -1, dtype=np.int64)
    C = (tail[:, None] // powers[None, :]) % q
    C[np.arange(len(idx)), D - 1 - L] = 1
    return C


def indices_of(C: np.ndarray, q: int) -> np.ndarray:
    """Class indices of canonical coefficient rows (vectorized form_index)."""
    N, D = C.shape
    if q**D >= 2**62:
        raise CensusError("coefficient space too large for 64-bit class indices")
    powers = q ** np.arange(D - 1, -1, -1, dtype=np.int64)
    C = C.astype(np.int64)
    j = (C != 0).argmax(axis=1)
    lead = C[np.arange(N), j]
    if not np.all(lead == 1):
        raise AssertionError("rows are not canonical")
    qL = powers[j]
    return C @ powers - qL + (qL - 1) // (q - 1)


@lru_cache(maxsize=None)
def _product_plan(n: int, k1: int, k2: int) -> tuple:
    target = monomial_index(n, k1 + k2)
    plan = []
    for i, a in enumerate(monomials(n, k1)):
        for j, b in enumerate(monomials(n, k2)):
            plan.append((i, j, target[tuple(x + y for x, y in zip(a, b))]))
    return tuple(plan)


def _pair_products(field, A: np.ndarray, B: np.ndarray, n: int, k1: int, k2: int) -> np.ndarray:
    """Products of every row of A with every row of B."""
    Dt = math.comb(n + k1 + k2 - 1, k1 + k2)
    a, b = len(A), len(B)
    plan = _product_plan(n, k1, k2)
    if field.m == 1:
        out = np.zeros((a, b, Dt), dtype=np.int64)
        for i, j, t in plan:
            out[:, :, t] += A[:, i][:, None] * B[:, j][None, :]
        out %= field.p
    else:
        tab = field.tables
        out = np.zeros((a, b, Dt), dtype=np.int32)
        for i, j, t in plan:
            out[:, :, t] = tab.add[out[:, :, t], tab.mul[A[:, i][:, None], B[:, j][None, :]]]
    return out.reshape(a * b, Dt)


def _row_products(field, A: np.ndarray, B: np.ndarray, n: int, k1: int, k2: int) -> np.ndarray:
    """Row-by-row products A[i] * B[i]."""
    Dt = math.comb(n + k1 + k2 - 1, k1 + k2)
    plan = _product_plan(n, k1, k2)
    tab = field.tables
    out = np.zeros((len(A), Dt), dtype=np.int32)
    for i, j, t in plan:
        out[:, t] = tab.add[out[:, t], tab.mul[A[:, i], B[:, j]]]
    return out


@lru_cache(maxsize=16)
def _class_array(p: int, m: int, n: int, k: int) -> np.ndarray:
    q = p**m
    D = math.comb(n + k - 1, k)
    total = (q**D - 1) // (q - 1)
    return coeffs_from_indices(np.arange(total, dtype=np.int64), q, D)


# -- sieve tasks ------------------------------------------------------------------

def _task_products(p, m, n, k1, k2, start, stop):
    field = make_field(p, m)
    A = _class_array(p, m, n, k1)[start:stop]
    B = _class_array(p, m, n, k2)
    return np.unique(indices_of(_pair_products(field, A, B, n, k1, k2), field.q))


def _task_norms(p, m, ell, n, k, start, stop):
    base = make_field(p, m)
    ext = make_field(p, m * ell)
    G = _class_array(p, m * ell, n, k)[start:stop].astype(np.int32)
    frob = ext.tables.frobenius(m)
    prod, conj, deg = G, G, k
    for _ in range(ell - 1):
        conj = frob[conj]
        prod = _row_products(ext, prod, conj, n, deg, k)
        deg += k
    restricted = ext.tables.restriction(m)[prod]
    if np.any(restricted < 0):
        raise AssertionError("a norm has coefficients outside the base field")
    return np.unique(indices_of(restricted, base.q))


def _task_powers(p, m, n, d):
    field = make_field(p, m)
    L = _class_array(p, m, n, 1).astype(np.int32)
    prod = L
    for e in range(1, d):
        prod = _row_products(field, prod, L, n, e, 1)
    return np.unique(indices_of(prod, field.q))


_TASKS = {"products": _task_products, "norms": _task_norms, "powers": _task_powers}


def _run_task(task):
    kind, args = task
    return _TASKS[kind](*args)


def _chunks(rows: int, per_row: int):
    step = max(1, CHUNK_ROWS // max(1, per_row))
    for start in range(0, rows, step):
        yield start, min(rows, start + step)


def _sieve_plan(d: int, q: int, n: int = 3):
    p, m = prime_power(q)
    reducible, norms = [], []
    for k in range(1, d // 2 + 1):
        rows = class_total(k, q, n)
        per = class_total(d - k, q, n)
        for s, e in _chunks(rows, per):
            reducible.append(("products", (p, m, n, k, d - k, s, e)))
    for ell in prime_divisors(d):
        if q**ell > 1024:
            raise CensusError(f"extension F_{q}^{ell} too large for the norm sieve")
        rows = class_total(d // ell, q**ell, n)
        norms.append((ell, [("norms", (p, m, ell, n, d // ell, s, e)) for s, e in _chunks(rows, ell)]))
    return reducible, norms


def _map(tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_task, tasks))


@dataclass(frozen=True)
class _Labels:
    labels: np.ndarray  # int8 per class index: 0 absolute, 1 relative, 2 reducible
    split: np.ndarray  # int8 splitting degree for relative classes, 0 otherwise
    line_powers: int


@lru_cache(maxsize=4)
def _census_labels_cached(d: int, q: int) -> _Labels:
    return _compute_labels(d, q, 1)


def _compute_labels(d: int, q: int, workers: int) -> _Labels:
    total = _check_feasible(d, q)
    p, m = prime_power(q)
    labels = np.zeros(total, dtype=np.int8)
    split = np.zeros(total, dtype=np.int8)
    if d == 1:
        return _Labels(labels, split, total)
    reducible_tasks, norm_plans = _sieve_plan(d, q)
    all_tasks = reducible_tasks + [t for _, ts in norm_plans for t in ts] + [("powers", (p, m, 3, d))]
    results = _map(all_tasks, workers)
    pos = 0
    for res in results[: len(reducible_tasks)]:
        labels[res] = 2
    pos = len(reducible_tasks)
    for ell, ts in norm_plans:
        for res in results[pos: pos + len(ts)]:
            fresh = res[labels[res] == 0]
            labels[fresh] = 1
            split[fresh] = ell
        pos += len(ts)
    powers = results[-1]
    if not np.all(labels[powers] == 2):
        raise AssertionError("a d-fold line escaped the reducible sieve")
    return _Labels(labels, split, len(powers))


def census_labels(d: int, q: int, workers: int = 1) -> _Labels:
    if workers <= 1:
        return _census_labels_cached(d, q)
    return _compute_labels(d, q, workers)


# -- reports -------------------------------------------------------------------------

def wilson_interval(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = k / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    lo = 0.0 if k == 0 else max(0.0, centre - half)
    hi = 1.0 if k == n else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class CensusReport:
    d: int
    q: int
    mode: str  # "EXHAUSTIVE" or "SAMPLED"
    total: int
    counts: dict  # kind name -> count (sample counts in SAMPLED mode)
    line_powers: int
    splitting_degrees: dict
    sample_size: int | None = None
    seed: int | None = None
    intervals: dict = field(default_factory=dict)

    @property
    def fq_reducible(self) -> int:
        return self.counts[FQ_REDUCIBLE.value]

    @property
    def relatively_irreducible(self) -> int:
        return self.counts[RELATIVELY_IRREDUCIBLE.value]

    @property
    def absolutely_irreducible(self) -> int:
        return self.counts[ABSOLUTELY_IRREDUCIBLE.value]

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.fq_reducible, self.relatively_irreducible, self.absolutely_irreducible)

    def fractions(self) -> dict:
        n = self.sample_size if self.mode == "SAMPLED" else self.total
        return {k: Fraction(v, n) for k, v in self.counts.items()}

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "formula_id": "plane_curve_census",
            "inputs": {"d": self.d, "q": self.q},
            "mode": self.mode,
            "total": {"value": self.total, "formula_id": "plane_curve_classes"},
            "counts": {k: {"value": v, "formula_id": "plane_curve_census"} for k, v in self.counts.items()},
            "line_powers": {"value": self.line_powers, "formula_id": "plane_curve_census"},
            "splitting_degrees": {str(k): v for k, v in sorted(self.splitting_degrees.items())},
        }
        if self.mode == "SAMPLED":
            out["sample_size"] = self.sample_size
            out["seed"] = self.seed
            out["fractions"] = {k: str(v) for k, v in self.fractions().items()}
            out["wilson95"] = {k: [round(a, 12), round(b, 12)] for k, (a, b) in self.intervals.items()}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def enumerate_plane_curves(d: int, q: int, start: int = 0, stop: int | None = None):
    """Canonical ternary forms of degree d, each projective class once, in index order.

    ``start``/``stop`` select a contiguous index range for parallel workers.
    """
    total = _check_feasible(d, q)
    field = make_field(*prime_power(q))
    stop = total if stop is None else min(stop, total)
    D = math.comb(d + 2, 2)
    for lo in range(start, stop, 4096):
        block = coeffs_from_indices(np.arange(lo, min(stop, lo + 4096)), q, D)
        for row in block:
            yield HomogeneousForm(field, 3, d, row)


def classify_census(d: int, q: int, workers: int = 1) -> CensusReport:
    """Exact three-way class counts for all plane curves of degree d over F_q."""
    lab = census_labels(d, q, workers)
    binc = np.bincount(lab.labels, minlength=3)
    counts = {
        FQ_REDUCIBLE.value: int(binc[2]),
        RELATIVELY_IRREDUCIBLE.value: int(binc[1]),
        ABSOLUTELY_IRREDUCIBLE.value: int(binc[0]),
    }
    sp = np.bincount(lab.split, minlength=1)
    split = {int(ell): int(c) for ell, c in enumerate(sp) if ell and c}
    total = len(lab.labels)
    assert sum(counts.values()) == total == plane_curve_space_count(d, q)
    return CensusReport(d, q, "EXHAUSTIVE", total, counts, lab.line_powers, split)


def classify_by_trial_division(d: int, q: int, indices) -> dict:
    """Per-form classification of selected class indices (the census oracle)."""
    field = make_field(*prime_power(q))
    out = {}
    for i in indices:
        f = form_from_index(field, 3, d, int(i))
        out[int(i)] = classify(f)
    return out


def sample_index(seed: int, i: int, total: int) -> int:
    """Counter-based uniform class index for draw ``i`` under ``seed``."""
    h = hashlib.blake2b(f"{seed}:{i}".encode(), digest_size=32).digest()
    return int.from_bytes(h, "big") % total


def sample_census(d: int, q: int, N: int, seed: int) -> CensusReport:
    """Estimate class fractions from N uniform draws, classified form by form."""
    if N < 1000:
        raise CensusError(f"sample size must be >= 1000, got {N}")
    try:
        p, m = prime_power(q)
    except FieldError as exc:
        raise CensusError(str(exc)) from None
    field = make_field(p, m)
    total = class_total(d, q)
    counts = Counter()
    split = Counter()
    powers = 0
    cache: dict = {}
    for i in range(N):
        idx = sample_index(seed, i, total)
        if idx not in cache:
            f = form_from_index(field, 3, d, idx)
            cache[idx] = (classify(f), d >= 2 and is_power_of_line(f) is not None)
        c, is_pow = cache[idx]
        counts[c.kind.value] += 1
        if c.splitting_degree:
            split[c.splitting_degree] += 1
        powers += is_pow
    full = {k.value: counts.get(k.value, 0) for k in KINDS}
    intervals = {k: wilson_interval(v, N) for k, v in full.items()}
    return CensusReport(d, q, "SAMPLED", total, full, powers, dict(split), N, seed, intervals)


# -- point statistics ------------------------------------------------------------------

@dataclass(frozen=True)
class PointStats:
    d: int
    q: int
    filter: str | None
    histogram: dict  # point count -> number of curves
    total: int
    mean: Fraction
    max_deviation: int

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "formula_id": "point_statistics",
            "inputs": {"d": self.d, "q": self.q, "filter": self.filter},
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "total": self.total,
            "mean": str(self.mean),
            "max_deviation": self.max_deviation,
        }

    def to_csv(self) -> str:
        rows = ["value,count"] + [f"{k},{v}" for k, v in sorted(self.histogram.items())]
        return "\n".join(rows) + "\n"


def _monomial_values(field, d: int) -> np.ndarray:
    """Values of each degree-d monomial at each canonical point of P^2(F_q)."""
    from .forms import projective_points

    pts = projective_points(field, 3)
    tab = field.tables
    mons = monomials(3, d)
    M = np.ones((len(pts), len(mons)), dtype=np.int64)
    for t, e in enumerate(mons):
        col = np.ones(len(pts), dtype=np.int64)
        for i, k in enumerate(e):
            for _ in range(k):
                col = tab.mul[col, pts[:, i]]
        M[:, t] = col
    return M


def point_counts_of(C: np.ndarray, field, d: int) -> np.ndarray:
    """Number of projective zeros in P^2(F_q) of each coefficient row."""
    M = _monomial_values(field, d)
    if field.m == 1:
        vals = (C.astype(np.int64) @ M.T) % field.p
    else:
        tab = field.tables
        vals = np.zeros((len(C), len(M)), dtype=np.int32)
        for t in range(C.shape[1]):
            vals = tab.add[vals, tab.mul[C[:, t][:, None], M[:, t][None, :]]]
    return np.count_nonzero(vals == 0, axis=1)


def point_statistics(d: int, q: int, filter=None, workers: int = 1) -> PointStats:
    """Exact histogram of #C(F_q) over all census classes in the filter class."""
    if isinstance(filter, str):
        filter = IrreducibilityKind(filter)
    elif filter is not None and not isinstance(filter, IrreducibilityKind):
        filter = filter.kind
    lab = census_labels(d, q, workers)
    field = make_field(*prime_power(q))
    D = math.comb(d + 2, 2)
    hist: Counter = Counter()
    want = None if filter is None else _LABEL[filter]
    total = len(lab.labels)
    for lo in range(0, total, CHUNK_ROWS):
        idx = np.arange(lo, min(total, lo + CHUNK_ROWS), dtype=np.int64)
        if want is not None:
            idx = idx[lab.labels[idx] == want]
        if not len(idx):
            continue
        counts = point_counts_of(coeffs_from_indices(idx, q, D), field, d)
        vals, freq = np.unique(counts, return_counts=True)
        for v, c in zip(vals, freq):
            hist[int(v)] += int(c)
    n = sum(hist.values())
    mean = Fraction(sum(k * v for k, v in hist.items()), n) if n else Fraction(0)
    maxdev = max((abs(k - (q + 1)) for k in hist), default=0)
    return PointStats(d, q, None if filter is None else filter.value, dict(hist), n, mean, maxdev)


# -- planar curves in P^3 -----------------------------------------------------------------

def planes_of(field, r: int):
    """Every 2-plane of P^r(F_q) as a reduced echelon 3 x (r+1) matrix."""
    import itertools

    q = field.q
    n = r + 1
    for piv in itertools.combinations(range(n), 3):
        free = [[c for c in range(piv[i] + 1, n) if c not in piv] for i in range(3)]
        sizes = [len(f) for f in free]
        for vals in itertools.product(range(q), repeat=sum(sizes)):
            rows, pos = [], 0
            for i in range(3):
                row = [0] * n
                row[piv[i]] = 1
                for c in free[i]:
                    row[c] = vals[pos]
                    pos += 1
                rows.append(tuple(row))
            yield tuple(rows)


def planar_in_Pr_census(d: int, r: int, q: int) -> ExactCount:
    """Count planar degree-d cycles in P^3 by enumerating (plane, curve) pairs.

    A pair names a unique cycle unless the curve is a d-fold line, which lies
    in every plane through that line; those pairs are keyed by the line.
    """
    if r != 3:
        raise CensusError("the pair enumeration supports r = 3 only")
    field = make_field(*prime_power(q))
    nplanes = int(grassmannian_count(2, r, q))
    ncurves = class_total(d, q)
    if nplanes * ncurves > PAIR_CAP:
        raise CensusError(f"{nplanes * ncurves} pairs exceed the cap {PAIR_CAP}")
    planes = list(planes_of(field, r))
    assert len(planes) == nplanes
    # Which plane curves are d-fold lines, and which line of the plane they are.
    line_of_curve = {}
    for i, f in enumerate(enumerate_plane_curves(d, q)):
        line = f if d == 1 else is_power_of_line(f)
        if line is not None:
            line_of_curve[i] = line.coeffs
    plain = np.setdiff1d(np.arange(ncurves, dtype=np.int64),
                         np.fromiter(line_of_curve, dtype=np.int64, count=len(line_of_curve)))
    keys = (np.arange(nplanes, dtype=np.int64)[:, None] * ncurves + plain[None, :]).ravel()
    distinct_plain = len(np.unique(keys))
    lines = set()
    for E in planes:
        for lin in line_of_curve.values():
            basis = _linalg.kernel(field, [list(lin)], 3)
            pts = [_linalg.apply(field, u, E) for u in basis]
            lines.add(_linalg.rref(field, pts))
    return ExactCount(distinct_plain + len(lines), "planar_curves_pair_enumeration")


# -- bound verification ---------------------------------------------------------------------

@dataclass(frozen=True)
class BoundCheck:
    name: str
    status: str  # PASS, FAIL, VACUOUS, SKIPPED
    formula_id: str
    detail: dict

    def line(self) -> str:
        extras = ", ".join(f"{k}={v}" for k, v in self.detail.items())
        return f"{self.status:8s} {self.name}: {extras}"


@dataclass(frozen=True)
class BoundCheckReport:
    d: int
    r: int
    q: int
    checks: tuple

    @property
    def failed(self) -> bool:
        return any(c.status == "FAIL" for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "formula_id": "bound_checks",
            "inputs": {"d": self.d, "r": self.r, "q": self.q},
            "checks": [{"name": c.name, "status": c.status, "formula_id": c.formula_id,
                        "detail": c.detail} for c in self.checks],
            "failed": self.failed,
        }

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


def _log10_str(x) -> str:
    from mpmath import mp

    return mp.nstr(x, 6)


def chow_form_space_log10(d: int, r: int, q: int) -> float:
    """log10 of the number of projective classes of bidegree-(d,d) forms."""
    N = math.comb(r + d, d) ** 2
    return N * math.log10(q)


def verify_bounds(d: int, r: int, q: int, workers: int = 1) -> BoundCheckReport:
    """Compare exact census values with the applicable bounds at (d, r, q)."""
    if r < 3:
        raise CensusError(f"requires r >= 3, got r={r}")
    if d < 2:
        raise CensusError(f"requires d >= 2, got d={d}")
    _check_feasible(d, q)
    checks = []
    census = classify_census(d, q, workers)
    red = census.fq_reducible

    iv51 = plane_reducible_interval(d, q)
    ok = iv51.contains(red)
    checks.append(BoundCheck(
        "plane reducible count within interval", "PASS" if ok else "FAIL", iv51.formula_id,
        {"count": red, "lower": str(iv51.lower.coeff), "upper": str(iv51.upper.coeff),
         "lower_clamped": iv51.clamped}))

    a = planar_dim(d, r)
    closed = planar_curves_count(d, r, q)
    pairs = int(grassmannian_count(2, r, q)) * class_total(d, q)
    if r == 3 and pairs <= PAIR_CAP:
        enumerated = planar_in_Pr_census(d, r, q)
        agree = int(enumerated) == int(closed)
        checks.append(BoundCheck(
            "planar count: pair enumeration equals closed form", "PASS" if agree else "FAIL",
            "planar_curves_pair_enumeration", {"enumerated": int(enumerated), "closed_form": int(closed)}))
    inside = q**a <= closed <= 7 * q**a
    checks.append(BoundCheck(
        "planar count within [q^b, 7 q^b]", "PASS" if inside else "FAIL", "planar_count_bounds",
        {"count": int(closed), "lower": q**a, "upper": 7 * q**a}))

    if d < 4 * r - 8:
        for name in ("reducible count upper bound", "total count bounds", "reducibility probability",
                     "nonplanar fraction", "relative irreducibility bounds"):
            checks.append(BoundCheck(name, "SKIPPED", "dominant_planar_hypothesis",
                                     {"reason": f"requires d >= 4r-8 = {4 * r - 8}"}))
        return BoundCheckReport(d, r, q, tuple(checks))

    cb = count_bounds(d, r, q)
    red_planar = reducible_planar_count(d, r, q, red)
    ok = int(red_planar) <= cb.R_upper
    checks.append(BoundCheck(
        "reducible count upper bound (planar part)", "PASS" if ok else "FAIL", "reducible_count_upper",
        {"planar_reducible": int(red_planar), "upper": cb.R_upper}))
    ok = cb.C_lower <= int(closed)
    checks.append(BoundCheck(
        "total count lower bound below planar count", "PASS" if ok else "FAIL", "chow_points_lower",
        {"lower": cb.C_lower, "planar_count": int(closed)}))
    space = chow_form_space_log10(d, r, q)
    up = cb.C_upper.log10()
    checks.append(BoundCheck(
        "total count upper bound", "VACUOUS" if up >= space else "PASS", "chow_points_upper",
        {"log10_upper": _log10_str(up), "log10_form_space": f"{space:.6g}"}))

    pr = prob_reducible_interval(d, r, q)
    pu = pr.upper_full().log10()
    checks.append(BoundCheck(
        "reducibility probability", "VACUOUS" if pu >= 0 else "SKIPPED", pr.formula_id,
        {"log10_upper": _log10_str(pu),
         "reason": "probability over all curves needs the unknown total count"}))
    npf = nonplanar_fraction_bound(d, r, q)
    checks.append(BoundCheck(
        "nonplanar fraction", "VACUOUS" if npf.log10() >= 0 else "SKIPPED", npf.formula_id,
        {"log10_upper": _log10_str(npf.log10())}))

    ri = rel_irr_interval(d, r, q)
    # A relatively irreducible plane curve is never a d-fold line, so each
    # one spans a single plane and the lift to P^r is an exact multiple.
    rel = census.relatively_irreducible * int(grassmannian_count(2, r, q))
    for g in ri.regimes:
        u = g.count.upper_full()
        if u.log10() >= space:
            status = "VACUOUS"
        else:
            status = "PASS" if certainly_le(exact_value(rel, Rounding.UP), u) else "FAIL"
        checks.append(BoundCheck(
            f"relative irreducibility count upper bound (regime {g.regime})", status, g.count.formula_id,
            {"planar_relative_in_Pr": rel, "log10_upper": _log10_str(u.log10())}))
    return BoundCheckReport(d, r, q, tuple(checks))


def weil_check(d: int, q: int, workers: int = 1) -> BoundCheck:
    """Deviation of absolutely irreducible plane curves from q+1 against (d-1)(d-2)sqrt(q)."""
    stats = point_statistics(d, q, ABSOLUTELY_IRREDUCIBLE, workers)
    ok = weil_deviation_ok(stats.max_deviation, d, q)
    return BoundCheck(
        "absolutely irreducible point-count deviation", "PASS" if ok else "FAIL", "weil_deviation",
        {"d": d, "q": q, "max_deviation": stats.max_deviation, "curves": stats.total,
         "mean": str(stats.mean)})


# -- verification suites --------------------------------------------------------------------

PLANE_REDUCIBLE_CELLS = ((3, 2), (3, 3), (3, 5), (4, 2), (4, 3), (5, 2))
WEIL_CELLS = ((2, 2), (2, 3), (2, 5), (3, 3), (3, 5))
LEMMA_CELLS = ((2, 3, 2), (2, 3, 3), (3, 3, 2))


def _suite_lemma_counting(workers):
    checks = []
    for d, r, q in LEMMA_CELLS:
        enum_count = planar_in_Pr_census(d, r, q)
        closed = planar_curves_count(d, r, q)
        checks.append(BoundCheck(
            f"planar count (d={d}, r={r}, q={q}): enumeration equals closed form",
            "PASS" if int(enum_count) == int(closed) else "FAIL", "planar_curves_incidence",
            {"enumerated": int(enum_count), "closed_form": int(closed)}))
    bad = []
    for d in range(2, 11):
        for r in range(3, 9):
            for q in (2, 3, 4, 5, 7, 8, 9):
                a = planar_dim(d, r)
                if not q**a <= planar_curves_count(d, r, q) <= 7 * q**a:
                    bad.append((d, r, q))
    checks.append(BoundCheck(
        "planar count within [q^b, 7 q^b] for d <= 10, r <= 8", "FAIL" if bad else "PASS",
        "planar_count_bounds", {"violations": len(bad)}))
    return checks


def _suite_plane_reducible(workers):
    checks = []
    for d, q in PLANE_REDUCIBLE_CELLS:
        red = classify_census(d, q, workers).fq_reducible
        iv51 = plane_reducible_interval(d, q)
        checks.append(BoundCheck(
            f"plane reducible count (d={d}, q={q}) within interval",
            "PASS" if iv51.contains(red) else "FAIL", iv51.formula_id,
            {"count": red, "lower": str(iv51.lower.coeff), "upper": str(iv51.upper.coeff)}))
    return checks


def _suite_census(workers):
    from .qcount import smooth_conic_count

    checks = []
    for d, q in EXHAUSTIVE_GRID:
        rep = classify_census(d, q, workers)
        ok = sum(rep.as_tuple()) == int(plane_curve_space_count(d, q)) and rep.line_powers == q * q + q + 1
        checks.append(BoundCheck(f"census partition (d={d}, q={q})", "PASS" if ok else "FAIL",
                                 "plane_curve_census", {"counts": list(rep.as_tuple()), "total": rep.total}))
    for q in (2, 3, 5):
        got = classify_census(2, q, workers).absolutely_irreducible
        want = int(smooth_conic_count(q))
        checks.append(BoundCheck(f"absolutely irreducible conics over F_{q}", "PASS" if got == want else "FAIL",
                                 "smooth_conics", {"census": got, "formula": want}))
    return checks


def _suite_weil(workers, d=None, q=None):
    cells = [(d, q)] if d is not None and q is not None else list(WEIL_CELLS)
    return [weil_check(dd, qq, workers) for dd, qq in cells]


def _suite_codim(workers):
    from .bounds import reducible_codim

    n = 0
    for r in range(3, 11):
        for d in range(max(2, 4 * r - 8), 301):
            reducible_codim(d, r)
            n += 1
    return [BoundCheck("codimension closed form equals direct minimum", "PASS", "reducible_codimension",
                       {"cases": n})]


def _suite_g(workers):
    from .bounds import g_coeff

    n = 0
    for d in range(1, 41):
        for r in range(3, 13):
            g_coeff(d, r)
            n += 1
    return [BoundCheck("g identities agree and are integral", "PASS", "grassmannian_piece_dimension",
                       {"cases": n})]


def _suite_chow_support(workers):
    from .chow import line_chow_form, lines_of, support_points

    checks = []
    for q in (2, 3):
        field = make_field(q)
        bad = 0
        n = 0
        for L in lines_of(field, 3):
            for s in (1, 2):
                ext = make_field(q, s)
                n += 1
                if support_points(line_chow_form(L), s) != L.points(ext):
                    bad += 1
        checks.append(BoundCheck(f"line support recovery over F_{q}", "FAIL" if bad else "PASS",
                                 "chow_support", {"cases": n, "mismatches": bad}))
    return checks


SUITES = {
    "lemma-counting": _suite_lemma_counting,
    "plane-reducible": _suite_plane_reducible,
    "census": _suite_census,
    "weil": _suite_weil,
    "codim": _suite_codim,
    "g-identities": _suite_g,
    "chow-support": _suite_chow_support,
}


def run_suite(name: str, workers: int = 1, d: int | None = None, q: int | None = None) -> BoundCheckReport:
    """Run a named verification suite (or every suite for ``"all"``)."""
    if name == "all":
        checks = []
        for key in SUITES:
            checks.extend(SUITES[key](workers))
        return BoundCheckReport(0, 0, 0, tuple(checks))
    if name not in SUITES:
        raise CensusError(f"unknown suite {name!r}; choose from {', '.join(['all', *SUITES])}")
    if name == "weil":
        if (d is None) != (q is None):
            raise CensusError("the weil suite takes both --d and --q, or neither")
        if d is not None:
            _check_feasible(d, q)
        checks = _suite_weil(workers, d, q)
    else:
        checks = SUITES[name](workers)
    return BoundCheckReport(d or 0, 0, q or 0, tuple(checks))
