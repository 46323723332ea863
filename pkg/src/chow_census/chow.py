"""Chow forms of lines and line cycles in P^r.

A line through points x, y has the bidegree-(1,1) Chow form

    sum_{i<j} p_ij (A_i B_j - A_j B_i),    p_ij = x_i y_j - x_j y_i,

the determinant of ``[[A.x, A.y], [B.x, B.y]]``: it vanishes exactly when the
codimension-2 space cut out by the hyperplanes A and B meets the line. A
cycle ``sum a_i L_i`` has the product of the line forms (with multiplicity)
as its Chow form.

Chow forms are stored sparsely as polynomials in the 2(r+1) variables
``A_0..A_r, B_0..B_r`` with exponent tuples ``alpha + beta``. The canonical
representative has leading coefficient 1 in lex order on those tuples.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _linalg, _poly
from .forms import HomogeneousForm, evaluate_at_points, projective_points
from .gf import Field, FieldElement, FieldError, field_of_size, make_field

SUPPORT_SCAN_CAP = 10**7


class ChowError(ValueError):
    pass


def canonical_point(field: Field, point) -> tuple[int, ...]:
    lead = next((c for c in point if c), None)
    if lead is None:
        raise ChowError("the zero vector is not a projective point")
    inv = field.inv(lead)
    return tuple(field.mul(c, inv) for c in point)


# -- lines --------------------------------------------------------------------

class Line:
    """A line of P^r stored as the reduced row-echelon form of a 2 x (r+1) matrix."""

    __slots__ = ("field", "r", "rows")

    def __init__(self, field: Field, rows):
        rows = [[x.value if isinstance(x, FieldElement) else int(x) for x in row] for row in rows]
        if len(rows) != 2 or len({len(row) for row in rows}) != 1:
            raise ChowError("a line needs exactly two spanning points of equal length")
        red = _linalg.rref(field, rows)
        if len(red) != 2:
            raise ChowError("spanning points are dependent (rank < 2)")
        self.field = field
        self.r = len(rows[0]) - 1
        self.rows = red

    @classmethod
    def through(cls, field: Field, x, y) -> "Line":
        return cls(field, [x, y])

    def plucker(self) -> dict:
        f = self.field
        x, y = self.rows
        out = {}
        for i, j in itertools.combinations(range(self.r + 1), 2):
            out[(i, j)] = f.sub(f.mul(x[i], y[j]), f.mul(x[j], y[i]))
        return out

    def plucker_relations_hold(self) -> bool:
        f = self.field
        p = self.plucker()
        for i, j, k, l in itertools.combinations(range(self.r + 1), 4):
            v = f.add(f.sub(f.mul(p[i, j], p[k, l]), f.mul(p[i, k], p[j, l])), f.mul(p[i, l], p[j, k]))
            if v:
                return False
        return True

    def points(self, ext: Field | None = None) -> frozenset:
        """Canonical points of the line over ``ext`` (default: its own field)."""
        ext = ext or self.field
        table = ext.embedding_table(self.field.m) if ext is not self.field else None
        x, y = ([table[c] for c in row] if table else list(row) for row in self.rows)
        out = set()
        for a, b in [(1, t) for t in range(ext.q)] + [(0, 1)]:
            pt = [ext.add(ext.mul(a, u), ext.mul(b, v)) for u, v in zip(x, y)]
            out.add(canonical_point(ext, pt))
        return frozenset(out)

    def contains(self, point) -> bool:
        return _linalg.rank(self.field, list(self.rows) + [list(point)]) == 2

    def frobenius(self, s: int = 1) -> "Line":
        f = self.field
        return Line(f, [[f.frob(c, s) for c in row] for row in self.rows])

    def _key(self):
        return (self.field.p, self.field.m, self.rows)

    def __eq__(self, other):
        return isinstance(other, Line) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        return self.rows < other.rows

    def __repr__(self):
        return f"Line({self.field}, {self.rows})"


def lines_of(field: Field, r: int):
    """Every line of P^r(F_q) once, as echelon forms ordered by pivot columns."""
    q = field.q
    n = r + 1
    for i, j in itertools.combinations(range(n), 2):
        free1 = [c for c in range(i + 1, n) if c != j]
        free2 = list(range(j + 1, n))
        for vals1 in itertools.product(range(q), repeat=len(free1)):
            for vals2 in itertools.product(range(q), repeat=len(free2)):
                row1 = [0] * n
                row2 = [0] * n
                row1[i] = 1
                row2[j] = 1
                for c, v in zip(free1, vals1):
                    row1[c] = v
                for c, v in zip(free2, vals2):
                    row2[c] = v
                yield Line(field, [row1, row2])


@dataclass(frozen=True)
class LineCycle:
    """A formal sum of distinct lines with positive multiplicities."""

    components: tuple  # ((Line, multiplicity), ...) sorted by line

    def __post_init__(self):
        comps = tuple(sorted(self.components, key=lambda c: c[0].rows))
        if not comps:
            raise ChowError("a cycle needs at least one component")
        if any(m < 1 for _, m in comps):
            raise ChowError("multiplicities must be positive")
        lines = [L for L, _ in comps]
        if len(set(lines)) != len(lines):
            raise ChowError("cycle components must be distinct lines")
        if len({(L.field.p, L.field.m, L.r) for L in lines}) != 1:
            raise ChowError("cycle components live in different spaces")
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, *items) -> "LineCycle":
        """``LineCycle.of(L1, L2, (L3, 2))``: bare lines get multiplicity 1."""
        counts: dict = {}
        for it in items:
            L, m = it if isinstance(it, tuple) else (it, 1)
            counts[L] = counts.get(L, 0) + m
        return cls(tuple(counts.items()))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.components)

    def support(self, ext: Field | None = None) -> frozenset:
        out: set = set()
        for L, _ in self.components:
            out |= L.points(ext)
        return frozenset(out)


# -- Chow forms --------------------------------------------------------------------

class ChowForm:
    """A bihomogeneous bidegree-(d,d) form in A_0..A_r, B_0..B_r."""

    __slots__ = ("field", "r", "d", "terms", "_hash")

    def __init__(self, field: Field, r: int, d: int, terms: dict):
        terms = {tuple(k): int(v) for k, v in terms.items() if v}
        if not terms:
            raise ChowError("the zero polynomial is not a Chow form")
        n = r + 1
        for key, v in terms.items():
            if len(key) != 2 * n:
                raise ChowError(f"exponent tuple {key} has wrong length for r={r}")
            if sum(key[:n]) != d or sum(key[n:]) != d:
                raise ChowError(f"monomial {key} is not of bidegree ({d},{d})")
            if not 0 <= v < field.q:
                raise ChowError(f"coefficient {v} out of range for {field}")
        self.field = field
        self.r = r
        self.d = d
        self.terms = terms
        self._hash = None

    @property
    def leading_coefficient(self) -> int:
        return self.terms[max(self.terms)]

    def scaled(self, c: int) -> "ChowForm":
        if not c:
            raise ChowError("scaling by zero")
        return ChowForm(self.field, self.r, self.d, _poly.scale(self.field, self.terms, c))

    def canonical(self) -> "ChowForm":
        lc = self.leading_coefficient
        return self if lc == 1 else self.scaled(self.field.inv(lc))

    def __mul__(self, other: "ChowForm") -> "ChowForm":
        if other.field is not self.field or other.r != self.r:
            raise ChowError("multiplying Chow forms over different spaces")
        return ChowForm(self.field, self.r, self.d + other.d,
                        _poly.mul(self.field, self.terms, other.terms))

    def __pow__(self, k: int) -> "ChowForm":
        if k < 1:
            raise ChowError("exponent must be positive")
        terms = _poly.power(self.field, self.terms, k, 2 * (self.r + 1))
        return ChowForm(self.field, self.r, self.d * k, terms)

    def map_coeffs(self, field: Field, fn) -> "ChowForm":
        return ChowForm(field, self.r, self.d, _poly.map_coeffs(self.terms, fn))

    def embed(self, ext: Field) -> "ChowForm":
        if ext is self.field:
            return self
        if ext.p != self.field.p or ext.m % self.field.m:
            raise FieldError(f"{self.field} does not embed in {ext}")
        table = ext.embedding_table(self.field.m)
        return self.map_coeffs(ext, table.__getitem__)

    def restrict(self, sub: Field) -> "ChowForm":
        if sub is self.field:
            return self
        rmap = self.field.restriction_map(sub.m)
        try:
            return ChowForm(sub, self.r, self.d, {k: rmap[v] for k, v in self.terms.items()})
        except KeyError:
            raise FieldError(f"coefficients do not lie in {sub}") from None

    def evaluate(self, A, B) -> int:
        f = self.field
        vals = list(A) + list(B)
        acc = 0
        for key, c in self.terms.items():
            t = c
            for x, e in zip(vals, key):
                if e:
                    t = f.mul(t, f.pow(x, e))
            acc = f.add(acc, t)
        return acc

    def permuted(self, perm) -> "ChowForm":
        """Relabel variables: A_i -> A_perm[i], B_i -> B_perm[i]."""
        n = self.r + 1
        out = {}
        for key, c in self.terms.items():
            a, b = key[:n], key[n:]
            na, nb = [0] * n, [0] * n
            for i in range(n):
                na[perm[i]] = a[i]
                nb[perm[i]] = b[i]
            out[tuple(na) + tuple(nb)] = c
        return ChowForm(self.field, self.r, self.d, out)

    def _key(self):
        return (self.field.p, self.field.m, self.r, self.d, tuple(sorted(self.terms.items())))

    def __eq__(self, other):
        return isinstance(other, ChowForm) and self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return f"ChowForm({self.field}, r={self.r}, d={self.d}, {len(self.terms)} terms)"

    def __str__(self):
        n = self.r + 1
        parts = []
        for key in sorted(self.terms, reverse=True):
            c = self.terms[key]
            mono = "*".join(
                (f"{v}{i}" if e == 1 else f"{v}{i}^{e}")
                for v, block in (("A", key[:n]), ("B", key[n:]))
                for i, e in enumerate(block) if e
            )
            coef = repr(FieldElement(self.field, c))
            parts.append(mono if c == 1 else f"{coef}*{mono}")
        return " + ".join(parts)

    def to_text(self) -> str:
        n = self.r + 1
        items = []
        for key in sorted(self.terms, reverse=True):
            a, b = key[:n], key[n:]
            coords = self.field.coords(self.terms[key])
            items.append(f"(({','.join(map(str, a))}),({','.join(map(str, b))}),({','.join(map(str, coords))}))")
        return f"{self.r} {self.d} {self.field.q} : " + " ".join(items)

    @classmethod
    def from_text(cls, text: str) -> "ChowForm":
        head, sep, body = text.partition(":")
        if not sep:
            raise ChowError("Chow form text must look like 'r d q : ((a),(b),(c)) ...'")
        try:
            r, d, q = (int(x) for x in head.split())
        except ValueError:
            raise ChowError(f"bad header {head!r}") from None
        field = field_of_size(q)
        terms = {}
        pattern = r"\(\s*\(([^)]*)\)\s*,\s*\(([^)]*)\)\s*,\s*\(([^)]*)\)\s*\)"
        for a, b, c in re.findall(pattern, body):
            alpha = tuple(int(x) for x in a.split(","))
            beta = tuple(int(x) for x in b.split(","))
            coeff = field.from_coords(tuple(int(x) for x in c.split(",")))
            terms[alpha + beta] = coeff
        return cls(field, r, d, terms)


def line_chow_form(L: Line) -> ChowForm:
    f = L.field
    n = L.r + 1
    terms: dict = {}

    def unit(i, j):
        key = [0] * (2 * n)
        key[i] = 1
        key[n + j] = 1
        return tuple(key)

    for (i, j), p in L.plucker().items():
        if p:
            terms = _poly.add(f, terms, {unit(i, j): p, unit(j, i): f.neg(p)})
    return ChowForm(f, L.r, 1, terms).canonical()


def cycle_chow_form(C: LineCycle) -> ChowForm:
    out = None
    for L, m in C.components:
        term = line_chow_form(L) ** m
        out = term if out is None else out * term
    return out.canonical()


# -- support recovery -----------------------------------------------------------

@lru_cache(maxsize=None)
def _substituted_power(field: Field, r: int, alpha: tuple) -> dict:
    """``A^alpha`` after A_0 -> -sum_{i>=1} A_i X_i, A_j -> A_j X_0.

    Result variables: (A_1..A_r, X_0..X_r).
    """
    nv = r + r + 1

    def var(k):
        e = [0] * nv
        e[k] = 1
        return e

    a0 = {}
    for i in range(1, r + 1):
        e = var(i - 1)
        e[r + i] += 1
        a0[tuple(e)] = field.neg(1)
    out = _poly.power(field, a0, alpha[0], nv)
    for j in range(1, r + 1):
        if alpha[j]:
            e = var(j - 1)
            e[r] += 1
            out = _poly.mul(field, out, _poly.power(field, {tuple(e): 1}, alpha[j], nv))
    return out


def support_equations(F: ChowForm) -> list[HomogeneousForm]:
    """The forms c_{gamma,delta}(X) of degree 2d whose common zeros (with X_0 != 0)
    are the support of F.

    Substitute the hyperplanes through X into F, expand, and collect the
    coefficient of each monomial A^gamma B^delta in the free variables
    A_1..A_r, B_1..B_r. Each c is linear in the coefficients of F.
    """
    f, r, d = F.field, F.r, F.d
    n = r + 1
    collected: dict = {}
    for key, c in F.terms.items():
        pa = _substituted_power(f, r, key[:n])
        pb = _substituted_power(f, r, key[n:])
        for ea, ca in pa.items():
            for eb, cb in pb.items():
                gamma, xa = ea[:r], ea[r:]
                delta, xb = eb[:r], eb[r:]
                x = tuple(u + v for u, v in zip(xa, xb))
                slot = collected.setdefault((gamma, delta), {})
                v = f.add(slot.get(x, 0), f.mul(c, f.mul(ca, cb)))
                if v:
                    slot[x] = v
                else:
                    slot.pop(x, None)
    out = []
    for gd in sorted(collected):
        poly = collected[gd]
        if poly:
            out.append(HomogeneousForm.from_dict(f, n, 2 * d, poly))
    return out


def _chart_zeros(F: ChowForm, points: np.ndarray, ext: Field) -> np.ndarray:
    ok = np.ones(points.shape[0], dtype=bool)
    seen = set()
    for c in support_equations(F):
        c = c.canonical()
        if c in seen:
            continue
        seen.add(c)
        ok &= evaluate_at_points(c, points, ext) == 0
        if not ok.any():
            break
    return ok


def support_points(F: ChowForm, s: int = 1) -> frozenset:
    """Points of P^r(F_{q^s}) in the support of F.

    The substitution only parametrizes hyperplanes through x when x_0 != 0,
    so the scan is repeated in each chart x_i != 0 (swap coordinates 0 and i)
    and the accepted points are united; points seen in several charts must
    get the same verdict in each.
    """
    base = F.field
    ext = make_field(base.p, base.m * s)
    n = F.r + 1
    if F.r > 4:
        raise ChowError(f"support scan supports r <= 4, got r={F.r}")
    npts = (ext.q**n - 1) // (ext.q - 1)
    if npts > SUPPORT_SCAN_CAP or ext.q > 1024:
        raise ChowError(f"support scan of {npts} points over {ext} exceeds the cap")
    G = F.embed(ext)
    pts = projective_points(ext, n)
    verdict: dict = {}
    for i in range(n):
        perm = list(range(n))
        perm[0], perm[i] = perm[i], perm[0]
        chart = pts[pts[:, i] != 0]
        swapped = chart[:, perm]
        zeros = _chart_zeros(G.permuted(perm), swapped, ext)
        for row, z in zip(chart, zeros):
            key = canonical_point(ext, [int(v) for v in row])
            prev = verdict.setdefault(key, bool(z))
            if prev != bool(z):
                raise AssertionError(f"charts disagree on point {key}")
    return frozenset(k for k, v in verdict.items() if v)


# -- fields of definition and Galois action ----------------------------------------

def field_of_definition(F: ChowForm) -> Field:
    """Smallest subfield containing all ratios of nonzero coefficients."""
    G = F.canonical()
    f = G.field
    for s in range(1, f.m + 1):
        if f.m % s == 0 and all(f.in_subfield(c, s) for c in G.terms.values()):
            return make_field(f.p, s)
    raise AssertionError("unreachable: the field itself always works")


def galois_image(F: ChowForm, power: int = 1) -> ChowForm:
    """Apply x -> x^(p^power) to every coefficient."""
    f = F.field
    return F.map_coeffs(f, lambda c: f.frob(c, power))


def norm_map(F: ChowForm, base: Field) -> ChowForm:
    """Product of the Galois conjugates of F over ``base``, as a form over ``base``."""
    big = F.field
    if big.p != base.p or big.m % base.m:
        raise FieldError(f"{base} is not a subfield of {big}")
    k = big.m // base.m
    prod = F
    conj = F
    for _ in range(k - 1):
        conj = galois_image(conj, base.m)
        prod = prod * conj
    return prod.canonical().restrict(base)


def factor_line_cycle(F: ChowForm) -> LineCycle:
    """Recover the line cycle of F by trial division through every line of P^r."""
    G = F.canonical()
    f = G.field
    rem = dict(G.terms)
    deg = G.d
    found: dict = {}
    for L in lines_of(f, G.r):
        if deg == 0:
            break
        lf = line_chow_form(L).terms
        quot = _poly.divide_exact(f, rem, lf)
        while quot is not None:
            found[L] = found.get(L, 0) + 1
            rem, deg = quot, deg - 1
            quot = _poly.divide_exact(f, rem, lf) if deg else None
    if deg != 0 or rem != {(0,) * (2 * (G.r + 1)): 1}:
        raise ChowError("form is not a product of line Chow forms over its field")
    return LineCycle(tuple(found.items()))
