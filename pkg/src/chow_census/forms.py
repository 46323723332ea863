"""Homogeneous polynomials (forms) over finite fields.

A form of degree ``d`` in ``n`` variables stores one coefficient per monomial,
monomials listed in graded-lex order (``X0^d, X0^(d-1) X1, ...``). Forms are
projective objects: the canonical representative has its first nonzero
coefficient equal to 1, which for this order is the leading coefficient, so
products and Galois images of canonical forms are canonical again.

Factorization is exhaustive trial division by canonical candidates of degree
``k <= d/2``; it is slow but obviously correct, and it serves as the oracle
for the vectorized census in :mod:`chow_census.census`.
"""

from __future__ import annotations

import enum
import itertools
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from . import _poly
from .gf import Field, FieldElement, FieldError, field_of_size, make_field, prime_power

MAX_FACTOR_DEGREE = 6


class FormError(ValueError):
    pass


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent tuples of degree ``d`` in ``n`` variables, graded-lex order."""
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in monomials(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict:
    return {m: i for i, m in enumerate(monomials(n, d))}


def num_monomials(n: int, d: int) -> int:
    return comb(n + d - 1, d)


class HomogeneousForm:
    """A nonzero homogeneous polynomial with a dense coefficient table."""

    __slots__ = ("field", "n", "d", "coeffs", "_hash")

    def __init__(self, field: Field, n: int, d: int, coeffs):
        coeffs = tuple(int(c) for c in coeffs)
        if n < 1 or d < 0:
            raise FormError(f"invalid shape n={n}, d={d}")
        if len(coeffs) != num_monomials(n, d):
            raise FormError(f"expected {num_monomials(n, d)} coefficients, got {len(coeffs)}")
        if not any(coeffs):
            raise FormError("the zero polynomial is not a form")
        if any(not 0 <= c < field.q for c in coeffs):
            raise FormError(f"coefficient encodings must lie in [0, {field.q})")
        self.field = field
        self.n = n
        self.d = d
        self.coeffs = coeffs
        self._hash = None

    # -- construction -------------------------------------------------------

    @classmethod
    def from_dict(cls, field: Field, n: int, d: int, terms: dict) -> "HomogeneousForm":
        index = monomial_index(n, d)
        coeffs = [0] * len(index)
        for e, c in terms.items():
            if isinstance(c, FieldElement):
                c = c.value
            if e not in index:
                raise FormError(f"monomial {e} is not of degree {d} in {n} variables")
            coeffs[index[e]] = c
        return cls(field, n, d, coeffs)

    @classmethod
    def linear(cls, field: Field, coeffs) -> "HomogeneousForm":
        coeffs = [c.value if isinstance(c, FieldElement) else c for c in coeffs]
        return cls(field, len(coeffs), 1, coeffs)

    def to_dict(self) -> dict:
        return {m: c for m, c in zip(monomials(self.n, self.d), self.coeffs) if c}

    # -- projective normalization -------------------------------------------

    @property
    def leading_coefficient(self) -> int:
        return next(c for c in self.coeffs if c)

    def scaled(self, c: int) -> "HomogeneousForm":
        f = self.field
        return HomogeneousForm(f, self.n, self.d, [f.mul(x, c) for x in self.coeffs])

    def canonical(self) -> "HomogeneousForm":
        lc = self.leading_coefficient
        if lc == 1:
            return self
        return self.scaled(self.field.inv(lc))

    @property
    def is_canonical(self) -> bool:
        return self.leading_coefficient == 1

    # -- field changes --------------------------------------------------------

    def embed(self, ext: Field) -> "HomogeneousForm":
        if ext is self.field:
            return self
        if ext.p != self.field.p or ext.m % self.field.m:
            raise FieldError(f"{self.field} does not embed in {ext}")
        table = ext.embedding_table(self.field.m)
        return HomogeneousForm(ext, self.n, self.d, [table[c] for c in self.coeffs])

    def restrict(self, sub: Field) -> "HomogeneousForm":
        if sub is self.field:
            return self
        rmap = self.field.restriction_map(sub.m)
        try:
            return HomogeneousForm(sub, self.n, self.d, [rmap[c] for c in self.coeffs])
        except KeyError:
            raise FieldError(f"coefficients do not lie in {sub}") from None

    def frobenius(self, s: int = 1) -> "HomogeneousForm":
        f = self.field
        return HomogeneousForm(f, self.n, self.d, [f.frob(c, s) for c in self.coeffs])

    # -- arithmetic -----------------------------------------------------------

    def __mul__(self, other: "HomogeneousForm") -> "HomogeneousForm":
        if not isinstance(other, HomogeneousForm):
            return NotImplemented
        if other.field is not self.field or other.n != self.n:
            raise FormError("multiplying forms over different fields or variable counts")
        prod = _poly.mul(self.field, self.to_dict(), other.to_dict())
        return HomogeneousForm.from_dict(self.field, self.n, self.d + other.d, prod)

    def __pow__(self, k: int) -> "HomogeneousForm":
        prod = _poly.power(self.field, self.to_dict(), k, self.n)
        return HomogeneousForm.from_dict(self.field, self.n, self.d * k, prod)

    def __call__(self, *point):
        return evaluate(self, point)

    # -- identity -------------------------------------------------------------

    def _key(self):
        return (self.field.p, self.field.m, self.n, self.d, self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, HomogeneousForm):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def sort_key(self):
        return (self.d, form_index(self))

    def __repr__(self):
        return f"HomogeneousForm({self.field}, {self})"

    def __str__(self):
        parts = []
        for m, c in zip(monomials(self.n, self.d), self.coeffs):
            if not c:
                continue
            mono = "*".join(
                f"X{i}" if e == 1 else f"X{i}^{e}" for i, e in enumerate(m) if e
            )
            coef = repr(FieldElement(self.field, c))
            if not mono:
                parts.append(coef)
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{coef}*{mono}")
        return " + ".join(parts)

    # -- text format ------------------------------------------------------------

    def to_text(self) -> str:
        coeffs = " ".join(
            "(" + ",".join(str(x) for x in self.field.coords(c)) + ")" for c in self.coeffs
        )
        return f"{self.d} {self.n} {self.field.q} : {coeffs}"

    @classmethod
    def from_text(cls, text: str) -> "HomogeneousForm":
        head, sep, body = text.partition(":")
        if not sep:
            raise FormError("form text must look like 'd n q : coeffs'")
        try:
            d, n, q = (int(x) for x in head.split())
        except ValueError:
            raise FormError(f"bad header {head!r}") from None
        field = field_of_size(q)
        coeffs = [field.from_coords(c) for c in _parse_coords(body, field)]
        return cls(field, n, d, coeffs)


def _parse_coords(body: str, field: Field):
    tokens = re.findall(r"\(([^)]*)\)|(-?\d+)", body)
    out = []
    for tup, bare in tokens:
        if tup:
            coords = tuple(int(x) for x in tup.split(",") if x.strip())
        else:
            coords = (int(bare),) + (0,) * (field.m - 1)
        if len(coords) != field.m:
            raise FormError(f"coefficient {coords} needs {field.m} coordinates")
        out.append(coords)
    return out


def form_from_text(text: str) -> HomogeneousForm:
    return HomogeneousForm.from_text(text)


# -- canonical enumeration ------------------------------------------------------

def count_classes(q: int, n: int, d: int) -> int:
    D = num_monomials(n, d)
    return (q**D - 1) // (q - 1)


def form_index(f: HomogeneousForm) -> int:
    """Position of ``f``'s canonical class in the canonical enumeration order.

    Canonical coefficient tuples are ordered lexicographically: all classes
    whose leading coefficient sits at position ``D-1`` come first, then those
    with leading position ``D-2``, and so on.
    """
    g = f.canonical()
    q = g.field.q
    D = len(g.coeffs)
    j = next(i for i, c in enumerate(g.coeffs) if c)
    tail = 0
    for c in g.coeffs[j + 1:]:
        tail = tail * q + c
    return (q ** (D - 1 - j) - 1) // (q - 1) + tail


def form_from_index(field: Field, n: int, d: int, index: int) -> HomogeneousForm:
    q = field.q
    D = num_monomials(n, d)
    if not 0 <= index < count_classes(q, n, d):
        raise FormError(f"class index {index} out of range")
    L = 0
    while (q ** (L + 1) - 1) // (q - 1) <= index:
        L += 1
    tail = index - (q**L - 1) // (q - 1)
    digits = []
    for _ in range(L):
        tail, r = divmod(tail, q)
        digits.append(r)
    coeffs = [0] * (D - 1 - L) + [1] + digits[::-1]
    return HomogeneousForm(field, n, d, coeffs)


def canonical_forms(field: Field, n: int, d: int):
    """Every projective class of degree-d forms once, in index order."""
    q = field.q
    D = num_monomials(n, d)
    for j in range(D - 1, -1, -1):
        for tail in itertools.product(range(q), repeat=D - 1 - j):
            yield HomogeneousForm(field, n, d, (0,) * j + (1,) + tail)


# -- evaluation ---------------------------------------------------------------

def evaluate(f: HomogeneousForm, point, ext: Field | None = None) -> FieldElement:
    """Value of ``f`` at ``point``; coefficients are embedded into ``ext``."""
    if len(point) != f.n:
        raise FormError(f"point has {len(point)} coordinates, form has {f.n} variables")
    if ext is None:
        fields = {x.field for x in point if isinstance(x, FieldElement)}
        if len(fields) > 1:
            raise FieldError("point coordinates lie in different fields")
        ext = fields.pop() if fields else f.field
    g = f.embed(ext)
    vals = []
    for x in point:
        if isinstance(x, FieldElement):
            if x.field is not ext:
                raise FieldError(f"point coordinate in {x.field}, expected {ext}")
            vals.append(x.value)
        else:
            vals.append(ext(x).value)
    acc = 0
    for m, c in zip(monomials(f.n, f.d), g.coeffs):
        if not c:
            continue
        t = c
        for x, e in zip(vals, m):
            if e:
                t = ext.mul(t, ext.pow(x, e))
        acc = ext.add(acc, t)
    return FieldElement(ext, acc)


def multiply(f: HomogeneousForm, g: HomogeneousForm) -> HomogeneousForm:
    """Product of two forms, canonicalized."""
    return (f * g).canonical()


# -- factorization ------------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    unit: FieldElement
    factors: tuple  # ((HomogeneousForm, multiplicity), ...)

    def expand(self) -> HomogeneousForm:
        prod = None
        for g, e in self.factors:
            term = g**e
            prod = term if prod is None else prod * term
        return prod.scaled(self.unit.value)

    @property
    def num_factors(self) -> int:
        return sum(e for _, e in self.factors)


def _check_factorable(f: HomogeneousForm, max_degree: int):
    if f.n not in (2, 3):
        raise FormError(f"factorization supports 2 or 3 variables, got {f.n}")
    if f.d > max_degree:
        raise FormError(f"factorization capped at degree {max_degree}, got {f.d}")


def _tail_candidates(field, rem: dict, k: int, lead: tuple, tail_mons: list, fast=True):
    """Coefficient tails worth trying after the leading monomial ``lead``.

    For a linear factor ``x_i + sum a_j x_j`` the point ``-a_j e_i + e_j`` lies on
    it, so ``-a_j`` must be a root of ``rem`` on the line through ``e_i, e_j``.
    """
    if k != 1 or not fast:
        return itertools.product(range(field.q), repeat=len(tail_mons))
    i = lead.index(1)
    choices = []
    for m in tail_mons:
        roots = _poly.line_roots(field, rem, i, m.index(1))
        choices.append(range(field.q) if roots is None else sorted(field.neg(t) for t in roots))
    return itertools.product(*choices)


def _normalize(field, g: dict) -> dict:
    inv = field.inv(g[max(g)])
    return {m: field.mul(c, inv) for m, c in g.items()}


_EDGES = ((0, 1), (0, 2), (1, 2))


def _ternary_candidates(field, rem: dict, k: int):
    """Canonical degree-k ternary forms that could divide ``rem``, or None.

    A divisor g restricts on each coordinate line to a divisor of ``rem``'s
    restriction, so only the interior coefficients of g are enumerated freely.
    Returns None when ``rem`` vanishes on a coordinate line.
    """
    divisors = []
    for i, j in _EDGES:
        edge = {(e[i], e[j]): c for e, c in rem.items() if e[3 - i - j] == 0}
        if not edge:
            return None
        divisors.append([h for h in (b.to_dict() for b in canonical_forms(field, 2, k))
                         if _poly.divide_exact(field, edge, h) is not None])
    interior = [m for m in monomials(3, k) if all(m)]
    units = range(1, field.q)
    seen: dict = {}
    for h01, h02, h12 in itertools.product(*divisors):
        for s02, s12 in itertools.product(units, units):
            # corners shared by two edges must agree, including being zero on both
            if not _corners_agree(field, (h01, h02, h12), (1, s02, s12), k):
                continue
            g: dict = {}
            for (i, j), h, s in zip(_EDGES, (h01, h02, h12), (1, s02, s12)):
                for (a, b), c in h.items():
                    e = [0, 0, 0]
                    e[i], e[j] = a, b
                    g[tuple(e)] = field.mul(c, s)
            for vals in itertools.product(range(field.q), repeat=len(interior)):
                cand = dict(g)
                cand.update((m, c) for m, c in zip(interior, vals) if c)
                cand = _normalize(field, cand)
                seen.setdefault(tuple(sorted(cand.items())), cand)
    return [seen[key] for key in sorted(seen)]


def _corners_agree(field, edges, scales, k: int) -> bool:
    (h01, h02, h12), (s01, s02, s12) = edges, scales
    pairs = (
        (h01.get((k, 0), 0), s01, h02.get((k, 0), 0), s02),
        (h01.get((0, k), 0), s01, h12.get((k, 0), 0), s12),
        (h02.get((0, k), 0), s02, h12.get((0, k), 0), s12),
    )
    return all(field.mul(a, sa) == field.mul(b, sb) for a, sa, b, sb in pairs)


def _divide_out(field, rem: dict, n: int, k: int, deg: int, found: list, stop_at_first=False,
                fast=True):
    """Trial-divide ``rem`` by canonical forms of degree k; return (rem, deg)."""
    cands = _ternary_candidates(field, rem, k) if fast and n == 3 and k >= 2 and 2 * k <= deg else None
    if cands is not None:
        for cand in cands:
            if 2 * k > deg:
                break
            quot = _poly.divide_exact(field, rem, cand)
            while quot is not None:
                found.append(cand)
                rem, deg = quot, deg - k
                if stop_at_first:
                    return rem, deg
                if 2 * k > deg:
                    break
                quot = _poly.divide_exact(field, rem, cand)
        return rem, deg
    mons = monomials(n, k)
    D = len(mons)
    for j in range(D - 1, -1, -1):
        if 2 * k > deg:
            break
        lead = mons[j]
        if any(a < b for a, b in zip(max(rem), lead)):
            continue
        tail_mons = mons[j + 1:]
        for tail in _tail_candidates(field, rem, k, lead, tail_mons, fast):
            cand = {lead: 1}
            for m, c in zip(tail_mons, tail):
                if c:
                    cand[m] = c
            quot = _poly.divide_exact(field, rem, cand)
            while quot is not None:
                found.append(cand)
                rem, deg = quot, deg - k
                if stop_at_first:
                    return rem, deg
                if 2 * k > deg:
                    break
                quot = _poly.divide_exact(field, rem, cand)
            if 2 * k > deg:
                break
            if any(a < b for a, b in zip(max(rem), lead)):
                break
    return rem, deg


def factor(f: HomogeneousForm, over: Field | None = None, max_degree: int = MAX_FACTOR_DEGREE) -> Factorization:
    """Complete factorization of ``f`` into irreducibles over ``over``."""
    _check_factorable(f, max_degree)
    over = over or f.field
    g = f.embed(over)
    unit = g.leading_coefficient
    rem = g.canonical().to_dict()
    deg = g.d
    found: list = []
    k = 1
    while 2 * k <= deg:
        rem, deg = _divide_out(over, rem, g.n, k, deg, found)
        k += 1
    if deg > 0:
        found.append(rem)
    counts = Counter(
        HomogeneousForm.from_dict(over, g.n, sum(next(iter(c))), c) for c in found
    )
    factors = tuple(sorted(counts.items(), key=lambda item: item[0].sort_key()))
    return Factorization(FieldElement(over, unit), factors)


def has_factor_of_degree(f: HomogeneousForm, k: int, over: Field | None = None) -> bool:
    """Does ``f`` have a factor of degree exactly ``k`` (``0 < k < d``) over ``over``?"""
    over = over or f.field
    g = f.embed(over).canonical()
    found: list = []
    _divide_out(over, g.to_dict(), g.n, k, g.d, found, stop_at_first=True)
    return bool(found)


def is_reducible(f: HomogeneousForm, over: Field | None = None) -> bool:
    over = over or f.field
    g = f.embed(over).canonical()
    rem, deg = g.to_dict(), g.d
    for k in range(1, g.d // 2 + 1):
        found: list = []
        _divide_out(over, rem, g.n, k, deg, found, stop_at_first=True)
        if found:
            return True
    return False


class IrreducibilityKind(enum.Enum):
    FQ_REDUCIBLE = "FQ_REDUCIBLE"
    RELATIVELY_IRREDUCIBLE = "RELATIVELY_IRREDUCIBLE"
    ABSOLUTELY_IRREDUCIBLE = "ABSOLUTELY_IRREDUCIBLE"


@dataclass(frozen=True)
class IrreducibilityClass:
    kind: IrreducibilityKind
    splitting_degree: int | None = None

    def __str__(self):
        if self.splitting_degree:
            return f"{self.kind.value}(splitting degree {self.splitting_degree})"
        return self.kind.value


def prime_divisors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def classify(f: HomogeneousForm, max_degree: int = MAX_FACTOR_DEGREE) -> IrreducibilityClass:
    """Three-way irreducibility class of ``f`` over its own field."""
    _check_factorable(f, max_degree)
    if f.d == 1:
        return IrreducibilityClass(IrreducibilityKind.ABSOLUTELY_IRREDUCIBLE)
    if is_reducible(f):
        return IrreducibilityClass(IrreducibilityKind.FQ_REDUCIBLE)
    base = f.field
    for ell in prime_divisors(f.d):
        ext = make_field(base.p, base.m * ell)
        # An F_q-irreducible form that splits over F_{q^ell} is the product of
        # one Galois orbit of ell conjugates, each of degree d/ell.
        if has_factor_of_degree(f, f.d // ell, ext):
            return IrreducibilityClass(IrreducibilityKind.RELATIVELY_IRREDUCIBLE, ell)
    return IrreducibilityClass(IrreducibilityKind.ABSOLUTELY_IRREDUCIBLE)


def is_power_of_line(f: HomogeneousForm) -> HomogeneousForm | None:
    """The canonical linear form ``l`` with ``f = c * l^d``, if there is one."""
    _check_factorable(f, MAX_FACTOR_DEGREE if f.d <= MAX_FACTOR_DEGREE else f.d)
    g = f.canonical()
    if g.d == 1:
        return g
    rem = g.to_dict()
    found: list = []
    _divide_out(g.field, rem, g.n, 1, g.d, found, stop_at_first=True)
    if not found:
        return None
    line = HomogeneousForm.from_dict(g.field, g.n, 1, found[0])
    return line if line**g.d == g else None


def norm(f: HomogeneousForm, base: Field) -> HomogeneousForm:
    """Product of the Galois conjugates of ``f`` over ``base``, as a form over ``base``."""
    big = f.field
    if big.p != base.p or big.m % base.m:
        raise FieldError(f"{base} is not a subfield of {big}")
    k = big.m // base.m
    prod = f
    conj = f
    for _ in range(k - 1):
        conj = conj.frobenius(base.m)
        prod = prod * conj
    return prod.canonical().restrict(base)


# -- points -----------------------------------------------------------------------

@lru_cache(maxsize=64)
def projective_points(field: Field, n: int) -> np.ndarray:
    """Canonical representatives of P^(n-1)(F_q): first nonzero coordinate 1."""
    q = field.q
    blocks = []
    for j in range(n):
        rest = n - 1 - j
        grid = np.indices((q,) * rest, dtype=np.int64).reshape(rest, q**rest).T
        block = np.zeros((grid.shape[0], n), dtype=np.int64)
        block[:, j] = 1
        block[:, j + 1:] = grid
        blocks.append(block)
    out = np.concatenate(blocks)
    out.setflags(write=False)
    return out


def evaluate_at_points(f: HomogeneousForm, points: np.ndarray, ext: Field) -> np.ndarray:
    """Vectorized values of ``f`` at each row of ``points`` (encodings in ``ext``)."""
    g = f.embed(ext)
    t = ext.tables
    npts = points.shape[0]
    pow_cache: dict = {}

    def powcol(i, e):
        key = (i, e)
        if key not in pow_cache:
            if e == 1:
                pow_cache[key] = points[:, i]
            else:
                pow_cache[key] = t.mul[powcol(i, e - 1), points[:, i]]
        return pow_cache[key]

    acc = np.zeros(npts, dtype=np.int64)
    for m, c in zip(monomials(g.n, g.d), g.coeffs):
        if not c:
            continue
        val = np.full(npts, c, dtype=np.int64)
        for i, e in enumerate(m):
            if e:
                val = t.mul[val, powcol(i, e)]
        acc = t.add[acc, val]
    return acc


POINT_SCAN_CAP = 10**7


def point_count(f: HomogeneousForm, s: int = 1) -> int:
    """Number of points of P^(n-1)(F_{q^s}) where ``f`` vanishes."""
    base = f.field
    ext = make_field(base.p, base.m * s)
    npts = (ext.q**f.n - 1) // (ext.q - 1)
    if npts > POINT_SCAN_CAP:
        raise FormError(f"scan of {npts} points exceeds the cap {POINT_SCAN_CAP}")
    if ext.q <= 1024:
        vals = evaluate_at_points(f, projective_points(ext, f.n), ext)
        return int(np.count_nonzero(vals == 0))
    count = 0
    for pt in projective_points(ext, f.n):
        if evaluate(f, [ext(int(x)) for x in pt], ext).value == 0:
            count += 1
    return count


def _field_from_q(q: int) -> Field:
    prime_power(q)
    return field_of_size(q)
