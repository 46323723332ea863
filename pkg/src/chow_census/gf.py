"""Arithmetic in finite fields GF(p^m).

Elements are encoded as integers ``0 <= v < q``: the base-p digits of ``v``
(least significant first) are the coordinates of the element in the power
basis ``1, t, ..., t^(m-1)`` where ``t`` is a root of the field modulus.
With this encoding ``0`` and ``1`` are the field's zero and one, and the
prime subfield is ``range(p)``.

:class:`Field` works on these raw integers; :class:`FieldElement` is the
value-semantics wrapper used at API boundaries.
"""

from __future__ import annotations

import itertools
from functools import cached_property, lru_cache

import numpy as np

MAX_EXTENSION_DEGREE = 24
MAX_FIELD_SIZE = 2**40
_LOG_TABLE_LIMIT = 2**16
_NUMPY_TABLE_LIMIT = 1024


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``q == p**m``, or raise FieldError."""
    if not isinstance(q, int) or q < 2:
        raise FieldError(f"{q!r} is not a prime power")
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, m


def _factor(n: int) -> list[int]:
    primes = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            primes.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        primes.append(n)
    return primes


# -- univariate polynomials over GF(p), coefficient lists low degree first ----

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return _ptrim(a[:df])


def _pmulmod(a, b, f, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _pmod([c % p for c in prod], f, p)


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        e >>= 1
        if e:
            base = _pmulmod(base, base, f, p)
    return result


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _ptrim([(x - y) % p for x, y in zip(a, b)])


def is_irreducible_univariate(f, p: int) -> bool:
    """Ben-Or test for a monic polynomial ``f`` (low degree first) over GF(p)."""
    f = _ptrim(list(f))
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    xp = x
    for _ in range(m // 2):
        xp = _ppowmod(xp, p, f, p)
        if len(_pgcd(f, _psub(xp, x, p), p)) > 1:
            return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m over GF(p).

    Coefficient tuples ``(c_0, ..., c_{m-1})`` are compared low degree first;
    the monic leading 1 is appended to the returned tuple.
    """
    for low in itertools.product(range(p), repeat=m):
        if m > 1 and low[0] == 0:
            continue
        f = list(low) + [1]
        if is_irreducible_univariate(f, p):
            return tuple(f)
    raise AssertionError("an irreducible polynomial always exists")


class Field:
    """The finite field GF(p^m) with a deterministic modulus.

    Use :func:`make_field` rather than calling the constructor directly; it
    caches instances so that equal parameters give the identical object.
    """

    def __init__(self, p: int, m: int = 1):
        if not isinstance(p, int) or not is_prime(p):
            raise FieldError(f"characteristic {p!r} is not prime")
        if not isinstance(m, int) or not 1 <= m <= MAX_EXTENSION_DEGREE:
            raise FieldError(f"extension degree {m!r} outside [1, {MAX_EXTENSION_DEGREE}]")
        if p**m > MAX_FIELD_SIZE:
            raise FieldError(f"field size {p}^{m} exceeds 2^40")
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = smallest_irreducible(p, m) if m > 1 else None
        self._exp = self._log = None
        self._addtab = None
        if 1 < self.q <= _LOG_TABLE_LIMIT and m > 1:
            self._build_log_tables()

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"

    def __reduce__(self):
        return make_field, (self.p, self.m)

    # -- encoding -------------------------------------------------------

    def coords(self, a: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.m):
            a, r = divmod(a, p)
            out.append(r)
        return tuple(out)

    def from_coords(self, coords) -> int:
        if len(coords) != self.m:
            raise FieldError(f"expected {self.m} coordinates, got {len(coords)}")
        v = 0
        for c in reversed(coords):
            v = v * self.p + (c % self.p)
        return v

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (tuple, list)):
            return FieldElement(self, self.from_coords(value))
        if isinstance(value, int):
            if self.m == 1:
                return FieldElement(self, value % self.p)
            if not 0 <= value < self.q:
                raise FieldError(f"encoding {value} out of range for {self}")
            return FieldElement(self, value)
        raise TypeError(f"cannot convert {value!r} to an element of {self}")

    def elements(self):
        return (FieldElement(self, v) for v in range(self.q))

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    @property
    def gen(self) -> "FieldElement":
        """The class of ``t`` (the modulus root); ``p`` maps to 0 in GF(p)."""
        return FieldElement(self, self.p % self.q if self.m > 1 else 1)

    # -- raw integer arithmetic -------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._addtab is not None:
            return self._addtab[a][b]
        if self.q <= _NUMPY_TABLE_LIMIT:
            self._addtab = [[self._add_digits(x, y) for y in range(self.q)] for x in range(self.q)]
            return self._addtab[a][b]
        return self._add_digits(a, b)

    def _add_digits(self, a: int, b: int) -> int:
        p, v, scale = self.p, 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            v += ((x + y) % p) * scale
            scale *= p
        return v

    def neg(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        if self.p == 2:
            return a
        p, v, scale = self.p, 0, 1
        while a:
            a, x = divmod(a, p)
            v += (-x % p) * scale
            scale *= p
        return v

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mul_poly(a, b)

    def _mul_poly(self, a: int, b: int) -> int:
        prod = _pmulmod(list(self.coords(a)), list(self.coords(b)), self.modulus, self.p)
        return self.from_coords(prod + [0] * (self.m - len(prod)))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.m == 1:
            return pow(a, e, self.p)
        if self._log is not None:
            return self._exp[self._log[a] * e % (self.q - 1)]
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            e >>= 1
            if e:
                base = self._mul_poly(base, base)
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        if self.m == 1:
            return pow(a, -1, self.p)
        if self._log is not None:
            return self._exp[-self._log[a] % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def frob(self, a: int, s: int = 1) -> int:
        """``a -> a^(p^s)``."""
        return self.pow(a, self.p ** (s % self.m) if self.m > 1 else 1)

    # -- structure ----------------------------------------------------------

    def _order_is_full(self, a: int, prime_factors) -> bool:
        n = self.q - 1
        return all(self._pow_nolog(a, n // f) != 1 for f in prime_factors)

    def _pow_nolog(self, a, e):
        if self.m == 1:
            return pow(a, e, self.p)
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            e >>= 1
            if e:
                base = self._mul_poly(base, base)
        return result

    @cached_property
    def primitive_element(self) -> int:
        """Smallest encoding generating the multiplicative group."""
        if self.q == 2:
            return 1
        factors = _factor(self.q - 1)
        for a in range(2 if self.m == 1 else self.p, self.q):
            if self._order_is_full(a, factors):
                return a
        raise AssertionError("no primitive element found")

    def _build_log_tables(self):
        g = self.primitive_element
        exp = [0] * (self.q - 1)
        log = [0] * self.q
        x = 1
        for i in range(self.q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_poly(x, g)
        self._exp, self._log = exp, log

    def is_subfield_degree(self, s: int) -> bool:
        return isinstance(s, int) and s >= 1 and self.m % s == 0

    def in_subfield(self, a: int, s: int) -> bool:
        if not self.is_subfield_degree(s):
            raise FieldError(f"{s} does not divide {self.m}")
        return self.pow(a, self.p**s) == a

    @lru_cache(maxsize=None)
    def subfield_generator_image(self, s: int) -> int:
        """Image in this field of the modulus root of GF(p^s).

        Deterministic: the root of GF(p^s)'s modulus that appears first in the
        power sequence ``beta^0, beta^1, ...`` of ``beta = g^((q-1)/(p^s-1))``
        with ``g`` the primitive element.
        """
        if not self.is_subfield_degree(s):
            raise FieldError(f"GF({self.p}^{s}) is not a subfield of {self}")
        if s == 1:
            return 1
        sub = make_field(self.p, s)
        beta = self.pow(self.primitive_element, (self.q - 1) // (sub.q - 1))
        x = 1
        for _ in range(sub.q - 1):
            if self._eval_modulus(sub.modulus, x) == 0:
                return x
            x = self.mul(x, beta)
        raise AssertionError("subfield modulus has no root")

    def _eval_modulus(self, poly, x):
        acc = 0
        for c in reversed(poly):
            acc = self.add(self.mul(acc, x), c)
        return acc

    @lru_cache(maxsize=None)
    def embedding_table(self, s: int) -> tuple[int, ...]:
        """``table[v]`` is the image of GF(p^s)-encoding ``v`` in this field."""
        sub = make_field(self.p, s)
        root = self.subfield_generator_image(s)
        powers = [1]
        for _ in range(s - 1):
            powers.append(self.mul(powers[-1], root))
        table = []
        for v in range(sub.q):
            acc = 0
            for c, w in zip(sub.coords(v), powers):
                if c:
                    acc = self.add(acc, self.mul(c, w))
            table.append(acc)
        return tuple(table)

    @lru_cache(maxsize=None)
    def restriction_map(self, s: int) -> dict[int, int]:
        """Inverse of :meth:`embedding_table` on the subfield image."""
        return {img: v for v, img in enumerate(self.embedding_table(s))}

    # -- numpy tables (small fields only) ----------------------------------

    @cached_property
    def tables(self) -> "FieldTables":
        if self.q > _NUMPY_TABLE_LIMIT:
            raise FieldError(f"{self} too large for dense arithmetic tables")
        return FieldTables(self)


class FieldTables:
    """Dense ``q x q`` addition/multiplication tables for vectorized work."""

    def __init__(self, field: Field):
        q = field.q
        self.field = field
        v = np.arange(q)
        if field.m == 1:
            self.add = ((v[:, None] + v[None, :]) % q).astype(np.int32)
            self.mul = ((v[:, None] * v[None, :]) % q).astype(np.int32)
        else:
            self.add = np.array([[field.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int32)
            self.mul = np.array([[field.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int32)
        self.neg = np.array([field.neg(a) for a in range(q)], dtype=np.int32)
        self.inv = np.array([field.inv(a) if a else 0 for a in range(q)], dtype=np.int32)

    def frobenius(self, s: int = 1) -> np.ndarray:
        f = self.field
        return np.array([f.frob(a, s) for a in range(f.q)], dtype=np.int32)

    def restriction(self, s: int) -> np.ndarray:
        """Map to GF(p^s) encodings; -1 marks elements outside the subfield."""
        out = np.full(self.field.q, -1, dtype=np.int32)
        for img, v in self.field.restriction_map(s).items():
            out[img] = v
        return out


def make_field(p: int, m: int = 1) -> Field:
    """Return GF(p^m) with the lexicographically smallest irreducible modulus.

    Instances are cached, so equal parameters give the identical object.
    """
    return _cached_field(p, m)


@lru_cache(maxsize=None)
def _cached_field(p: int, m: int) -> Field:
    return Field(p, m)


def field_of_size(q: int) -> Field:
    return make_field(*prime_power(q))


class FieldElement:
    """An element of a :class:`Field` (immutable, value semantics)."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coords(self) -> tuple[int, ...]:
        return self.field.coords(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError(f"mixed-field operands {self.field} and {other.field}")
            return other.value
        if isinstance(other, int):
            return self.field(other % self.field.p).value
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(o, self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.value, self.field.inv(o)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field(other % self.field.p).value
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        if self.field.m == 1:
            return f"{self.value}"
        return f"{self.field}{self.coords}"


def arith(op: str, *operands):
    """Dispatch ``add``/``mul``/``inv``/``pow`` on FieldElements (CLI helper)."""
    if op == "add":
        a, b = operands
        return a + b
    if op == "mul":
        a, b = operands
        return a * b
    if op == "inv":
        (a,) = operands
        return a.inverse()
    if op == "pow":
        a, e = operands
        if e < 0:
            raise FieldError("pow takes exponents >= 0")
        return a**e
    raise FieldError(f"unknown operation {op!r}")


def frobenius(x: FieldElement, s: int = 1) -> FieldElement:
    """Frobenius of ``x`` relative to GF(p^s): ``x -> x^(p^s)``."""
    f = x.field
    if not f.is_subfield_degree(s):
        raise FieldError(f"{s} does not divide the extension degree {f.m}")
    return FieldElement(f, f.frob(x.value, s))


def embed(x: FieldElement, target: Field) -> FieldElement:
    src = x.field
    if src.p != target.p or not target.is_subfield_degree(src.m):
        raise FieldError(f"{src} does not embed in {target}")
    if src is target:
        return x
    return FieldElement(target, target.embedding_table(src.m)[x.value])


def restrict(x: FieldElement, sub: Field) -> FieldElement:
    """Inverse of :func:`embed`; raises if ``x`` is not in the subfield."""
    big = x.field
    if sub is big:
        return x
    try:
        return FieldElement(sub, big.restriction_map(sub.m)[x.value])
    except KeyError:
        raise FieldError(f"{x!r} does not lie in {sub}") from None
