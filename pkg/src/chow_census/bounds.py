"""Dimension, codimension, degree and probability bounds for curves in P^r.

Large bound values such as ``c_{d,r} = (2ed)^(r(r+1)(d^2+1) + 4r g_{d,r})``
are kept symbolic as :class:`ScaledPower` objects. They are rendered through
interval arithmetic, with Euler's number replaced by a rational that moves the
value in the requested rounding direction, so an ``UP`` value is never below
the true real value and a ``DOWN`` value is never above it.
"""

from __future__ import annotations

import enum
from contextlib import contextmanager
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from mpmath import iv, mp, mpf

WORKING_DPS = 200
EXACT_EXPONENT_CAP = 20000


def _e_bounds(terms: int = 60) -> tuple[Fraction, Fraction]:
    """Rationals bracketing e from the exponential series.

    The tail after ``terms`` terms is below ``2/terms!``.
    """
    s = Fraction(0)
    f = 1
    for k in range(terms):
        if k:
            f *= k
        s += Fraction(1, f)
    return s, s + Fraction(2, f * terms)


E_LOWER, E_UPPER = _e_bounds()


class Rounding(enum.Enum):
    UP = "UP"
    DOWN = "DOWN"


class BoundDomainError(ValueError):
    """Inputs outside the hypotheses of the requested bound."""


@contextmanager
def _iv_dps(dps: int):
    old = iv.dps
    iv.dps = dps
    try:
        yield
    finally:
        iv.dps = old


def _iv_frac(x: Fraction):
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


@lru_cache(maxsize=4096)
def _iv_log(x: Fraction, dps: int):
    """Interval log of a positive rational at ``dps`` digits (cached)."""
    with _iv_dps(dps):
        return iv.log(_iv_frac(x))


def _iv_pow(x, k: int):
    if k >= 0:
        return x**k
    return 1 / x ** (-k)


@dataclass(frozen=True)
class ScaledPower:
    """``coeff * prod(base_i ** exp_i) * e ** e_exponent`` with a rounding direction.

    Bases and the coefficient are exact rationals; exponents are integers.
    The common single-term shape ``(b*e)^n`` has ``factors=((b, n),)`` and
    ``e_exponent=n``.
    """

    coeff: Fraction
    factors: tuple = ()
    e_exponent: int = 0
    rounding: Rounding = Rounding.UP
    formula_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(
            self, "factors", tuple((Fraction(b), int(k)) for b, k in self.factors if k and b != 1)
        )
        if self.coeff < 0:
            raise ValueError("ScaledPower coefficients are nonnegative")
        if any(b <= 0 for b, _ in self.factors):
            raise ValueError("ScaledPower bases must be positive")

    @property
    def base(self) -> Fraction:
        """Rational part of the base of a single-term power."""
        return self.factors[0][0] if self.factors else Fraction(1)

    @property
    def exponent(self) -> int:
        return self.factors[0][1] if self.factors else 0

    @property
    def is_zero(self) -> bool:
        return self.coeff == 0

    # -- combination --------------------------------------------------------

    def times(self, other: "ScaledPower", formula_id: str | None = None) -> "ScaledPower":
        if other.rounding is not self.rounding:
            raise ValueError("cannot combine values rounded in different directions")
        merged: dict = {}
        for b, k in self.factors + other.factors:
            merged[b] = merged.get(b, 0) + k
        return ScaledPower(
            self.coeff * other.coeff,
            tuple(sorted(merged.items())),
            self.e_exponent + other.e_exponent,
            self.rounding,
            formula_id if formula_id is not None else self.formula_id,
        )

    def scaled(self, c, formula_id: str | None = None) -> "ScaledPower":
        return replace(self, coeff=self.coeff * Fraction(c),
                       formula_id=formula_id if formula_id is not None else self.formula_id)

    def with_q_power(self, q: int, k: int, formula_id: str | None = None) -> "ScaledPower":
        return self.times(ScaledPower(1, ((q, k),), 0, self.rounding), formula_id)

    def reciprocal(self, rounding: Rounding, formula_id: str = "") -> "ScaledPower":
        if self.is_zero:
            raise ZeroDivisionError("reciprocal of a zero bound")
        return ScaledPower(
            1 / self.coeff, tuple((b, -k) for b, k in self.factors), -self.e_exponent,
            rounding, formula_id,
        )

    # -- evaluation -----------------------------------------------------------

    def directed_e(self) -> Fraction:
        """The rational standing in for e, chosen to push the value the right way."""
        grows_with_e = self.e_exponent > 0
        if (self.rounding is Rounding.UP) == grows_with_e:
            return E_UPPER
        return E_LOWER

    def _interval(self, e_value, dps: int):
        with _iv_dps(dps):
            acc = _iv_frac(self.coeff)
            for b, k in self.factors:
                acc = acc * _iv_pow(_iv_frac(b), k)
            if self.e_exponent:
                acc = acc * _iv_pow(e_value, self.e_exponent)
            return acc

    def enclosure(self, dps: int = WORKING_DPS):
        """Rigorous interval containing the true real value."""
        with _iv_dps(dps):
            e = iv.mpf([_iv_frac(E_LOWER).a, _iv_frac(E_UPPER).b])
            return self._interval(e, dps)

    def value(self, dps: int = WORKING_DPS) -> mpf:
        """Directed decimal value (an mpf) at ``dps`` digits."""
        if self.is_zero:
            return mpf(0)
        with _iv_dps(dps):
            box = self._interval(_iv_frac(self.directed_e()), dps)
        end = box.b if self.rounding is Rounding.UP else box.a
        with mp.workdps(dps):
            return mpf(end)

    def real_value(self, dps: int = WORKING_DPS) -> mpf:
        """The value with the true e, at ``dps`` digits (ordinary rounding)."""
        with mp.workdps(dps + 10):
            acc = mpf(self.coeff.numerator) / self.coeff.denominator
            for b, k in self.factors:
                acc *= (mpf(b.numerator) / b.denominator) ** k
            acc *= mp.e**self.e_exponent
            return +acc

    def log_enclosure(self, dps: int = 30):
        """Interval for the natural log of the true value (coefficient > 0)."""
        if self.is_zero:
            raise ValueError("log of a zero bound")
        with _iv_dps(dps):
            acc = _iv_log(self.coeff, dps)
            for b, k in self.factors:
                acc = acc + k * _iv_log(b, dps)
            return acc + self.e_exponent

    def log10(self, dps: int = WORKING_DPS) -> mpf:
        """Directed log10 of the value (-inf for zero)."""
        if self.is_zero:
            return mpf("-inf")
        with _iv_dps(dps):
            box = self.log_enclosure(dps) / iv.log(10)
        return mpf(box.b if self.rounding is Rounding.UP else box.a)

    def log10_display(self) -> str:
        if self.is_zero:
            return "-inf"
        with mp.workdps(WORKING_DPS):
            return mp.nstr(self.log10(), 6)

    def exact(self, cap: int = EXACT_EXPONENT_CAP) -> Fraction:
        """The directed rational value, computed exactly (small exponents only)."""
        total = sum(abs(k) for _, k in self.factors) + abs(self.e_exponent)
        if total > cap:
            raise OverflowError(f"exponent total {total} exceeds exact cap {cap}")
        acc = self.coeff
        for b, k in self.factors:
            acc *= b**k
        return acc * self.directed_e() ** self.e_exponent

    def to_dict(self) -> dict:
        return {
            "formula_id": self.formula_id,
            "coeff": str(self.coeff),
            "factors": [[str(b), k] for b, k in self.factors],
            "e_exponent": self.e_exponent,
            "rounding": self.rounding.value,
            "log10": self.log10_display(),
        }

    def __str__(self):
        parts = [] if self.coeff == 1 else [str(self.coeff)]
        for b, k in self.factors:
            parts.append(f"{b}^{k}")
        if self.e_exponent:
            parts.append(f"e^{self.e_exponent}")
        return " * ".join(parts) or "1"


def exact_value(x: int | Fraction, rounding: Rounding = Rounding.UP, formula_id: str = "") -> ScaledPower:
    return ScaledPower(Fraction(x), (), 0, rounding, formula_id)


def _float_log(x: ScaledPower) -> tuple[float, float]:
    """Approximate natural log of a nonzero value and the sum of |terms|."""
    terms = [math.log(x.coeff.numerator), -math.log(x.coeff.denominator), float(x.e_exponent)]
    for b, k in x.factors:
        terms.append(k * (math.log(b.numerator) - math.log(b.denominator)))
    return math.fsum(terms), sum(abs(t) for t in terms)


def certainly_le(a: ScaledPower, b: ScaledPower) -> bool:
    """Prove ``a <= b`` for the true real values, or return False."""
    if a.is_zero:
        return True
    if b.is_zero:
        return False
    if not a.e_exponent and not b.e_exponent:
        size = sum(abs(k) for _, k in a.factors + b.factors)
        if size <= 4000:
            return a.exact() <= b.exact()
    # Float screen: each log term carries relative error far below 1e-12, so a
    # gap wider than the slack decides the comparison without intervals.
    (fa, sa), (fb, sb) = _float_log(a), _float_log(b)
    slack = 1e-9 * (1.0 + sa + sb)
    if fa + slack < fb:
        return True
    if fa - slack > fb:
        return False
    for dps in (30, 80, WORKING_DPS):
        la, lb = a.log_enclosure(dps), b.log_enclosure(dps)
        if la.b <= lb.a:
            return True
        if la.a > lb.b:
            return False
    return False


def min_bound(a: ScaledPower, b: ScaledPower) -> ScaledPower:
    return a if certainly_le(a, b) else b


def max_bound(a: ScaledPower, b: ScaledPower) -> ScaledPower:
    return b if certainly_le(a, b) else a


# -- dimensions ---------------------------------------------------------------

def _require(cond: bool, message: str):
    if not cond:
        raise BoundDomainError(message)


def _check_q(q: int):
    # The bounds are real-valued functions of q; callers sweeping q need not
    # restrict themselves to prime powers.
    if not isinstance(q, int) or isinstance(q, bool) or q < 2:
        raise BoundDomainError(f"q must be an integer >= 2, got {q!r}")


def lines_dim(d: int, r: int) -> int:
    """Dimension of the locus of sums of d lines."""
    return 2 * d * (r - 1)


def planar_dim(d: int, r: int) -> int:
    """Dimension of the locus of plane curves of degree d."""
    return 3 * (r - 2) + d * (d + 3) // 2


def chow_dimension(d: int, r: int) -> int:
    """Dimension of the variety of degree-d curves in P^r (d >= 1)."""
    return planar_dim(d, r) if d >= 4 * r - 8 else lines_dim(d, r)


def component_dims(d: int, r: int) -> tuple[int, int]:
    _require(d >= 2 and r >= 3, f"requires d >= 2 and r >= 3, got d={d}, r={r}")
    return lines_dim(d, r), planar_dim(d, r)


EXCEPTIONAL = {(2, 3), (3, 3)}


@dataclass(frozen=True)
class DimensionReport:
    d: int
    r: int
    b: int
    tag: str
    exceptional: bool

    def to_dict(self) -> dict:
        return {"formula_id": "chow_dimension", "inputs": {"d": self.d, "r": self.r},
                "value": self.b, "dominant": self.tag, "exceptional": self.exceptional}


def chow_dim(d: int, r: int) -> DimensionReport:
    lines, planar = component_dims(d, r)
    b = max(lines, planar)
    if (d, r) in EXCEPTIONAL:
        tag = "TIE"
    elif d >= 4 * r - 8:
        tag = "PLANAR"
    else:
        tag = "LINES"
    assert b == chow_dimension(d, r), "dominant-component rule disagrees with the maximum"
    assert (lines == planar) == (tag == "TIE"), f"unexpected tie pattern at {(d, r)}"
    return DimensionReport(d, r, b, tag, (d, r) in EXCEPTIONAL)


@dataclass(frozen=True)
class CodimReport:
    d: int
    r: int
    codim: int
    dim: int
    u_table: dict
    labels: dict
    argmin: int

    def to_dict(self) -> dict:
        return {
            "formula_id": "reducible_codimension",
            "inputs": {"d": self.d, "r": self.r},
            "codim": self.codim,
            "dim": self.dim,
            "u_table": {str(k): v for k, v in self.u_table.items()},
            "labels": {str(k): v for k, v in self.labels.items()},
            "argmin": self.argmin,
        }


def u_value(d: int, r: int, k: int) -> int:
    """Dimension drop for splitting a degree-d cycle as degree k plus d-k."""
    return chow_dimension(d, r) - chow_dimension(k, r) - chow_dimension(d - k, r)


def split_label(d: int, r: int, k: int) -> str:
    t = 4 * r - 8
    if k >= t:
        return "K1"
    if d - k >= t:
        return "K2"
    return "K3"


def reducible_codim(d: int, r: int) -> CodimReport:
    _require(r >= 3, f"requires r >= 3, got r={r}")
    _require(d >= 4 * r - 8, f"requires d >= 4r-8, got d={d}, r={r}")
    _require(d >= 2, "requires d >= 2")
    if d == 4 * r - 8:
        codim, dim = r - 2, 8 * (r - 1) * (r - 2)
    else:
        codim, dim = d - 2 * r + 3, 5 * r - 9 + d * (d + 1) // 2
    table = {k: u_value(d, r, k) for k in range(1, d // 2 + 1)}
    labels = {k: split_label(d, r, k) for k in table}
    best = min(table.values())
    argmin = min(k for k, v in table.items() if v == best)
    b = chow_dimension(d, r)
    if best != codim or dim != b - codim:
        raise AssertionError(
            f"codimension cross-check failed at (d,r)=({d},{r}): closed form {codim}, "
            f"direct minimum {best}, dim {dim} vs {b - codim}"
        )
    return CodimReport(d, r, codim, dim, table, labels, argmin)


# -- Grassmannian coordinate ring -----------------------------------------------

@lru_cache(maxsize=None)
def g_coeff(d: int, r: int) -> int:
    """Dimension of the degree-d piece of the Grassmannian of lines' coordinate ring.

    Four independent expressions are evaluated; any disagreement raises.
    """
    _require(d >= 1 and r >= 3, f"requires d >= 1 and r >= 3, got d={d}, r={r}")
    defn = Fraction(comb(r + d - 2, d) ** 2 * (r + d - 1), (r - 1) * (d + 1))
    difference = Fraction(comb(r + d - 2, d) ** 2 - comb(r + d - 2, d - 1) * comb(r + d - 2, d + 1))
    binomials = Fraction(comb(d + r - 2, r - 2) * comb(d + r - 1, r - 1), d + 1)
    product = Fraction(1)
    for i in range(1, r - 1):
        product *= Fraction(d + r - i - 1, r - i - 1) * Fraction(d + r - i, r - i)
    values = {defn, difference, binomials, product}
    if len(values) != 1:
        raise ArithmeticError(f"g({d},{r}) identities disagree: {sorted(values)}")
    g = values.pop()
    if g.denominator != 1 or g <= 0:
        raise ArithmeticError(f"g({d},{r}) = {g} is not a positive integer")
    return int(g)


# -- degree bounds ------------------------------------------------------------

def _restricted_exponent(d: int, r: int) -> int:
    return r * (r + 1) * (d * d + 1) + 3 * r * g_coeff(d, r)


def full_exponent(d: int, r: int) -> int:
    return r * (r + 1) * (d * d + 1) + 4 * r * g_coeff(d, r)


def c_bound(d: int, r: int, rounding: Rounding = Rounding.UP) -> ScaledPower:
    """``(2ed)^(r(r+1)(d^2+1) + 4 r g)``: the degree bound for the whole Chow variety."""
    n = full_exponent(d, r)
    return ScaledPower(1, ((2 * d, n),), n, rounding, "chow_variety_degree")


def chow_degree_bounds(d: int, r: int) -> dict:
    """Degree bounds for the restricted incidence variety, the hat variety and
    the full Chow variety (all rounded UP)."""
    _require(d >= 1 and r >= 3, f"requires d >= 1 and r >= 3, got d={d}, r={r}")
    n3 = _restricted_exponent(d, r)
    return {
        "restricted": ScaledPower(1, ((d, n3),), n3, Rounding.UP, "restricted_incidence_degree"),
        "hat": ScaledPower(2, ((d, n3),), n3, Rounding.UP, "hat_chow_degree"),
        "full": c_bound(d, r),
        "restricted_in_domain": d >= r,
    }


def rel_irr_degree_bound(ell: int, d: int, r: int) -> ScaledPower:
    """``(ed/ell)^(r(r+1)((d/ell)^2+1) + 4 r g_{d/ell,r})``."""
    _require(r >= 3, f"requires r >= 3, got r={r}")
    _require(ell >= 2 and d % ell == 0 and ell in prime_divisors(d),
             f"ell={ell} is not a prime divisor of d={d}")
    k = d // ell
    n = r * (r + 1) * (k * k + 1) + 4 * r * g_coeff(k, r)
    return ScaledPower(1, ((k, n),), n, Rounding.UP, "relative_irreducible_degree")


class DegreeBoundKind(enum.Enum):
    BEZOUT = "BEZOUT"
    HEINTZ_SCHNORR = "HEINTZ_SCHNORR"
    COMPONENTS_CODIM = "COMPONENTS_CODIM"
    IMAGE = "IMAGE"


def degree_bound_calculator(kind, *args, **inputs) -> ScaledPower:
    """Elementary degree bounds.

    BEZOUT(deg_1, deg_2, ...): product of degrees.
    HEINTZ_SCHNORR(deg_v1, max_deg, dim_v1): deg V1 * max_deg ** dim V1.
    COMPONENTS_CODIM(d, s): d ** s.
    IMAGE(deg_v, d, m): deg V * d ** m.
    """
    kind = DegreeBoundKind(kind.value if isinstance(kind, DegreeBoundKind) else str(kind).upper())

    def need(names):
        vals = list(args) + [inputs[n] for n in names[len(args):] if n in inputs]
        if len(vals) < len(names):
            missing = names[len(vals):]
            raise BoundDomainError(f"{kind.value} needs inputs {', '.join(missing)}")
        if any(not isinstance(v, int) or v < 0 for v in vals):
            raise BoundDomainError(f"{kind.value} inputs must be nonnegative integers")
        return vals[: len(names)]

    if kind is DegreeBoundKind.BEZOUT:
        degs = list(args) or list(inputs.get("degrees", []))
        if len(degs) < 2:
            raise BoundDomainError("BEZOUT needs at least two degrees")
        value = math.prod(degs)
    elif kind is DegreeBoundKind.HEINTZ_SCHNORR:
        deg_v1, max_deg, dim_v1 = need(["deg_v1", "max_deg", "dim_v1"])
        value = deg_v1 * max_deg**dim_v1
    elif kind is DegreeBoundKind.COMPONENTS_CODIM:
        d, s = need(["d", "s"])
        value = d**s
    else:
        deg_v, d, m = need(["deg_v", "d", "m"])
        value = deg_v * d**m
    return exact_value(value, Rounding.UP, f"degree_bound_{kind.value.lower()}")


# -- intervals -----------------------------------------------------------------

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


@dataclass(frozen=True)
class BoundInterval:
    """``lower * q^k <= quantity <= upper * q^k`` with ScaledPower coefficients."""

    lower: ScaledPower
    upper: ScaledPower
    q: int
    q_exponent: int
    formula_id: str
    inputs: dict
    clamped: bool = False
    flags: dict = field(default_factory=dict)

    def lower_full(self) -> ScaledPower:
        return self.lower.with_q_power(self.q, self.q_exponent)

    def upper_full(self) -> ScaledPower:
        return self.upper.with_q_power(self.q, self.q_exponent)

    def is_ordered(self) -> bool:
        """Certified ``lower <= upper`` (a zero lower always passes)."""
        return certainly_le(self.lower_full(), self.upper_full())

    def contains(self, x) -> bool:
        """Certified containment of an exact rational."""
        x = Fraction(x)
        point_hi = exact_value(x, Rounding.UP)
        lo_ok = self.lower.is_zero or x > 0 and certainly_le(self.lower_full(), point_hi)
        hi_ok = x == 0 or certainly_le(point_hi, self.upper_full())
        return lo_ok and hi_ok

    def to_dict(self) -> dict:
        return {
            "formula_id": self.formula_id,
            "inputs": self.inputs,
            "interval": {"lower": self.lower_full().to_dict(), "upper": self.upper_full().to_dict()},
            "q_exponent": self.q_exponent,
            "rounding": {"lower": "DOWN", "upper": "UP"},
            "validity_flags": {"lower_clamped": self.clamped, **self.flags},
        }


def _clamped_coeff(x: Fraction) -> tuple[Fraction, bool]:
    return (Fraction(0), True) if x < 0 else (x, False)


def prob_reducible_interval(d: int, r: int, q: int) -> BoundInterval:
    """Bounds on the probability that a random degree-d curve in P^r over F_q is reducible."""
    _check_q(q)
    _require(r >= 3, f"requires r >= 3, got r={r}")
    _require(d >= 4 * r - 8, f"requires d >= 4r-8, got d={d}, r={r}")
    inputs = {"d": d, "r": r, "q": q}
    c_up = c_bound(d, r, Rounding.UP)
    inv_c = c_bound(d, r).reciprocal(Rounding.DOWN)
    if d == 4 * r - 8:
        lower = inv_c.scaled(Fraction(1, 2 * factorial(d)), "prob_reducible_lower_boundary")
        return BoundInterval(lower, replace(c_up, formula_id="prob_reducible_upper"), q,
                             -(r - 2), "prob_reducible_boundary_case", inputs)
    coeff, clamped = _clamped_coeff((1 - Fraction(13) * Fraction(q) ** (2 - d)) / 2)
    lower = inv_c.scaled(coeff, "prob_reducible_lower")
    flags = {}
    if d >= 7:
        flags["alternate_lower_coeff"] = "1/(4c)"
    return BoundInterval(lower, replace(c_up, formula_id="prob_reducible_upper"), q,
                         -(d - 2 * r + 3), "prob_reducible", inputs, clamped, flags)


def nonplanar_fraction_bound(d: int, r: int, q: int) -> ScaledPower:
    """Upper bound for the fraction of curves that are not plane curves: 2c/q."""
    _check_q(q)
    _require(r >= 3, f"requires r >= 3, got r={r}")
    _require(d >= 4 * r - 8, f"requires d >= 4r-8, got d={d}, r={r}")
    return c_bound(d, r).scaled(2).with_q_power(q, -1, "nonplanar_fraction")


@dataclass(frozen=True)
class RegimeBounds:
    regime: str
    count: BoundInterval
    probability: BoundInterval
    count_exponent: int
    probability_exponent: int

    def to_dict(self) -> dict:
        return {"regime": self.regime, "count": self.count.to_dict(),
                "probability": self.probability.to_dict(),
                "count_exponent": self.count_exponent,
                "probability_exponent": self.probability_exponent}


@dataclass(frozen=True)
class RelIrrReport:
    d: int
    r: int
    q: int
    ell: int
    regimes: tuple
    overlap: bool
    count_intersection: BoundInterval | None = None
    probability_intersection: BoundInterval | None = None

    def to_dict(self) -> dict:
        out = {"formula_id": "relative_irreducible", "inputs": {"d": self.d, "r": self.r, "q": self.q},
               "ell": self.ell, "overlap": self.overlap,
               "regimes": [g.to_dict() for g in self.regimes]}
        if self.overlap:
            out["count_intersection"] = self.count_intersection.to_dict()
            out["probability_intersection"] = self.probability_intersection.to_dict()
        return out


def rel_irr_interval(d: int, r: int, q: int) -> RelIrrReport:
    """Count and probability bounds for relatively irreducible curves."""
    _check_q(q)
    _require(r >= 3, f"requires r >= 3, got r={r}")
    _require(d >= 4 * r - 8 and d >= 2, f"requires d >= 4r-8, got d={d}, r={r}")
    ell = prime_divisors(d)[0]
    k = d // ell
    D = rel_irr_degree_bound(ell, d, r)
    inv_c = c_bound(d, r).reciprocal(Rounding.DOWN)
    inputs = {"d": d, "r": r, "q": q, "ell": ell}
    regimes = []
    if k <= 4 * r - 7:
        cexp = 2 * d * (r - 1)
        pexp = (2 * d - 3) * (r - 2) - d * (d - 1) // 2
        coeff, clamped = _clamped_coeff(1 - 4 * Fraction(q) ** (2 * (1 - d) * (r - 1)))
        count = BoundInterval(exact_value(coeff, Rounding.DOWN), D.scaled(2), q, cexp,
                              "relative_irreducible_count_small_quotient", inputs, clamped)
        prob = BoundInterval(inv_c.scaled(coeff / 2), D.scaled(2), q, pexp,
                             "relative_irreducible_prob_small_quotient", inputs, clamped)
        regimes.append(RegimeBounds("A", count, prob, cexp, pexp))
    if k >= 4 * r - 8:
        cexp = ell * chow_dimension(k, r)
        num = 3 * (ell - 1) * (r - 2) * 2 * ell - d * d * (ell - 1)
        assert num % (2 * ell) == 0
        pexp = num // (2 * ell)
        coeff, clamped = _clamped_coeff(1 - 16 * Fraction(q) ** (ell - d))
        count = BoundInterval(exact_value(coeff, Rounding.DOWN), D.scaled(3), q, cexp,
                              "relative_irreducible_count_large_quotient", inputs, clamped)
        prob = BoundInterval(inv_c.scaled(coeff / 2), D.scaled(3), q, pexp,
                             "relative_irreducible_prob_large_quotient", inputs, clamped)
        regimes.append(RegimeBounds("B", count, prob, cexp, pexp))
    overlap = len(regimes) == 2
    if not overlap:
        return RelIrrReport(d, r, q, ell, tuple(regimes), False)

    def intersect(a: BoundInterval, b: BoundInterval, fid: str) -> BoundInterval:
        lo = max_bound(a.lower_full(), b.lower_full())
        hi = min_bound(a.upper_full(), b.upper_full())
        return BoundInterval(lo, hi, q, 0, fid, inputs, a.clamped and b.clamped)

    A, B = regimes
    return RelIrrReport(
        d, r, q, ell, tuple(regimes), True,
        intersect(A.count, B.count, "relative_irreducible_count_intersection"),
        intersect(A.probability, B.probability, "relative_irreducible_prob_intersection"),
    )


@dataclass(frozen=True)
class WeilReport:
    d: int
    r: int
    q: int
    weil_term: mpf
    tail_term: ScaledPower
    expectation_bound: mpf
    concentration_bound: mpf
    concentration_clamped: bool
    in_guarantee_regime: bool

    def to_dict(self) -> dict:
        with mp.workdps(WORKING_DPS):
            return {
                "formula_id": "average_points",
                "inputs": {"d": self.d, "r": self.r, "q": self.q},
                "expectation_bound": {"log10": mp.nstr(mp.log10(self.expectation_bound), 6),
                                      "rounding": "UP"},
                "weil_term": mp.nstr(self.weil_term, 12),
                "tail_term": self.tail_term.to_dict(),
                "concentration_bound": {"value": mp.nstr(self.concentration_bound, 12),
                                        "rounding": "DOWN"},
                "validity_flags": {"concentration_clamped": self.concentration_clamped,
                                   "in_guarantee_regime": self.in_guarantee_regime},
            }


def weil_regime(d: int, q: int) -> bool:
    """``q >= 15 d^(13/3)``, decided exactly as ``q^3 >= 3375 d^13``."""
    return q**3 >= 3375 * d**13


def avg_weil_bounds(d: int, r: int, q: int) -> WeilReport:
    _check_q(q)
    _require(r >= 3, f"requires r >= 3, got r={r}")
    _require(d > 4 * r - 7, f"requires d > 4r-7, got d={d}, r={r}")
    c = c_bound(d, r)
    tail = c.scaled(3 * d).with_q_power(q, -(d - 2 * r + 2), "average_points_tail")
    miss = c.scaled(2).with_q_power(q, -(d - 2 * r + 3))
    with _iv_dps(WORKING_DPS):
        weil = iv.mpf(d * d) * iv.sqrt(iv.mpf(q))
        total = weil + tail._interval(_iv_frac(tail.directed_e()), WORKING_DPS)
        conc = 1 - miss._interval(_iv_frac(miss.directed_e()), WORKING_DPS)
    with mp.workdps(WORKING_DPS):
        lo = mpf(conc.a)
        clamped = lo < 0
        return WeilReport(d, r, q, mpf(weil.b), tail, mpf(total.b),
                          mpf(0) if clamped else lo, clamped, weil_regime(d, q))


def weil_deviation_ok(deviation: int, d: int, q: int) -> bool:
    """``|#C - (q+1)| <= (d-1)(d-2) sqrt(q)`` by exact integer comparison."""
    return deviation >= 0 and deviation**2 <= ((d - 1) * (d - 2)) ** 2 * q


def plane_reducible_interval(d: int, q: int) -> BoundInterval:
    """Exact rational bounds on the number of reducible plane curves of degree d."""
    from .qcount import plane_curve_space_count

    _check_q(q)
    _require(d >= 2, f"requires d >= 2, got d={d}")
    P = int(plane_curve_space_count(d, q))
    lo, clamped = _clamped_coeff(Fraction(P * (q - 3), q**d))
    hi = Fraction(P * (q + 2), q**d)
    return BoundInterval(exact_value(lo, Rounding.DOWN), exact_value(hi, Rounding.UP), q, 0,
                         "plane_reducible_count", {"d": d, "q": q}, clamped)


@dataclass(frozen=True)
class CountBounds:
    d: int
    r: int
    q: int
    P_lower: int
    P_upper: int
    R_upper: int | None
    C_lower: int | None
    C_upper: ScaledPower | None
    hypothesis_met: bool

    def to_dict(self) -> dict:
        return {
            "formula_id": "curve_counts",
            "inputs": {"d": self.d, "r": self.r, "q": self.q},
            "P_lower": {"value": self.P_lower, "formula_id": "planar_count_lower", "rounding": "exact"},
            "P_upper": {"value": self.P_upper, "formula_id": "planar_count_upper", "rounding": "exact"},
            "R_upper": None if self.R_upper is None else
            {"value": self.R_upper, "formula_id": "reducible_count_upper", "rounding": "exact"},
            "C_lower": None if self.C_lower is None else
            {"value": self.C_lower, "formula_id": "chow_points_lower", "rounding": "exact"},
            "C_upper": None if self.C_upper is None else self.C_upper.to_dict(),
            "validity_flags": {"dominant_planar_hypothesis": self.hypothesis_met},
        }


def count_bounds(d: int, r: int, q: int) -> CountBounds:
    """Bounds on the numbers of planar, reducible and all degree-d curves in P^r.

    The planar bounds hold for every d >= 2. The reducible and total bounds
    need d >= 4r-8; outside that range they are reported as None.
    """
    _check_q(q)
    _require(r >= 3, f"requires r >= 3, got r={r}")
    _require(d >= 2, f"requires d >= 2, got d={d}")
    a = planar_dim(d, r)
    ok = d >= 4 * r - 8
    if not ok:
        return CountBounds(d, r, q, q**a, 7 * q**a, None, None, None, False)
    b = chow_dimension(d, r)
    C_up = c_bound(d, r).scaled(2).with_q_power(q, b, "chow_points_upper")
    return CountBounds(d, r, q, q**a, 7 * q**a, 13 * q ** (b - d + 1), q**b, C_up, True)
