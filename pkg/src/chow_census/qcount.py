"""Exact q-analog counts: projective spaces, Grassmannians, plane-curve
spaces and the number of planar curves of degree d in P^r.

Everything here is integer arithmetic; every division is asserted exact.
"""

from __future__ import annotations

from .gf import FieldError, prime_power


class ExactCount(int):
    """A nonnegative integer tagged with the formula that produced it."""

    def __new__(cls, value: int, formula_id: str):
        if value < 0:
            raise ValueError(f"negative count {value} from {formula_id}")
        obj = super().__new__(cls, value)
        obj.formula_id = formula_id
        return obj

    def __repr__(self):
        return f"ExactCount({int(self)}, {self.formula_id!r})"

    def to_dict(self) -> dict:
        return {"value": int(self), "formula_id": self.formula_id}


def _check_q(q) -> None:
    if not isinstance(q, int) or isinstance(q, bool):
        raise FieldError(f"q must be an integer, got {q!r}")
    prime_power(q)


def _exact_div(a: int, b: int) -> int:
    quot, rem = divmod(a, b)
    if rem:
        raise ArithmeticError(f"{a} / {b} is not exact")
    return quot


def proj_space_count(r: int, q: int) -> ExactCount:
    """Number of points of P^r(F_q): (q^(r+1) - 1) / (q - 1)."""
    _check_q(q)
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    return ExactCount(_exact_div(q ** (r + 1) - 1, q - 1), "proj_space_points")


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if not 0 <= k <= n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q**n - q**i
        den *= q**k - q**i
    return _exact_div(num, den)


def grassmannian_count(k: int, r: int, q: int) -> ExactCount:
    """Number of projective k-planes in P^r(F_q)."""
    _check_q(q)
    if not 0 <= k <= r:
        raise ValueError(f"need 0 <= k <= r, got k={k}, r={r}")
    num = den = 1
    for i in range(k + 1):
        num *= q ** (r + 1) - q**i
        den *= q ** (k + 1) - q**i
    return ExactCount(_exact_div(num, den), "grassmannian_points")


def plane_curve_space_count(d: int, q: int) -> ExactCount:
    """Projective classes of nonzero ternary forms of degree d."""
    _check_q(q)
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    D = (d + 1) * (d + 2) // 2
    return ExactCount(_exact_div(q**D - 1, q - 1), "plane_curve_classes")


def line_power_fiber(r: int, q: int) -> ExactCount:
    """Number of 2-planes of P^r(F_q) containing a fixed line."""
    _check_q(q)
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    return ExactCount(_exact_div(q ** (r + 1) - q**2, q**3 - q**2), "planes_through_line")


def planar_curves_count(d: int, r: int, q: int) -> ExactCount:
    """Number of F_q-rational planar degree-d curves (cycles) in P^r.

    Incidence pairs (plane, curve in that plane) overcount exactly the
    d-fold lines, each of which lies in every plane through its line.
    """
    _check_q(q)
    if d < 2:
        raise ValueError(f"requires d >= 2, got d={d}")
    if r < 3:
        raise ValueError(f"requires r >= 3, got r={r}")
    pairs = plane_curve_space_count(d, q) * grassmannian_count(2, r, q)
    overcount = grassmannian_count(1, r, q) * (line_power_fiber(r, q) - 1)
    return ExactCount(pairs - overcount, "planar_curves_incidence")


def smooth_conic_count(q: int) -> ExactCount:
    """Absolutely irreducible plane conics over F_q: q^5 - q^2."""
    _check_q(q)
    return ExactCount(q**5 - q**2, "smooth_conics")


def reducible_planar_count(d: int, r: int, q: int, plane_reducible: int) -> ExactCount:
    """Lift a count of reducible plane curves to P^r by the same incidence rule.

    Every d-fold line is reducible for d >= 2, so the overcount is unchanged.
    """
    _check_q(q)
    pairs = plane_reducible * grassmannian_count(2, r, q)
    overcount = grassmannian_count(1, r, q) * (line_power_fiber(r, q) - 1)
    return ExactCount(pairs - overcount, "reducible_planar_incidence")
