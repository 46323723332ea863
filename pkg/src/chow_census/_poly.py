"""Sparse multivariate polynomials over a Field as ``{exponent tuple: int}``.

Coefficients are raw field encodings; zero coefficients are never stored.
Term order is lexicographic on exponent tuples (``max`` of the keys is the
leading monomial), which on homogeneous polynomials is graded-lex.
"""

from __future__ import annotations


def add(field, a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = field.add(out.get(e, 0), c)
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def scale(field, a: dict, c: int) -> dict:
    if c == 0:
        return {}
    return {e: field.mul(v, c) for e, v in a.items()}


def mul(field, a: dict, b: dict) -> dict:
    out: dict = {}
    fadd, fmul = field.add, field.mul
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = fadd(out.get(e, 0), fmul(ca, cb))
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def power(field, a: dict, k: int, nvars: int) -> dict:
    result = {(0,) * nvars: 1}
    base = a
    while k:
        if k & 1:
            result = mul(field, result, base)
        k >>= 1
        if k:
            base = mul(field, base, base)
    return result


def divide_exact(field, f: dict, g: dict):
    """Return ``h`` with ``f == g*h``, or None if ``g`` does not divide ``f``."""
    lm_g = max(g)
    inv_lc = field.inv(g[lm_g])
    rem = dict(f)
    quot: dict = {}
    fadd, fmul, fneg = field.add, field.mul, field.neg
    while rem:
        lm = max(rem)
        shift = tuple(x - y for x, y in zip(lm, lm_g))
        if min(shift) < 0:
            return None
        c = fmul(rem[lm], inv_lc)
        quot[shift] = c
        nc = fneg(c)
        for e, v in g.items():
            t = tuple(x + y for x, y in zip(e, shift))
            nv = fadd(rem.get(t, 0), fmul(nc, v))
            if nv:
                rem[t] = nv
            else:
                rem.pop(t, None)
    return quot


def map_coeffs(a: dict, fn) -> dict:
    out = {}
    for e, c in a.items():
        v = fn(c)
        if v:
            out[e] = v
    return out


def line_roots(field, f: dict, i: int, j: int):
    """Sorted ``t`` with ``f(t*e_i + e_j) = 0``, or None if ``f`` vanishes on that whole line."""
    coeffs: dict = {}
    for e, c in f.items():
        if all(v == 0 for k, v in enumerate(e) if k != i and k != j):
            coeffs[e[i]] = c
    if not coeffs:
        return None
    fadd, fmul, fpow = field.add, field.mul, field.pow
    return [t for t in range(field.q)
            if not _sum(fadd, (fmul(c, fpow(t, k)) for k, c in coeffs.items()))]


def _sum(fadd, terms) -> int:
    s = 0
    for x in terms:
        s = fadd(s, x)
    return s
