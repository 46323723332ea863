"""Row reduction over a finite field (raw integer encodings)."""

from __future__ import annotations


def rref(field, rows) -> tuple[tuple[int, ...], ...]:
    """Reduced row-echelon form; zero rows are dropped."""
    m = [list(r) for r in rows]
    ncols = len(m[0]) if m else 0
    out = []
    col = 0
    while m and col < ncols:
        piv = next((i for i, r in enumerate(m) if r[col]), None)
        if piv is None:
            col += 1
            continue
        row = m.pop(piv)
        inv = field.inv(row[col])
        row = [field.mul(x, inv) for x in row]
        m = [_eliminate(field, r, row, col) for r in m]
        out = [_eliminate(field, r, row, col) for r in out]
        out.append(row)
        col += 1
    return tuple(tuple(r) for r in out)


def _eliminate(field, r, pivot_row, col):
    c = r[col]
    if not c:
        return r
    nc = field.neg(c)
    return [field.add(x, field.mul(nc, y)) for x, y in zip(r, pivot_row)]


def rank(field, rows) -> int:
    return len(rref(field, rows))


def kernel(field, rows, ncols: int):
    """Basis of the right kernel {x : rows . x = 0}."""
    red = rref(field, rows) if rows else ()
    pivots = [next(i for i, x in enumerate(r) if x) for r in red]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, pc in zip(red, pivots):
            v[pc] = field.neg(r[f])
        basis.append(tuple(v))
    return basis


def apply(field, vec, mat):
    """Row vector times matrix (list of rows)."""
    ncols = len(mat[0])
    out = [0] * ncols
    for c, row in zip(vec, mat):
        if c:
            for j in range(ncols):
                out[j] = field.add(out[j], field.mul(c, row[j]))
    return out
