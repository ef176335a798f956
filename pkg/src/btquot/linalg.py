"""Dense linear algebra over a small finite field.

Rows are lists of int-encoded field elements; the field object supplies
the table-driven scalar arithmetic.
"""


def rref(rows, width, fld):
    """Reduce rows in place to reduced row echelon form.

    Returns (rows, pivot_columns) with zero rows dropped.
    """
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(width):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = fld.inv(rows[r][c])
        if inv != 1:
            rows[r] = [fld.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                ri, rr = rows[i], rows[r]
                for j in range(c, width):
                    if rr[j]:
                        ri[j] = fld.sub(ri[j], fld.mul(f, rr[j]))
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def nullspace(rows, width, fld):
    """Basis of the right kernel, one vector per free column, ascending."""
    red, pivots = rref(rows, width, fld)
    pivot_set = set(pivots)
    basis = []
    for fc in range(width):
        if fc in pivot_set:
            continue
        v = [0] * width
        v[fc] = 1
        for i, pc in enumerate(pivots):
            if red[i][fc]:
                v[pc] = fld.neg(red[i][fc])
        basis.append(v)
    return basis
