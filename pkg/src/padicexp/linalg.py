"""Valuation-pivoted dense linear algebra over p-adic coefficient rings.

Works uniformly over Zp, UnramifiedElement and TowerElement entries: the
only protocol used is ``is_zero`` / ``valuation`` / arithmetic operators /
``inv``.  Full pivoting (minimal valuation over the remaining submatrix)
keeps elimination multipliers integral and makes the total precision loss
of a solve equal to the valuation of the determinant, which is the best
possible for this representation.
"""

from .errors import PrecisionExhausted


def _find_pivot(A, k, rows, cols):
    best = None
    for i in range(k, rows):
        for j in range(k, cols):
            e = A[i][j]
            if e.is_zero():
                continue
            v = e.valuation()
            if best is None or v < best[0]:
                best = (v, i, j)
    return best


def field_det(M):
    """Determinant by elimination; exact up to tracked precision."""
    n = len(M)
    A = [row[:] for row in M]
    det = None
    neg = False
    for k in range(n):
        best = _find_pivot(A, k, n, n)
        if best is None:
            zero = A[k][k]
            return zero if det is None else det * zero
        _, pi, pj = best
        if pi != k:
            A[k], A[pi] = A[pi], A[k]
            neg = not neg
        if pj != k:
            for row in A:
                row[k], row[pj] = row[pj], row[k]
            neg = not neg
        piv = A[k][k]
        det = piv if det is None else det * piv
        pinv = piv.inv()
        for i in range(k + 1, n):
            e = A[i][k]
            if e.is_zero():
                continue
            f = e * pinv
            for j in range(k + 1, n):
                A[i][j] = A[i][j] - f * A[k][j]
    return -det if neg else det


def field_solve(M, rhs_cols):
    """Solve M x = b for each column b in rhs_cols.

    Returns the list of solution columns.  Raises PrecisionExhausted when
    the matrix is singular at working precision.
    """
    n = len(M)
    m = len(rhs_cols)
    A = [row[:] for row in M]
    B = [[rhs_cols[c][i] for c in range(m)] for i in range(n)]
    perm = list(range(n))
    for k in range(n):
        best = _find_pivot(A, k, n, n)
        if best is None:
            raise PrecisionExhausted("linear system singular at working precision")
        _, pi, pj = best
        if pi != k:
            A[k], A[pi] = A[pi], A[k]
            B[k], B[pi] = B[pi], B[k]
        if pj != k:
            for row in A:
                row[k], row[pj] = row[pj], row[k]
            perm[k], perm[pj] = perm[pj], perm[k]
        piv = A[k][k]
        pinv = piv.inv()
        for i in range(k + 1, n):
            e = A[i][k]
            if e.is_zero():
                continue
            f = e * pinv
            for j in range(k + 1, n):
                A[i][j] = A[i][j] - f * A[k][j]
            for c in range(m):
                B[i][c] = B[i][c] - f * B[k][c]
    xs = [[None] * n for _ in range(m)]
    for k in range(n - 1, -1, -1):
        pinv = A[k][k].inv()
        for c in range(m):
            acc = B[k][c]
            for j in range(k + 1, n):
                acc = acc - A[k][j] * xs[c][j]
            xs[c][k] = acc * pinv
    out = [[None] * n for _ in range(m)]
    for c in range(m):
        for k in range(n):
            out[c][perm[k]] = xs[c][k]
    return out


def solve_overdetermined(M, b):
    """Solve the consistent square part of a tall system M x = b.

    M has more rows than columns; returns (solution, residual_rows) where
    residual_rows are the transformed right-hand sides of the unpivoted
    rows.  The caller decides how small the residuals must be.
    """
    rows = len(M)
    cols = len(M[0])
    A = [row[:] for row in M]
    B = [b[i] for i in range(rows)]
    perm = list(range(cols))
    for k in range(cols):
        best = _find_pivot(A, k, rows, cols)
        if best is None:
            raise PrecisionExhausted("system rank-deficient at working precision")
        _, pi, pj = best
        if pi != k:
            A[k], A[pi] = A[pi], A[k]
            B[k], B[pi] = B[pi], B[k]
        if pj != k:
            for row in A:
                row[k], row[pj] = row[pj], row[k]
            perm[k], perm[pj] = perm[pj], perm[k]
        piv = A[k][k]
        pinv = piv.inv()
        for i in range(k + 1, rows):
            e = A[i][k]
            if e.is_zero():
                continue
            f = e * pinv
            for j in range(k + 1, cols):
                A[i][j] = A[i][j] - f * A[k][j]
            B[i] = B[i] - f * B[k]
    x = [None] * cols
    for k in range(cols - 1, -1, -1):
        acc = B[k]
        for j in range(k + 1, cols):
            acc = acc - A[k][j] * x[j]
        x[k] = acc * A[k][k].inv()
    out = [None] * cols
    for k in range(cols):
        out[perm[k]] = x[k]
    return out, B[cols:]
