"""Exact linear algebra over rationals: row echelon, rank, solve, nullspace."""

from .rational import QQ, qq

_ZERO = QQ(0)


def row_echelon(rows):
    """Reduce rows in place to row echelon form; returns pivot column list."""
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = QQ(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(rows):
    """Rank of a matrix given as a list of coefficient rows."""
    work = [[qq(x) for x in row] for row in rows]
    if not work:
        return 0
    return len(row_echelon(work))


def solve(a_rows, b):
    """One exact solution of A x = b, or None if inconsistent.

    Free variables are set to zero, so the result is deterministic.
    """
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    work = [[qq(x) for x in row] + [qq(b[i])] for i, row in enumerate(a_rows)]
    pivots = row_echelon(work)
    if n in pivots:
        return None
    # row_echelon produces the reduced form, so with free vars at zero the
    # pivot entries read off directly
    x = [_ZERO] * n
    for r, c in enumerate(pivots):
        x[c] = work[r][n]
    return x


def nullspace(a_rows):
    """Basis of the right nullspace of A."""
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    if not m:
        return [[QQ(1) if i == j else _ZERO for i in range(n)] for j in range(n)]
    work = [[qq(x) for x in row] for row in a_rows]
    pivots = row_echelon(work)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [_ZERO] * n
        vec[fc] = QQ(1)
        for r, c in enumerate(pivots):
            vec[c] = -work[r][fc]
        basis.append(vec)
    return basis
