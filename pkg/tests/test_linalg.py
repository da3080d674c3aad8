"""Exact rational linear algebra against sympy Matrix oracles."""

import random

import sympy

from qmforms.rational import QQ
from qmforms.linalg import nullspace, rank, row_echelon, solve


def random_matrix(rng, m, n, lowrank=False):
    if lowrank and m > 1 and n > 1:
        r = rng.randrange(1, min(m, n))
        left = [[QQ(rng.randrange(-4, 5)) for _ in range(r)] for _ in range(m)]
        right = [[QQ(rng.randrange(-4, 5)) for _ in range(n)] for _ in range(r)]
        return [[sum((left[i][k] * right[k][j] for k in range(r)), QQ(0))
                 for j in range(n)] for i in range(m)]
    return [[QQ(rng.randrange(-6, 7), rng.choice([1, 1, 2]))
             for _ in range(n)] for i in range(m)]


def to_sympy(rows):
    return sympy.Matrix([[sympy.Rational(str(x)) for x in row] for row in rows])


def test_rank_matches_sympy():
    rng = random.Random(21)
    for _ in range(40):
        m, n = rng.randrange(1, 6), rng.randrange(1, 6)
        a = random_matrix(rng, m, n, lowrank=rng.random() < 0.5)
        assert rank(a) == to_sympy(a).rank()
    assert rank([]) == 0


def test_row_echelon_is_reduced():
    rng = random.Random(22)
    for _ in range(20):
        m, n = rng.randrange(1, 5), rng.randrange(1, 5)
        a = random_matrix(rng, m, n, lowrank=True)
        work = [list(row) for row in a]
        pivots = row_echelon(work)
        want, want_pivots = to_sympy(a).rref()
        assert tuple(pivots) == want_pivots
        assert to_sympy(work[:len(pivots)]) == want[:len(pivots), :]


def test_solve_exact():
    rng = random.Random(23)
    for _ in range(30):
        m, n = rng.randrange(1, 5), rng.randrange(1, 5)
        a = random_matrix(rng, m, n, lowrank=rng.random() < 0.5)
        x_true = [QQ(rng.randrange(-3, 4), rng.choice([1, 2]))
                  for _ in range(n)]
        b = [sum((a[i][j] * x_true[j] for j in range(n)), QQ(0))
             for i in range(m)]
        x = solve(a, b)
        assert x is not None
        for i in range(m):
            assert sum((a[i][j] * x[j] for j in range(n)), QQ(0)) == b[i]


def test_solve_inconsistent():
    # x + y = 1 and 2x + 2y = 3 cannot both hold
    assert solve([[1, 1], [2, 2]], [1, 3]) is None
    assert solve([[1, 1], [2, 2]], [1, 2]) == [QQ(1), QQ(0)]


def test_nullspace_matches_sympy():
    rng = random.Random(24)
    for _ in range(30):
        m, n = rng.randrange(1, 5), rng.randrange(1, 5)
        a = random_matrix(rng, m, n, lowrank=True)
        basis = nullspace(a)
        assert len(basis) == n - rank(a)
        for vec in basis:
            for i in range(m):
                assert sum((a[i][j] * vec[j] for j in range(n)), QQ(0)) == 0
        # same span: stacking sympy's basis on ours does not raise the rank
        want = to_sympy(a).nullspace()
        assert len(want) == len(basis)
        if basis:
            ours = to_sympy(basis)
            theirs = sympy.Matrix([list(v.T) for v in want])
            stacked = ours.col_join(theirs)
            assert stacked.rank() == ours.rank() == len(basis)
    assert nullspace([]) == []
