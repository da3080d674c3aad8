"""Rational-coefficient polynomials against sympy oracles."""

import random
from fractions import Fraction

import pytest
import sympy

from qmforms.rational import QQ
from qmforms.polyq import (
    Poly,
    divisors,
    factorint,
    poly_gcd,
    rational_roots,
    squarefree_decomposition,
)

X = sympy.Symbol("x")


def random_poly(rng, max_deg=6):
    deg = rng.randrange(0, max_deg + 1)
    coeffs = [QQ(rng.randrange(-8, 9), rng.choice([1, 1, 2, 3]))
              for _ in range(deg + 1)]
    return Poly(coeffs)


def to_sympy(p):
    return sympy.Poly.from_list(
        [sympy.Rational(str(c)) for c in reversed(p.coeffs)] or [0], X,
        domain=sympy.QQ)


def from_sympy(sp):
    return Poly([QQ(str(c)) for c in reversed(sp.all_coeffs())])


def test_arithmetic_matches_sympy():
    rng = random.Random(11)
    for _ in range(40):
        a, b = random_poly(rng), random_poly(rng)
        sa, sb = to_sympy(a), to_sympy(b)
        assert to_sympy(a + b) == sa + sb
        assert to_sympy(a - b) == sa - sb
        assert to_sympy(a * b) == sa * sb
        assert to_sympy(a ** 3) == sa ** 3
        if not b.is_zero():
            q, r = divmod(a, b)
            quo, rem = sa.div(sb)
            assert to_sympy(q) == quo and to_sympy(r) == rem


def test_basic_shape():
    p = Poly((QQ(1, 2), 0, 3))
    assert p.degree == 2
    assert p.coefficient(0) == QQ(1, 2)
    assert p.coefficient(2) == 3
    assert p.coefficient(5) == 0
    assert p.lead == 3
    assert not p.is_monic() and p.monic().is_monic()
    assert Poly.zero().degree == -1
    assert Poly.monomial(3, 2) == Poly((0, 0, 0, 2))
    assert Poly.x() ** 2 == Poly((0, 0, 1))
    assert p.text() == "3*x^2 + 1/2"
    assert Poly((0, -1, 0, QQ(2, 3))).text() == "2*x^3/3 - x"


def test_division_contract():
    a = Poly((1, 0, 0, 1))
    b = Poly((1, 1))
    q, r = divmod(a, b)
    assert q * b + r == a and r.degree < b.degree
    assert a.exact_div(b) * b == a  # x^3+1 = (x+1)(x^2-x+1)
    with pytest.raises(ValueError):
        (a + Poly.one()).exact_div(b)
    with pytest.raises(ZeroDivisionError):
        divmod(a, Poly.zero())


def test_evaluate_and_shift():
    rng = random.Random(12)
    for _ in range(25):
        p = random_poly(rng)
        c = QQ(rng.randrange(-5, 6), rng.choice([1, 2]))
        x0 = QQ(rng.randrange(-5, 6), rng.choice([1, 3]))
        want = Fraction(str(to_sympy(p).eval(sympy.Rational(str(x0)))))
        assert Fraction(str(p(x0))) == want
        # shift_root composes with x -> x + c
        assert p.shift_root(c)(x0) == p(x0 + c)
    assert p.derivative() == from_sympy(to_sympy(p).diff())


def test_gcd_matches_sympy():
    rng = random.Random(13)
    for _ in range(30):
        common = random_poly(rng, 3)
        a = common * random_poly(rng, 3)
        b = common * random_poly(rng, 3)
        if a.is_zero() or b.is_zero():
            continue
        got = poly_gcd(a, b)
        want = sympy.gcd(to_sympy(a), to_sympy(b)).monic()
        assert to_sympy(got) == want


def test_squarefree_matches_sympy():
    rng = random.Random(14)
    for _ in range(25):
        p = Poly.one()
        for mult in (1, 2, 3):
            f = random_poly(rng, 2)
            if f.degree > 0:
                p = p * f ** mult
        if p.degree <= 0:
            continue
        got = squarefree_decomposition(p)
        prod = Poly.one()
        for f, mult in got:
            assert f.is_monic()
            assert sympy.gcd(to_sympy(f), to_sympy(f.derivative())).is_one
            prod = prod * f ** mult
        assert prod == p.monic()
        _, want = sympy.sqf_list(to_sympy(p).monic())
        key = sympy.default_sort_key
        assert sorted((m, key(to_sympy(f).as_expr())) for f, m in got) \
            == sorted((m, key(sf.monic().as_expr())) for sf, m in want)


def test_rational_roots_complete():
    rng = random.Random(15)
    for _ in range(25):
        roots_in = [(QQ(rng.randrange(-4, 5), rng.choice([1, 2, 3])),
                     rng.randrange(1, 3)) for _ in range(rng.randrange(0, 3))]
        p = Poly((rng.randrange(1, 4),))
        for r, m in roots_in:
            p = p * (Poly.x() - Poly((r,))) ** m
        p = p * Poly((1, 0, 1))  # rootless cofactor x^2 + 1
        roots, residual = rational_roots(p)
        want = {sympy.Rational(str(r)): m for r, m
                in sympy.roots(to_sympy(p), filter="Q").items()}
        assert {sympy.Rational(str(r)): m for r, m in roots} == want
        assert roots == sorted(roots)
        rebuilt = residual
        for r, m in roots:
            rebuilt = rebuilt * (Poly.x() - Poly((r,))) ** m
        assert rebuilt == p.monic()
        assert not sympy.roots(to_sympy(residual), filter="Q")


def test_factorint_and_divisors():
    rng = random.Random(16)
    for _ in range(20):
        n = rng.randrange(1, 10 ** 9)
        assert factorint(n) == dict(sympy.factorint(n))
        assert divisors(n) == sympy.divisors(n)
    assert factorint(0) == {} and factorint(1) == {}
    # a semiprime beyond the small-prime table
    n = 1000003 * 999983
    assert factorint(n) == {999983: 1, 1000003: 1}
