"""Laurent series core: arithmetic against a Fraction oracle, order
contracts, inversion, derivative and antiderivative."""

import random
from fractions import Fraction

import pytest

from qmforms.errors import InsufficientPrecision, ZeroInverse
from qmforms.rational import QQ
from qmforms.series import ORDER_INF, AElement, TruncatedLaurent


def seq(s, lo, hi):
    return [s.coefficient(m) for m in range(lo, hi)]


def from_dict(d, order=ORDER_INF):
    return TruncatedLaurent.from_terms(list(d.items()), order)


def rand_series(rng, min_val=-4, max_val=6, order=ORDER_INF):
    terms = {}
    for _ in range(rng.randrange(0, 6)):
        m = rng.randrange(min_val, max_val)
        terms[m] = QQ(rng.randrange(-9, 10), rng.choice([1, 1, 2, 5]))
    return from_dict(terms, order)


def oracle_mul(a, b):
    out = {}
    for m, c in a.items():
        for n, d in b.items():
            out[m + n] = out.get(m + n, Fraction(0)) + c * d
    return out


def test_monomial_and_coefficient():
    s = TruncatedLaurent.monomial(-2, QQ(3, 4))
    assert s.val == -2
    assert s.coefficient(-2) == QQ(3, 4)
    assert s.coefficient(5) == 0
    assert s.is_exact()


def test_coefficient_beyond_order_raises():
    s = TruncatedLaurent.monomial(0, 1, order=5)
    assert s.coefficient(4) == 0
    with pytest.raises(InsufficientPrecision):
        s.coefficient(5)


def test_add_mul_match_fraction_oracle():
    rng = random.Random(11)
    for _ in range(120):
        da = {m: Fraction(rng.randrange(-9, 10), rng.choice([1, 2, 3]))
              for m in rng.sample(range(-4, 7), rng.randrange(0, 5))}
        db = {m: Fraction(rng.randrange(-9, 10), rng.choice([1, 2, 3]))
              for m in rng.sample(range(-4, 7), rng.randrange(0, 5))}
        a = from_dict({m: QQ(c.numerator, c.denominator) for m, c in da.items()})
        b = from_dict({m: QQ(c.numerator, c.denominator) for m, c in db.items()})
        s = a + b
        p = a * b
        for m in range(-9, 14):
            want = da.get(m, Fraction(0)) + db.get(m, Fraction(0))
            assert s.coefficient(m) == QQ(want.numerator, want.denominator)
        dp = oracle_mul(da, db)
        for m in range(-9, 14):
            want = dp.get(m, Fraction(0))
            assert p.coefficient(m) == QQ(want.numerator, want.denominator)


def test_order_tracking_through_mixing():
    a = TruncatedLaurent.monomial(0, 1, order=5)
    b = TruncatedLaurent.monomial(-2, 1)
    assert (a + b).order == 5
    assert (a * b).order == 3
    assert a.shift(4).order == 9
    assert a.truncate(3).order == 3
    assert a.truncate(9).order == 5


def test_known_window_only_on_truncate():
    full = from_dict({0: QQ(1), 1: QQ(7), 2: QQ(9)})
    cut = full.truncate(2)
    assert cut.coefficient(1) == 7
    with pytest.raises(InsufficientPrecision):
        cut.coefficient(2)


def test_invert_round_trip():
    rng = random.Random(12)
    for _ in range(40):
        s = rand_series(rng, order=12)
        if s.is_zero():
            continue
        inv = s.invert()
        prod = s * inv
        assert prod.coefficient(0) == 1
        for m in range(1, prod.order if prod.order < ORDER_INF else 8):
            assert prod.coefficient(m) == 0


def test_invert_exact_monomial_stays_exact():
    s = TruncatedLaurent.monomial(3, QQ(2))
    inv = s.invert()
    assert inv.is_exact()
    assert inv.coefficient(-3) == QQ(1, 2)


def test_invert_zero_raises():
    with pytest.raises(ZeroInverse):
        TruncatedLaurent.zero(5).invert()


def test_delta_and_antiderivative_inverse():
    rng = random.Random(13)
    for _ in range(40):
        s = rand_series(rng)
        d = s.delta()
        for m in range(-8, 10):
            assert d.coefficient(m) == m * s.coefficient(m)
        body = TruncatedLaurent.from_terms(
            [(m, c) for m, c in s.support() if m != 0], s.order)
        back = body.antiderivative_nonconstant().delta()
        assert back == body


def test_split_at_zero():
    s = from_dict({-2: QQ(5), 0: QQ(3), 4: QQ(-1)})
    pos, neg = s.split_at_zero()
    assert seq(neg, -2, 0) == [QQ(5), QQ(0)]
    assert pos.coefficient(0) == 3
    assert pos.coefficient(4) == -1
    assert neg.is_exact()
    assert neg + pos == s


def test_agrees_respects_windows():
    a = from_dict({0: QQ(1), 1: QQ(2)}, order=2)
    b = from_dict({0: QQ(1), 1: QQ(2), 2: QQ(9)})
    assert a.agrees(b)
    assert b.agrees(a)
    assert not b.agrees(from_dict({0: QQ(1), 1: QQ(3)}))
    assert a.agrees(b, upto=2)


def test_text_rendering():
    s = from_dict({-1: QQ(1), 0: QQ(744)}, order=1)
    assert s.text() == "q^-1 + 744 + O(q)"
    s2 = from_dict({0: QQ(1), 1: QQ(240), 2: QQ(2160)}, order=3)
    assert s2.text() == "1 + 240*q + 2160*q^2 + O(q^3)"
    assert TruncatedLaurent.zero().text() == "0"


def test_json_round_trip():
    s = from_dict({-2: QQ(3, 7), 5: QQ(-1)}, order=9)
    back = TruncatedLaurent.from_json(s.to_json())
    assert back == s


def test_a_element_delta_antiderivative():
    rng = random.Random(14)
    for _ in range(30):
        parts = [rand_series(rng, -3, 5) for _ in range(rng.randrange(1, 4))]
        a = AElement(parts)
        assert a.antiderivative().delta() == a
        # t^i integrates to t^(i+1)/(i+1) on constants
    c = AElement.t_power(2, QQ(6))
    assert c.antiderivative() == AElement.t_power(3, QQ(2))


def test_a_element_product_degree_and_values():
    t = AElement.t_power(1)
    s = AElement.from_series(TruncatedLaurent.monomial(2, QQ(3)))
    p = (t + s) * (t - s)
    assert p.degree() == 2
    assert p.coefficient(2) == TruncatedLaurent.one()
    assert p.coefficient(0).coefficient(4) == -9
    assert p.coefficient(1).is_zero()
