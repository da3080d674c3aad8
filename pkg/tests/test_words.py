"""Shuffle algebra, Lyndon words, Radford decomposition, word evaluation."""

import itertools
import random

import pytest
import sympy

from qmforms.rational import QQ
from qmforms.series import TruncatedLaurent, AElement
from qmforms.modular import E4_FORM
from qmforms.integrals import RenormEngine
from qmforms.words import (
    LetterRegistry,
    LyndonPolynomial,
    ShuffleElement,
    Word,
    eval_words,
    is_lyndon,
    lyndon_factorization,
    lyndon_words,
    radford_decompose,
    shuffle_product,
)
from qmforms.errors import InsufficientPrecision, ParseError, UnknownName


def abc_registry():
    reg = LetterRegistry()
    for name in "abc":
        reg.register(name)
    return reg


def random_element(rng, reg, max_len=3, n_terms=3):
    letters = reg.alphabet()
    out = ShuffleElement.zero()
    for _ in range(rng.randrange(1, n_terms + 1)):
        w = Word(rng.choice(letters) for _ in range(rng.randrange(0, max_len + 1)))
        c = QQ(rng.randrange(-5, 6), rng.choice([1, 2]))
        out = out + ShuffleElement.from_word(w, c)
    return out


def test_registry_and_words():
    reg = abc_registry()
    a, b = reg["a"], reg["b"]
    assert a < b and not b < a
    assert reg.word("ab").text() == "[a|b]"
    assert reg.parse_word(" [a|b] ") == reg.word("ab")
    assert reg.parse_word("[]") == Word(())
    assert len(reg.parse_word("[a]")) == 1
    assert "a" in reg and "z" not in reg
    with pytest.raises(ParseError):
        reg.parse_word("a|b")
    with pytest.raises(UnknownName):
        reg.parse_word("[a|z]")
    with pytest.raises(ValueError):
        reg.register("a")
    with pytest.raises(ValueError):
        reg.register("d", rank=0)
    # explicit ranks reorder the alphabet
    reg2 = LetterRegistry()
    hi = reg2.register("hi", rank=5)
    lo = reg2.register("lo", rank=1)
    assert reg2.alphabet() == [lo, hi]
    assert Word([lo]) < Word([lo, hi]) < Word([hi])


def test_shuffle_examples():
    reg = abc_registry()
    a = ShuffleElement.from_word(reg.word("a"))
    b = ShuffleElement.from_word(reg.word("b"))
    ab = ShuffleElement.from_word(reg.word("ab"))
    c = ShuffleElement.from_word(reg.word("c"))
    want = ShuffleElement.from_word(reg.word("ab")) \
        + ShuffleElement.from_word(reg.word("ba"))
    assert shuffle_product(a, b) == want
    want = (ShuffleElement.from_word(reg.word("abc"))
            + ShuffleElement.from_word(reg.word("acb"))
            + ShuffleElement.from_word(reg.word("cab")))
    assert shuffle_product(ab, c) == want
    assert shuffle_product(a, a) == ShuffleElement.from_word(reg.word("aa"), 2)
    # unit element
    assert shuffle_product(ShuffleElement.unit(), ab) == ab


def test_shuffle_commutative_associative():
    rng = random.Random(51)
    reg = abc_registry()
    for _ in range(15):
        x = random_element(rng, reg)
        y = random_element(rng, reg)
        z = random_element(rng, reg)
        assert shuffle_product(x, y) == shuffle_product(y, x)
        assert shuffle_product(shuffle_product(x, y), z) \
            == shuffle_product(x, shuffle_product(y, z))
        # bilinearity
        assert shuffle_product(x + y, z) \
            == shuffle_product(x, z) + shuffle_product(y, z)


def test_lyndon_generation():
    reg = abc_registry()
    ab = [reg["a"], reg["b"]]
    got = lyndon_words(ab, 3)
    want = [reg.word(s) for s in ("a", "aab", "ab", "abb", "b")]
    assert got == want
    assert got == sorted(got)
    assert lyndon_words([reg["a"]], 5) == [reg.word("a")]
    assert sum(1 for w in lyndon_words(ab, 3) if len(w) == 3) == 2
    with pytest.raises(ValueError):
        lyndon_words(ab, 0)
    # brute force cross-check at length <= 4
    got4 = set(lyndon_words(ab, 4))
    brute = set()
    for n in range(1, 5):
        for tup in itertools.product(ab, repeat=n):
            w = Word(tup)
            if is_lyndon(w):
                brute.add(w)
    assert got4 == brute


def test_necklace_counts():
    # Lyndon words of length n over s letters: (1/n) sum mobius(d) s^(n/d)
    for size, names in ((2, "ab"), (3, "abc")):
        reg = LetterRegistry()
        for name in names:
            reg.register(name)
        words = lyndon_words(reg.alphabet(), 6)
        for n in range(1, 7):
            want = sum(int(sympy.mobius(d)) * size ** (n // d)
                       for d in sympy.divisors(n)) // n
            assert sum(1 for w in words if len(w) == n) == want


def test_is_lyndon():
    reg = abc_registry()
    assert is_lyndon(reg.word("ab"))
    assert not is_lyndon(reg.word("ba"))
    assert not is_lyndon(Word(()))
    assert is_lyndon(reg.word("a"))
    assert not is_lyndon(reg.word("aa"))
    assert is_lyndon(reg.word("aabab"))


def test_lyndon_factorization():
    rng = random.Random(52)
    reg = abc_registry()
    assert lyndon_factorization(reg.word("bab")) \
        == [reg.word("b"), reg.word("ab")]
    assert lyndon_factorization(reg.word("abab")) \
        == [reg.word("ab"), reg.word("ab")]
    letters = reg.alphabet()
    for _ in range(30):
        w = Word(rng.choice(letters)
                 for _ in range(rng.randrange(0, 8)))
        factors = lyndon_factorization(w)
        assert all(is_lyndon(f) for f in factors)
        assert factors == sorted(factors, reverse=True)
        joined = Word(())
        for f in factors:
            joined = joined + f
        assert joined == w


def test_radford_examples():
    reg = abc_registry()
    a, b = reg.word("a"), reg.word("b")
    ab = reg.word("ab")
    # [a|a] = (1/2) (a)^shuffle-2
    got = radford_decompose(ShuffleElement.from_word(reg.word("aa")))
    assert got.terms == {((a, 2),): QQ(1, 2)}
    # Lyndon words are fixed
    got = radford_decompose(ShuffleElement.from_word(ab))
    assert got.terms == {((ab, 1),): QQ(1)}
    # [b|a] = (b)(a) - (ab)
    got = radford_decompose(ShuffleElement.from_word(reg.word("ba")))
    assert got.terms == {((b, 1), (a, 1)): QQ(1), ((ab, 1),): QQ(-1)}
    assert got.text() == "1*(b)(a) + -1*(a|b)"
    assert radford_decompose(ShuffleElement.zero()).is_zero()


def test_radford_round_trip():
    reg = abc_registry()
    letters = [reg["a"], reg["b"]]
    for n in range(0, 5):
        for tup in itertools.product(letters, repeat=n):
            w = Word(tup)
            x = ShuffleElement.from_word(w)
            assert radford_decompose(x).expand() == x
    # linear combinations with q-series coefficients round trip too
    rng = random.Random(53)
    q = TruncatedLaurent.monomial(1, order=12)
    x = ShuffleElement.from_word(reg.word("ba"), q) \
        + ShuffleElement.from_word(reg.word("abb"), QQ(3, 2)) \
        + ShuffleElement.from_word(Word(()), QQ(-1))
    assert radford_decompose(x).expand() == x
    for _ in range(10):
        x = random_element(rng, reg)
        assert radford_decompose(x).expand() == x


def test_lyndon_polynomial_json():
    reg = abc_registry()
    p = radford_decompose(ShuffleElement.from_word(reg.word("ba")))
    data = p.to_json()
    assert {"monomial": {"[a|b]": 1}, "coefficient": "-1"} in data
    assert {"monomial": {"[b]": 1, "[a]": 1}, "coefficient": "1"} in data


def eval_registry(order=40):
    reg = LetterRegistry()
    reg.register("one", 1)
    reg.register("q", TruncatedLaurent.monomial(1))
    reg.register("qinv", TruncatedLaurent.monomial(-1))
    reg.register("E4", E4_FORM)
    return reg


def test_eval_words_examples():
    reg = eval_registry()
    order = 20
    # empty word evaluates to 1
    assert eval_words(Word(()), order).agrees(AElement.one())
    # I(1/q) I(q) = -1, via the shuffle homomorphism
    x = shuffle_product(ShuffleElement.from_word(reg.word(["qinv"])),
                        ShuffleElement.from_word(reg.word(["q"])))
    got = eval_words(x, order)
    assert got.agrees(AElement.from_series(TruncatedLaurent.monomial(0, -1)))
    # I(1, q) = q: the double primitive divides by n^2
    got = eval_words(reg.word(["one", "q"]), order)
    assert got.agrees(AElement.from_series(TruncatedLaurent.monomial(1)))


def test_eval_words_homomorphism():
    rng = random.Random(54)
    reg = eval_registry()
    order = 14
    engine = RenormEngine()
    names = ["one", "q", "qinv", "E4"]
    for _ in range(8):
        u = Word(reg[n] for n in (rng.choice(names),))
        v = Word(reg[n] for n in (rng.choice(names), rng.choice(names)))
        lhs = eval_words(shuffle_product(
            ShuffleElement.from_word(u), ShuffleElement.from_word(v)),
            order, engine)
        rhs = eval_words(u, order, engine) * eval_words(v, order, engine)
        assert lhs.agrees(rhs)
        assert lhs.min_order() >= order


def test_eval_words_precision_guard():
    reg = LetterRegistry()
    short = TruncatedLaurent.from_terms([(-1, QQ(1))], 4)  # only good to q^4
    reg.register("f", short)
    with pytest.raises(InsufficientPrecision):
        eval_words(reg.word(["f", "f"]), 30)
    with pytest.raises(UnknownName):
        eval_words(Word((LetterRegistry().register("g"),)), 10)
