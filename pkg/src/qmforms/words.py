"""Shuffle algebra on words over an ordered alphabet of series-valued letters.

Words span the shuffle algebra over exact scalars (or truncated q-series
coefficients); Lyndon words are generated by Duval's algorithm and give a
polynomial basis via Radford's theorem, extracted here by eliminating the
lexicographically maximal word through the triangularity of shuffle powers
of the Chen-Fox-Lyndon factorization.  Letters may carry values (scalars,
series, or modular objects), in which case words evaluate to renormalized
iterated primitives.
"""

import math

from .errors import InsufficientPrecision, ParseError, UnknownName
from .integrals import RenormEngine, required_input_order
from .rational import QQ, is_scalar, qq
from .series import AElement, TruncatedLaurent


class Letter:
    """A registered alphabet symbol, ordered by its rank in the registry."""

    __slots__ = ("name", "rank", "value", "_ser", "_ser_order")

    def __init__(self, name, rank, value=None):
        self.name = name
        self.rank = rank
        self.value = value
        self._ser = None
        self._ser_order = None

    def series(self, order):
        """The letter's value as a Laurent series good through q^order."""
        if self.value is None:
            raise UnknownName("letter %s has no registered value" % self.name)
        if is_scalar(self.value):
            return TruncatedLaurent.monomial(0, qq(self.value))
        if isinstance(self.value, TruncatedLaurent):
            return self.value.truncate(order)
        # modular / quasimodular objects; grow geometrically, reuse downward
        if self._ser is None or self._ser_order < order:
            new_order = order if self._ser is None else max(order, 2 * self._ser_order)
            self._ser = self.value.expand(new_order)
            self._ser_order = new_order
        return self._ser.truncate(order)

    def __lt__(self, other):
        return self.rank < other.rank

    def __le__(self, other):
        return self.rank <= other.rank

    def __gt__(self, other):
        return self.rank > other.rank

    def __ge__(self, other):
        return self.rank >= other.rank

    def __repr__(self):
        return "Letter(%r)" % self.name


class LetterRegistry:
    """Append-only collection of letters with a strict total order.

    Ranks default to registration order; explicit ranks let callers impose
    a different order, as long as it stays total (no duplicates).
    """

    def __init__(self):
        self._by_name = {}
        self._ranks = set()

    def register(self, name, value=None, rank=None):
        if name in self._by_name:
            raise ValueError("letter %r is already registered" % name)
        if rank is None:
            rank = len(self._by_name)
        if rank in self._ranks:
            raise ValueError("rank %r is already taken" % rank)
        ell = Letter(name, rank, value)
        self._by_name[name] = ell
        self._ranks.add(rank)
        return ell

    def letter(self, name):
        got = self._by_name.get(name)
        if got is None:
            raise UnknownName("unregistered letter %r" % name)
        return got

    __getitem__ = letter

    def __contains__(self, name):
        return name in self._by_name

    def __len__(self):
        return len(self._by_name)

    def alphabet(self):
        """All letters in rank order."""
        return sorted(self._by_name.values(), key=lambda ell: ell.rank)

    def word(self, names):
        return Word([self.letter(n) for n in names])

    def parse_word(self, text):
        """Parse "[a|b|c]" ("[]" for the empty word) over registered names."""
        s = text.strip()
        if not s.startswith("[") or not s.endswith("]"):
            raise ParseError("word must be bracketed like [a|b]", col=1)
        inner = s[1:-1].strip()
        if not inner:
            return Word(())
        return self.word(part.strip() for part in inner.split("|"))


class Word:
    """A finite sequence of letters; the lexicographic order extends ranks."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters=()):
        self.letters = tuple(letters)
        self._hash = None

    def __len__(self):
        return len(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.letters[i])
        return self.letters[i]

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other):
        return Word(self.letters + other.letters)

    def _key(self):
        return tuple(ell.rank for ell in self.letters)

    def __lt__(self, other):
        return self._key() < other._key()

    def __le__(self, other):
        return self._key() <= other._key()

    def __gt__(self, other):
        return self._key() > other._key()

    def __ge__(self, other):
        return self._key() >= other._key()

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self.letters == other.letters

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def text(self):
        return "[%s]" % "|".join(ell.name for ell in self.letters)

    def to_json(self):
        return [ell.name for ell in self.letters]

    def __repr__(self):
        return "Word(%s)" % self.text()


def _is_zero_coeff(c):
    # a series with no visible terms counts as zero: keeping it would
    # block exact cancellation (x - x) for truncated coefficients
    if isinstance(c, TruncatedLaurent):
        return c.is_zero()
    return not c


def _as_coeff(c):
    if isinstance(c, TruncatedLaurent):
        return c
    return qq(c)


class ShuffleElement:
    """A finite linear combination of words; zero coefficients are dropped.

    Coefficients are exact rationals by default; truncated q-series are
    accepted too, standing in for rational functions of q evaluated to a
    finite order.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        data = dict(terms) if not isinstance(terms, dict) else terms
        self.terms = {w: _as_coeff(c) for w, c in data.items()
                      if not _is_zero_coeff(c)}

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def unit(cls):
        return cls({Word(()): QQ(1)})

    @classmethod
    def from_word(cls, w, c=1):
        if not isinstance(w, Word):
            w = Word(w)
        return cls({w: c})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _coerce(self, other):
        if isinstance(other, ShuffleElement):
            return other
        if isinstance(other, Word):
            return ShuffleElement.from_word(other)
        if is_scalar(other) or isinstance(other, TruncatedLaurent):
            return ShuffleElement({Word(()): other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            got = out.get(w)
            out[w] = c if got is None else got + c
        return ShuffleElement(out)

    __radd__ = __add__

    def __neg__(self):
        return ShuffleElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        """Coefficient scaling; use shuffle_product for the ring product."""
        if not (is_scalar(c) or isinstance(c, TruncatedLaurent)):
            return NotImplemented
        return ShuffleElement({w: x * c for w, x in self.terms.items()})

    __rmul__ = __mul__

    def shuffle(self, other):
        return shuffle_product(self, other)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _ordered(self):
        return sorted(self.terms.items(), key=lambda wc: wc[0]._key())

    def text(self):
        if not self.terms:
            return "0"
        return " + ".join("%s*%s" % (c, w.text()) for w, c in self._ordered())

    def to_json(self):
        return [{"word": w.to_json(), "coefficient": _coeff_json(c)}
                for w, c in self._ordered()]

    def __repr__(self):
        return "ShuffleElement(%s)" % self.text()


def _coeff_json(c):
    if isinstance(c, TruncatedLaurent):
        return c.to_json()
    return str(c)


# ---------------------------------------------------------------------------
# shuffle product

_SHUFFLE_CACHE = {}


def _shuffle_tuples(u, v):
    """Interleavings of two letter tuples with multiplicities."""
    if not u or not v:
        return {u + v: 1}
    if (len(v), v) < (len(u), u):
        u, v = v, u
    got = _SHUFFLE_CACHE.get((u, v))
    if got is None:
        got = {}
        for w, m in _shuffle_tuples(u[:-1], v).items():
            key = w + (u[-1],)
            got[key] = got.get(key, 0) + m
        for w, m in _shuffle_tuples(u, v[:-1]).items():
            key = w + (v[-1],)
            got[key] = got.get(key, 0) + m
        if len(_SHUFFLE_CACHE) > 8192:
            _SHUFFLE_CACHE.clear()
        _SHUFFLE_CACHE[(u, v)] = got
    return got


def shuffle_product(a, b):
    """Bilinear extension of the word shuffle; the empty word is the unit."""
    if isinstance(a, Word):
        a = ShuffleElement.from_word(a)
    if isinstance(b, Word):
        b = ShuffleElement.from_word(b)
    terms = {}
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            c = ca * cb
            for t, m in _shuffle_tuples(wa.letters, wb.letters).items():
                w = Word(t)
                got = terms.get(w)
                add = c * m
                terms[w] = add if got is None else got + add
    return ShuffleElement(terms)


# ---------------------------------------------------------------------------
# Lyndon words

def _alphabet_list(alphabet):
    if isinstance(alphabet, LetterRegistry):
        return alphabet.alphabet()
    return sorted(alphabet, key=lambda ell: ell.rank)


def lyndon_words(alphabet, max_len):
    """All Lyndon words of length <= max_len in lexicographic order.

    Duval's generation: extend the current word periodically to max_len,
    then increment the last non-maximal letter.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    letters = _alphabet_list(alphabet)
    k = len(letters)
    if not k:
        return []
    out = []
    w = [0]
    while w:
        out.append(Word(letters[i] for i in w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
        if w:
            w[-1] += 1
    return out


def is_lyndon(w):
    """Whether w is nonempty and smaller than all its proper suffixes."""
    t = w.letters if isinstance(w, Word) else tuple(w)
    t = tuple(ell.rank for ell in t)
    if not t:
        return False
    return all(t < t[i:] for i in range(1, len(t)))


def lyndon_factorization(w):
    """Chen-Fox-Lyndon: w as a non-increasing product of Lyndon words."""
    t = w.letters if isinstance(w, Word) else tuple(w)
    out = []
    k, n = 0, len(t)
    while k < n:
        i, j = k, k + 1
        while j < n and t[i] <= t[j]:
            i = k if t[i] < t[j] else i + 1
            j += 1
        step = j - i
        while k <= i:
            out.append(Word(t[k:k + step]))
            k += step
    return out


# ---------------------------------------------------------------------------
# Radford decomposition

class LyndonPolynomial:
    """A polynomial in Lyndon words under the shuffle product.

    Terms map monomials (tuples of (lyndon word, exponent), decreasing by
    word) to coefficients; expand() multiplies everything back out.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        data = dict(terms) if not isinstance(terms, dict) else terms
        self.terms = {m: _as_coeff(c) for m, c in data.items()
                      if not _is_zero_coeff(c)}

    def is_zero(self):
        return not self.terms

    def expand(self):
        """Multiply the monomials out as shuffle products of Lyndon powers."""
        total = ShuffleElement.zero()
        for mono, c in self.terms.items():
            acc = ShuffleElement.unit()
            for w, e in mono:
                f = ShuffleElement.from_word(w)
                for _ in range(e):
                    acc = shuffle_product(acc, f)
            total = total + acc * c
        return total

    def __eq__(self, other):
        if not isinstance(other, LyndonPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _ordered(self):
        return sorted(self.terms.items(),
                      key=lambda mc: sorted((w._key(), e) for w, e in mc[0]))

    def text(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self._ordered():
            body = "".join("(%s)" % "|".join(ell.name for ell in w)
                           + ("^%d" % e if e > 1 else "")
                           for w, e in mono) or "1"
            parts.append("%s*%s" % (c, body))
        return " + ".join(parts)

    def to_json(self):
        return [{"monomial": {w.text(): e for w, e in mono},
                 "coefficient": _coeff_json(c)}
                for mono, c in self._ordered()]

    def __repr__(self):
        return "LyndonPolynomial(%s)" % self.text()


def _monomial_of(w):
    """Group the CFL factorization into (lyndon word, exponent) pairs."""
    pairs = []
    for f in lyndon_factorization(w):
        if pairs and pairs[-1][0] == f:
            pairs[-1] = (f, pairs[-1][1] + 1)
        else:
            pairs.append((f, 1))
    return tuple(pairs)


def radford_decompose(x):
    """Write x uniquely as a polynomial in Lyndon words.

    Pivot on the lexicographically maximal remaining word w: the shuffle
    product of the Lyndon powers in its CFL factorization equals
    (prod of factorial exponents) * w plus same-length words smaller than
    w, so subtracting the scaled product removes w for good.
    """
    if isinstance(x, Word):
        x = ShuffleElement.from_word(x)
    rem = dict(x.terms)
    out = {}
    while rem:
        w = max(rem, key=Word._key)
        c = rem[w]
        if len(w) == 0:
            out[()] = c
            del rem[w]
            continue
        mono = _monomial_of(w)
        denom = math.prod(math.factorial(e) for _, e in mono)
        coeff = c * QQ(1, denom)
        out[mono] = coeff
        # the correction contains w itself with coefficient exactly c
        correction = LyndonPolynomial({mono: coeff}).expand()
        for v, cv in correction.terms.items():
            got = rem.get(v)
            got = -cv if got is None else got - cv
            if _is_zero_coeff(got):
                rem.pop(v, None)
            else:
                rem[v] = got
    return LyndonPolynomial(out)


# ---------------------------------------------------------------------------
# evaluation as iterated primitives

_EVAL_ENGINE = None


def shared_engine():
    """A module-wide engine so evaluations reuse word caches."""
    global _EVAL_ENGINE
    if _EVAL_ENGINE is None:
        _EVAL_ENGINE = RenormEngine()
    return _EVAL_ENGINE


def eval_words(x, order, engine=None):
    """Evaluate a word combination as renormalized iterated primitives.

    Linear in x: each word [f_1|..|f_n] maps to I(f_1, .., f_n) and the
    empty word to 1.  Letter values are expanded only as far as the word's
    pole depths require for the result to be guaranteed through q^order.
    """
    if engine is None:
        engine = shared_engine()
    if isinstance(x, Word):
        x = ShuffleElement.from_word(x)
    total = AElement.zero()
    for word, c in x.terms.items():
        if len(word) == 0:
            val = AElement.one()
        else:
            fs = [ell.series(order) for ell in word.letters]
            need = required_input_order(fs, order)
            if need > order:
                fs = [ell.series(need) for ell in word.letters]
            val = engine.iter_primitive(fs)
        if isinstance(c, TruncatedLaurent):
            val = val * c
        else:
            val = val.scale(c)
        total = total + val
    if total.min_order() < order:
        raise InsufficientPrecision(
            "evaluation only guaranteed through q^%d, wanted q^%d"
            % (total.min_order(), order))
    return total.truncate(order)
