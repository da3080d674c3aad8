"""Renormalized iterated primitives of Laurent series.

The single renormalized primitive of f is I(f) = F - F(0) where F is the
antiderivative with delta(t) = 1 lifting constants into t.  Iterated
primitives of words with negative-order letters are defined through the
two-variable regularization: the plain iterated construction is carried
out over C((q, eps))[t, t_eps] with evaluation at (q, t) = (eps, t_eps)
subtracted at each step, the result is split into eps-degree >= 0 and < 0
parts (a multiplicative Birkhoff-style factorization), and I(f_1..f_n) is
the coefficient of eps^0 t_eps^0 in the plus part.

The engine keeps everything in a separable form: sums of products
u(q, t) * v(eps, t_eps), with both factors stored as one-variable algebra
elements.  This keeps the cost per word near the size of the final
answer.  The minus parts are q,t-free (they collapse to pure eps series);
with verify_minus the engine checks that identity on every word it
processes and raises NotConstantDifference on failure.
"""

import itertools
import math
from collections import namedtuple

from .bivariate import AEpsElement, BiLaurent
from .errors import NotConstantDifference, NotHolomorphic, SingularSystem
from .linalg import solve as linalg_solve
from .rational import QQ, is_scalar, qq
from .series import ORDER_INF, AElement, TruncatedLaurent

_ZERO = QQ(0)

BirkhoffSplit = namedtuple("BirkhoffSplit", ["i_plus", "i_minus"])
ShuffleReport = namedtuple("ShuffleReport", ["equal", "q_order", "n_shuffles"])


def _as_integrand(f):
    if isinstance(f, AElement):
        return f
    if isinstance(f, TruncatedLaurent):
        return AElement.from_series(f)
    if is_scalar(f):
        return AElement.from_series(TruncatedLaurent.monomial(0, qq(f)))
    raise TypeError("cannot use %r as an integrand" % (f,))


def _word(fs):
    return tuple(_as_integrand(f) for f in fs)


def _min_val(f):
    """Guaranteed lower bound for the q-support of an integrand."""
    vals = [s.val for s in f.tc if not (s.is_zero() and s.is_exact())]
    return min(vals) if vals else 0


def required_input_order(fs, target_order):
    """Input q-order guaranteeing the iterated primitive through q^target.

    Each letter below order zero can shift contributions upward when it
    multiplies a deep tail, and each renormalization step consumes one
    more coefficient; target + sum of pole depths + length is enough.
    """
    word = _word(fs)
    depth = sum(max(0, -_min_val(f)) for f in word)
    return target_order + depth + len(word)


def _split_v(v):
    """Split an eps-side element by sign of the eps exponent."""
    plus = []
    minus = []
    for s in v.tc:
        p, m = s.split_at_zero()
        plus.append(p)
        minus.append(m)
    return AElement(plus), AElement(minus)


def _pair_to_aeps(u, v):
    """Materialize u(q, t) * v(eps, t_eps) as an explicit AEpsElement."""
    cells = {}
    for i, su in enumerate(u.tc):
        if su.is_zero() and su.is_exact():
            continue
        for j, sv in enumerate(v.tc):
            if sv.is_zero() and sv.is_exact():
                continue
            terms = {}
            for m, cm in su.support():
                for n, cn in sv.support():
                    terms[(m, n)] = cm * cn
            cell = BiLaurent(terms, q_order=su.order, eps_order=sv.order,
                             q_tail=su.val, eps_tail=sv.val)
            old = cells.get((i, j))
            cells[(i, j)] = cell if old is None else old + cell
    return AEpsElement(cells)


def _pairs_to_aeps(pairs):
    out = AEpsElement.zero()
    for u, v in pairs:
        out = out + _pair_to_aeps(u, v)
    return out


def qt_free(x):
    """True if an AEpsElement has no visible q or t content."""
    for (i, _j), b in x.coeffs.items():
        if i != 0:
            return False
        if any(m != 0 for m, _n in b.terms):
            return False
    return True


class RenormEngine:
    """Shared-cache evaluator for renormalized iterated primitives.

    Words are tuples of algebra elements; all caches key on them, so
    reusing one engine across many words shares every common suffix and
    prefix.  verify_minus=True (the default) re-checks on every word that
    the minus part of the factorization is q,t-free, which is the
    correctness certificate for the collapsed representation; switch it
    off for bulk runs where an outer identity is being verified anyway.
    """

    # tensors for words up to this length stay cached; longer words are
    # rebuilt from their longest cached suffix on demand
    TENSOR_CACHE_MAXLEN = 3

    def __init__(self, verify_minus=True):
        self.verify_minus = verify_minus
        self._eps_cache = {}
        self._minus_cache = {}
        self._prim_cache = {}

    # -- the eps-regularized iterated primitive, as separable pairs

    def _eps_pairs(self, word):
        if not word:
            one = AElement.one()
            return [(one, one)]
        cached = self._eps_cache.get(word)
        if cached is not None:
            return cached
        inner = self._eps_pairs(word[1:])
        f = word[0]
        lifted = [((f * u).antiderivative(), v) for u, v in inner]
        at_eps = AElement.zero()
        for u, v in lifted:
            at_eps = at_eps + u * v
        pairs = lifted + [(AElement.one(), -at_eps)]
        if len(word) <= self.TENSOR_CACHE_MAXLEN:
            self._eps_cache[word] = pairs
        return pairs

    # -- factorization

    def _cross_pairs(self, word):
        """Pairs of I_eps(word) plus the prefix/suffix counterterms."""
        pairs = list(self._eps_pairs(word))
        for i in range(1, len(word)):
            w = self._minus_v(word[i:])
            if w.is_zero() and w.is_exact():
                continue
            pairs.extend((u, v * w) for u, v in self._eps_pairs(word[:i]))
        return pairs

    def _minus_v(self, word):
        """eps-side value of the minus part; q,t-freeness makes it total."""
        got = self._minus_cache.get(word)
        if got is None:
            acc = AElement.zero()
            residual = []
            for u, v in self._cross_pairs(word):
                vm = _split_v(v)[1]
                if vm.is_zero() and vm.is_exact():
                    continue
                c = u.ev0()
                if c:
                    acc = acc + vm.scale(c)
                if self.verify_minus:
                    residual.append((u - c if c else u, vm))
            if self.verify_minus:
                _assert_vanishes(residual, word)
            got = -acc
            self._minus_cache[word] = got
        return got

    def iter_eps(self, fs):
        """The eps-regularized iterated primitive, materialized."""
        return _pairs_to_aeps(self._eps_pairs(_word(fs)))

    def birkhoff(self, fs):
        """Materialized plus/minus factors; i_minus is q,t-free."""
        word = _word(fs)
        plus = []
        minus = []
        for u, v in self._cross_pairs(word):
            vp, vm = _split_v(v)
            if not (vp.is_zero() and vp.is_exact()):
                plus.append((u, vp))
            if not (vm.is_zero() and vm.is_exact()):
                minus.append((u, -vm))
        return BirkhoffSplit(_pairs_to_aeps(plus), _pairs_to_aeps(minus))

    def iter_primitive(self, fs):
        """The renormalized iterated primitive I(f_1, .., f_n).

        Extracts the eps^0 t_eps^0 coefficient of the plus part; the
        minus part has only negative eps powers, so the projection can
        skip the split.
        """
        word = _word(fs)
        got = self._prim_cache.get(word)
        if got is None:
            got = AElement.zero()
            for u, v in self._cross_pairs(word):
                c = v.ev0()
                if c:
                    got = got + u.scale(c)
            self._prim_cache[word] = got
        return got


def _assert_vanishes(pairs, word):
    """Check that a separable residual is identically zero where known."""
    cells = {}
    for u, v in pairs:
        for i, su in enumerate(u.tc):
            if su.is_zero() and su.is_exact():
                continue
            for j, sv in enumerate(v.tc):
                if sv.is_zero() and sv.is_exact():
                    continue
                d = cells.setdefault((i, j), {})
                for m, cm in su.support():
                    for n, cn in sv.support():
                        key = (m, n)
                        d[key] = d.get(key, _ZERO) + cm * cn
    for d in cells.values():
        if any(d.values()):
            raise NotConstantDifference(
                "minus part of the factorization is not q,t-free for a "
                "word of length %d" % len(word))


# ---------------------------------------------------------------------------
# module-level entry points; pass engine= to share caches across calls


def primitive_I(f):
    """Single renormalized primitive I(f) = F - F(0)."""
    g = _as_integrand(f)
    big_f = g.antiderivative()
    return big_f - big_f.ev0()


def iter_primitive(fs, engine=None):
    if engine is None:
        engine = RenormEngine()
    return engine.iter_primitive(fs)


def iter_eps(fs, engine=None):
    if engine is None:
        engine = RenormEngine()
    return engine.iter_eps(fs)


def birkhoff(fs, engine=None):
    if engine is None:
        engine = RenormEngine()
    return engine.birkhoff(fs)


def iter_primitive_holo(fs):
    """Plain nested primitives; requires every letter to be pole-free."""
    word = _word(fs)
    for f in word:
        if _min_val(f) < 0:
            raise NotHolomorphic(
                "letter with a pole at q = 0; use iter_primitive")
    acc = AElement.one()
    for f in reversed(word):
        acc = primitive_I(f * acc)
    return acc


def r_fold_primitive(f, r):
    """I^r(f) for a t-free f in closed form.

    The q^m coefficient picks up 1/m^r and the constant coefficient a_0
    becomes a_0 t^r / r!.
    """
    if r < 0:
        raise ValueError("negative iteration count")
    g = _as_integrand(f)
    if g.degree() > 0:
        raise ValueError("r_fold_primitive needs a t-free integrand")
    if r == 0:
        return g
    s = g.coefficient(0)
    a0 = s.coefficient(0)
    tail = TruncatedLaurent.from_terms(
        [(m, c / QQ(m) ** r) for m, c in s.support() if m != 0], s.order)
    parts = [tail] + [TruncatedLaurent.zero()] * (r - 1)
    parts.append(TruncatedLaurent.monomial(0, a0 / math.factorial(r)))
    return AElement(parts)


def _known_constant(x):
    """The constant term of an algebra element that must be constant.

    Raises NotConstantDifference if any known coefficient contradicts
    constancy.
    """
    for i in range(1, x.degree() + 1):
        s = x.coefficient(i)
        if any(c for _m, c in s.support()):
            raise NotConstantDifference("difference depends on t")
    s = x.coefficient(0)
    if any(c for m, c in s.support() if m != 0):
        raise NotConstantDifference("difference depends on q")
    return s.coefficient(0)


def _match_combination(target, basis):
    """Exact coefficients x with sum x_j basis_j = target, else None."""
    max_deg = max([target.degree()] + [b.degree() for b in basis])
    hi = min([target.min_order()] + [b.min_order() for b in basis])
    los = [s.val for b in basis for s in b.tc] + [s.val for s in target.tc]
    lo = min(los) if los else 0
    if hi >= ORDER_INF:
        # everything exact: the joint support is finite
        tops = [m for b in basis for s in b.tc for m, _ in s.support()]
        tops += [m for s in target.tc for m, _ in s.support()]
        hi = max(tops) + 1 if tops else lo + 1
    if hi <= lo:
        return None
    rows = []
    rhs = []
    for i in range(max_deg + 1):
        for m in range(lo, hi):
            rows.append([b.coefficient(i).coefficient(m) for b in basis])
            rhs.append(target.coefficient(i).coefficient(m))
    return linalg_solve(rows, rhs)


def ibp_constants(fs, slot, g, engine=None):
    """Integration-by-parts constants for a derivative letter.

    fs[slot-1] must equal delta(g).  Returns the constants of the
    rewriting of I(f_1, .., delta(g), .., f_n) in terms of words
    without the derivative letter, one per proper prefix shorter than
    the slot, ordered by prefix length 0, 1, ..; for slot 1 that is a
    single constant, and for n = 1 the list is empty (the identity
    I(delta g) = g - c is verified directly).
    """
    if engine is None:
        engine = RenormEngine()
    word = list(_word(fs))
    n = len(word)
    if not 1 <= slot <= n:
        raise ValueError("slot out of range")
    gg = _as_integrand(g)
    if not word[slot - 1].agrees(gg.delta()):
        raise ValueError("fs[slot-1] does not match delta(g)")
    if n == 1:
        diff = gg - engine.iter_primitive(word)
        _known_constant(diff)
        return []
    if slot == 1:
        # I(dg, f2..) = g I(f2..) - I(g f2, f3..) + c1
        lhs = engine.iter_primitive(word)
        rest = word[1:]
        merged = [gg * word[1]] + word[2:]
        diff = lhs - gg * engine.iter_primitive(rest) \
            + engine.iter_primitive(merged)
        return [_known_constant(diff)]
    # the residual after merging lies in the span of the primitives of
    # the proper prefixes shorter than the derivative slot, constants
    # included; returned constants are ordered by prefix length 0, 1, ..
    if slot == n:
        # I(f1.., dg) = I(f1.., f_{n-1} g) + sum_m c_m I(f1..fm)
        merged = word[:n - 2] + [word[n - 2] * gg]
        diff = engine.iter_primitive(word) - engine.iter_primitive(merged)
        basis = [engine.iter_primitive(word[:m]) for m in range(n)]
    else:
        i = slot
        # I(.., dg, ..) = I(.., f_{i-1} g, ..) - I(.., g f_{i+1}, ..)
        #                 + sum_m c_m I(f1..fm)
        left = word[:i - 2] + [word[i - 2] * gg] + word[i:]
        right = word[:i - 1] + [gg * word[i]] + word[i + 1:]
        diff = engine.iter_primitive(word) \
            - engine.iter_primitive(left) + engine.iter_primitive(right)
        basis = [engine.iter_primitive(word[:m]) for m in range(i)]
    coeffs = _match_combination(diff, basis)
    if coeffs is None:
        raise SingularSystem("no exact constants match the identity")
    return coeffs


def verify_shuffle(fs, m, engine=None):
    """Check I(w[:m]) I(w[m:]) against the sum over interleavings."""
    if engine is None:
        engine = RenormEngine()
    word = _word(fs)
    n = len(word)
    if not 0 <= m <= n:
        raise ValueError("split point out of range")
    lhs = engine.iter_primitive(word[:m]) * engine.iter_primitive(word[m:])
    rhs = AElement.zero()
    count = 0
    first, second = word[:m], word[m:]
    for spots in itertools.combinations(range(n), m):
        merged = [None] * n
        it = iter(first)
        for s in spots:
            merged[s] = next(it)
        it = iter(second)
        for k in range(n):
            if merged[k] is None:
                merged[k] = next(it)
        rhs = rhs + engine.iter_primitive(tuple(merged))
        count += 1
    order = min(lhs.min_order(), rhs.min_order())
    return ShuffleReport(lhs.agrees(rhs), order, count)
