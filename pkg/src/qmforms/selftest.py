"""End-to-end acceptance checks across every engine in the package.

Each check raises AssertionError with a readable message on any mismatch
and returns a one-line summary on success; run_all prints one PASS/FAIL
line per check.  The CLI selftest command and the acceptance test suite
both drive these, so the expected values live in exactly one place.
All comparisons are bit-exact; randomized checks draw from a seeded
generator and are deterministic for a fixed seed.
"""

import math
import random

from .bivariate import AEpsElement, BiLaurent
from .integrals import (
    RenormEngine,
    ibp_constants,
    iter_primitive_holo,
    qt_free,
    r_fold_primitive,
    verify_shuffle,
)
from .linalg import rank
from .modular import (
    DELTA_FORM,
    E4_FORM,
    E6_FORM,
    J_FORM,
    Divisor,
    MeroModForm,
    Point,
    basis_mk_d,
    dim_M,
    generator_series,
    u_for_point,
)
from .quasi import (
    QMForm,
    decompose_complement,
    dim_tildeM,
    independence_check,
    qm_delta,
    tilde_membership,
)
from .rational import QQ
from .series import AElement, TruncatedLaurent
from .words import LetterRegistry, Word, lyndon_words, radford_decompose, shuffle_product

DEFAULT_SEED = 20260814

_Q = TruncatedLaurent.monomial(1)
_QINV = TruncatedLaurent.monomial(-1)
_QINV2 = TruncatedLaurent.monomial(-2)


def _cell(c):
    return BiLaurent({(0, 0): QQ(c)})


def check_worked_example(seed, order):
    """Single and double primitives of q and 1/q, with their eps versions."""
    eng = RenormEngine()
    assert eng.iter_primitive([_QINV]) == AElement.from_series(
        TruncatedLaurent.monomial(-1, -1)), "I(1/q) != -1/q"
    assert eng.iter_primitive([_Q]) == AElement.from_series(_Q), "I(q) != q"
    want = AEpsElement({(1, 0): _cell(1), (0, 1): _cell(-1)})
    assert eng.iter_eps([1]) == want, "I_eps(1) != t - t_eps"
    want = AEpsElement({(1, 0): _cell(1), (0, 1): _cell(-1),
                        (0, 0): BiLaurent({(-1, 1): QQ(1), (0, 0): QQ(-1)})})
    assert eng.iter_eps([_QINV, _Q]) == want, "I_eps(1/q, q) mismatch"
    split = eng.birkhoff([_Q, _QINV])
    want = AEpsElement({(1, 0): _cell(-1), (0, 1): _cell(1)})
    assert split.i_plus == want, "I_plus(q, 1/q) != -t + t_eps"
    t_minus_1 = AElement((TruncatedLaurent.monomial(0, -1), TruncatedLaurent.one()))
    assert eng.iter_primitive([_QINV, _Q]) == t_minus_1, "I(1/q, q) != t - 1"
    minus_t = AElement((TruncatedLaurent.zero(), TruncatedLaurent.monomial(0, -1)))
    assert eng.iter_primitive([_Q, _QINV]) == minus_t, "I(q, 1/q) != -t"
    return "7 exact values"


def _pool_letters(order):
    """The six-letter series pool used by the shuffle and r-fold checks."""
    margin = order + 14
    return [
        TruncatedLaurent.one(),
        _Q,
        _QINV,
        _QINV2,
        E4_FORM.expand(margin),
        DELTA_FORM.invert().expand(margin),
    ]


def check_shuffle_identity(seed, order):
    """Products of primitives against sums over interleavings, all 2-splits."""
    letters = _pool_letters(order)
    eng = RenormEngine(verify_minus=False)
    words = [[]]
    checked = 0
    for _n in range(1, 5):
        words = [w + [f] for w in words for f in letters]
        for w in words:
            for m in range(1, len(w)):
                report = verify_shuffle(w, m, eng)
                assert report.equal, "shuffle identity failed"
                assert report.q_order >= order, "guaranteed order too low"
                checked += 1
    return "%d word splits at q-order %d" % (checked, order)


def _random_laurent(rng, min_val=-3):
    terms = []
    for _ in range(rng.randrange(1, 5)):
        m = rng.randrange(min_val, 6)
        c = QQ(rng.randrange(-6, 7), rng.choice([1, 1, 1, 2, 3]))
        if c:
            terms.append((m, c))
    if not terms:
        terms = [(1, QQ(1))]
    return TruncatedLaurent.from_terms(terms)


def check_delta_law(seed, order):
    """delta(I(f1..fn)) = f1 I(f2..fn), and the minus part is q,t-free."""
    rng = random.Random(seed)
    eng = RenormEngine()
    for _case in range(200):
        fs = [_random_laurent(rng) for _ in range(rng.randrange(1, 5))]
        full = eng.iter_primitive(fs)
        rest = eng.iter_primitive(fs[1:])
        lhs = full.delta()
        rhs = AElement.from_series(fs[0]) * rest
        assert lhs == rhs, "delta of the primitive disagrees"
        assert qt_free(eng.birkhoff(fs).i_minus), "minus part not q,t-free"
    return "200 seeded lists, exact"


def check_holomorphic(seed, order):
    """Pole-free words: zero minus part, plain nested primitives agree."""
    rng = random.Random(seed + 1)
    eng = RenormEngine()
    for _case in range(60):
        fs = [_random_laurent(rng, min_val=0) for _ in range(rng.randrange(1, 5))]
        renorm = eng.iter_primitive(fs)
        plain = iter_primitive_holo(fs)
        assert renorm == plain, "renormalized and plain primitives differ"
        minus = eng.birkhoff(fs).i_minus
        assert minus.is_zero(), "nonzero minus part"
    return "60 pole-free lists, exact"


def check_ibp_constant(seed, order):
    """The boundary constant in I(delta(q), 1/q) rewritten by parts."""
    consts = ibp_constants([_Q, _QINV], 1, _Q)
    assert consts == [QQ(1)], "constant is %r, wanted [1]" % (consts,)
    return "constant = 1"


def check_r_fold(seed, order):
    """Closed form of repeated primitives against the iterated engine."""
    eng = RenormEngine()
    checked = 0
    for f in _pool_letters(order):
        for r in range(1, 5):
            closed = r_fold_primitive(f, r)
            iterated = eng.iter_primitive([TruncatedLaurent.one()] * (r - 1) + [f])
            assert closed.agrees(iterated, upto=order), "closed form disagrees"
            checked += 1
    return "%d (letter, r) pairs" % checked


def _adjust_weight(f, w):
    """Scale a form into weight w by E4/E6 powers, keeping its pole shape."""
    need = w - f.weight
    while need % 4:
        f = f * E6_FORM if need > 0 else f / E6_FORM
        need = w - f.weight
    if need >= 0:
        return f * E4_FORM ** (need // 4)
    return f / E4_FORM ** (-need // 4)


def _bol_pool(k):
    base = [
        MeroModForm(1),
        J_FORM,
        DELTA_FORM.invert(),
        E4_FORM / DELTA_FORM,
        E4_FORM ** 2 * E6_FORM / DELTA_FORM ** 2,
    ]
    return [_adjust_weight(f, 2 - k) for f in base]


def check_bol(seed, order):
    """(k-1)-fold derivatives of weight 2-k forms stay free of E2."""
    total = 0
    for k in (2, 4, 6, 8, 12, 14):
        for g in _bol_pool(k):
            f = QMForm([g])
            for _ in range(k - 1):
                f = qm_delta(f)
            assert f.weight is None or f.weight == k
            for r in range(1, f.depth + 1):
                assert f.coefficient(r).is_zero(), \
                    "E2^%d coefficient survives at k=%d" % (r, k)
            total += 1
    return "%d (k, input) pairs, exact factored arithmetic" % total


_POINTS = (Point.INF, Point.I, Point.RHO, Point.rational_j(2))


def _random_mero(rng, w):
    f = MeroModForm(rng.choice([1, 2, -1, QQ(1, 3), 5]))
    for _ in range(rng.randrange(0, 5)):
        f = f / u_for_point(rng.choice(_POINTS))
    return _adjust_weight(f, w)


def check_decomposition(seed, order):
    """Random quasimodular forms reassemble from their three components."""
    rng = random.Random(seed)
    e2 = QMForm.e2()
    cases = 0
    while cases < 100:
        k = rng.choice([-4, -2, 0, 2, 4, 6, 8, 10, 12, 14, 16])
        depth = rng.randrange(0, 5)
        coeffs = [MeroModForm(0) if (rng.random() < 0.3 and r < depth)
                  else _random_mero(rng, k - 2 * r) for r in range(depth + 1)]
        f = QMForm(coeffs)
        if f.is_zero:
            continue
        g, cls = decompose_complement(f)
        back = qm_delta(g)
        if cls.m_part:
            back = back + e2 ** (f.weight - 1) * cls.m_part
        if cls.tilde_part:
            back = back + cls.tilde_part
        assert back == f, "decomposition does not reassemble"
        if f.weight >= 2 and cls.tilde_part:
            assert tilde_membership(cls.tilde_part, f.weight), \
                "tilde part outside its pole bounds"
        h = QMForm([_random_mero(rng, f.weight - 2)])
        g2, cls2 = decompose_complement(f + qm_delta(h))
        assert cls2.m_part == cls.m_part and cls2.tilde_part == cls.tilde_part, \
            "class changed under adding an exact derivative"
        cases += 1
    return "100 seeded round trips with class invariance"


def _independent_rows(forms, divisor):
    """Exact rank certificate for a list of forms via a shared q-window."""
    lo = min(f.v_infinity() for f in forms)
    hi = lo + len(forms) + 4
    rows = []
    for f in forms:
        s = f.expand(hi)
        rows.append([s.coefficient(m) for m in range(lo, hi)])
    return rank(rows)


def check_dimensions(seed, order):
    """Dimension formula against basis counts, and the divisor shift law."""
    supports = []
    pts = [Point.I, Point.RHO, Point.rational_j(2)]
    for mask in range(8):
        extra = [p for b, p in enumerate(pts) if mask >> b & 1]
        supports.append([Point.INF] + extra)
    for k in range(2, 25, 2):
        for sup in supports:
            formula, count = dim_tildeM(k, sup)
            assert formula == count, \
                "dim mismatch at k=%d support %r" % (k, sup)
    rng = random.Random(seed + 2)
    pool = _POINTS + (Point.rational_j(-1),)
    for _case in range(20):
        k = rng.randrange(0, 9) * 2
        entries = {}
        for p in pool:
            n = rng.randrange(0, 4)
            if n:
                entries[p] = n
        div = Divisor(entries)
        basis = basis_mk_d(k, div)
        twelve_deg = 12 * div.degree()
        assert twelve_deg.denominator == 1
        want = dim_M(k + int(twelve_deg))
        assert len(basis) == want, "basis count != shifted dimension"
        for f in basis:
            assert f.weight == k
            for p in f.pole_points():
                assert div.get(p) > 0, "pole outside the divisor support"
            for p, n in entries.items():
                assert f.valuation_at(p) >= -n, "valuation below the bound"
        if basis:
            assert _independent_rows(basis, div) == len(basis), \
                "basis rows not independent"
    return "96 support cases and 20 divisor instances"


def check_pole_family(seed, order):
    """Membership and joint independence of the three pole-shape forms."""
    f4a = DELTA_FORM / E4_FORM ** 2
    f4b = E4_FORM * DELTA_FORM / E6_FORM ** 2
    f6 = E6_FORM * DELTA_FORM / E4_FORM ** 3
    assert tilde_membership(f4a, 4), "Delta/E4^2 outside the weight-4 space"
    assert tilde_membership(f4b, 4), "E4*Delta/E6^2 outside the weight-4 space"
    assert tilde_membership(f6, 6), "E6*Delta/E4^3 outside the weight-6 space"
    report = independence_check([MeroModForm(1), f4a, f4b, f6])
    assert report["independent"] and report["rank"] == 4, \
        "rank %r, wanted 4" % (report["rank"],)
    return "3 memberships, rank 4 of 4"


def _necklaces(size, n):
    def mobius(d):
        out, p, m = 1, 2, d
        while p * p <= m:
            if m % p == 0:
                m //= p
                if m % p == 0:
                    return 0
                out = -out
            p += 1
        return -out if m > 1 else out
    return sum(mobius(d) * size ** (n // d) for d in range(1, n + 1)
               if n % d == 0) // n


def check_radford_lyndon(seed, order):
    """Radford round trips on short words and Lyndon counts by length."""
    reg = LetterRegistry()
    letters = [reg.register(c) for c in "abc"]
    trips = 0
    stack = [[]]
    for _n in range(4):
        stack = [w + [ell] for w in stack for ell in letters[:2]]
        for w in stack:
            word = Word(w)
            back = radford_decompose(word).expand()
            assert back.terms == {word: QQ(1)}, "round trip failed"
            trips += 1
    for size in (2, 3):
        found = lyndon_words(letters[:size], 6)
        for n in range(1, 7):
            got = sum(1 for w in found if len(w) == n)
            want = _necklaces(size, n)
            assert got == want, "count %d != %d at size %d length %d" \
                % (got, want, size, n)
    combo = shuffle_product(Word(letters[:2]), Word([letters[1], letters[0]]))
    assert radford_decompose(combo).expand() == combo, "combination round trip"
    return "%d word round trips, counts through length 6" % trips


def _sigma(n, p):
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += d ** p
    return total


def check_generators(seed, order):
    """Eisenstein coefficients against direct divisor sums; valence degrees."""
    n_terms = 200
    specs = (("E2", 1, -24), ("E4", 3, 240), ("E6", 5, -504))
    for name, p, scale in specs:
        series = generator_series(name, n_terms + 1)
        assert series.coefficient(0) == 1, "%s constant term" % name
        for n in range(1, n_terms + 1):
            want = QQ(scale * _sigma(n, p))
            assert series.coefficient(n) == want, \
                "%s coefficient of q^%d" % (name, n)
    pool = [
        E4_FORM, E6_FORM, DELTA_FORM, J_FORM,
        DELTA_FORM.invert(),
        E4_FORM / DELTA_FORM,
        E4_FORM ** 2 * E6_FORM / DELTA_FORM ** 2,
        DELTA_FORM / E4_FORM ** 2,
        E4_FORM * DELTA_FORM / E6_FORM ** 2,
        E6_FORM * DELTA_FORM / E4_FORM ** 3,
        u_for_point(Point.rational_j(2)),
        MeroModForm(1, rnum=(-2, 0, 1)),
    ]
    for k in (2, 4, 6, 8, 12, 14):
        pool.extend(_bol_pool(k))
    for f in pool:
        f.valence_check()
        assert 12 * f.divisor().degree() == f.weight, "valence degree off"
    return "3 generators through q^%d, %d valence degrees" % (n_terms, len(pool))


CHECKS = (
    ("01 worked example", check_worked_example),
    ("02 shuffle identity", check_shuffle_identity),
    ("03 derivative law / minus constancy", check_delta_law),
    ("04 holomorphic compatibility", check_holomorphic),
    ("05 integration-by-parts constant", check_ibp_constant),
    ("06 r-fold closed form", check_r_fold),
    ("07 higher derivatives stay modular", check_bol),
    ("08 decomposition round trip", check_decomposition),
    ("09 dimension formula", check_dimensions),
    ("10 pole family independence", check_pole_family),
    ("11 radford and lyndon counts", check_radford_lyndon),
    ("12 generator series oracle", check_generators),
)


def run_all(seed=DEFAULT_SEED, order=40, out=print):
    """Run every check; print one line each; True if everything passed."""
    all_ok = True
    for label, fn in CHECKS:
        try:
            detail = fn(seed, order)
            out("PASS  %s: %s" % (label, detail))
        except AssertionError as exc:
            all_ok = False
            out("FAIL  %s: %s" % (label, exc))
    return all_ok
