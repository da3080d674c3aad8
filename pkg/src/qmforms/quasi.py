"""Quasimodular forms and the constructive complement decomposition.

A quasimodular form is a polynomial in E2 with meromorphic modular
coefficients; weight k means the coefficient of E2^r has weight k - 2r.
The module implements the weight-raising derivative delta = q d/dq, the
transformation coefficient functions, and the exact decomposition

    f = delta(g) + m * E2^(k-1) + f_tilde

where f_tilde has bounded pole orders (v_inf >= -dim_S(k), v_P >= 1-k)
and m has weight 2-k.  The (m, f_tilde) pair is the class of f modulo
exact derivatives; stacking classes gives the linear-algebra criterion
for algebraic independence of iterated primitives.
"""

import math

from .errors import (
    BolViolation,
    NotHomogeneous,
    SystemInconsistent,
    WeightMismatch,
)
from .linalg import nullspace, rank, solve
from .modular import (
    DELTA_FORM,
    Divisor,
    E4_FORM,
    E6_FORM,
    MeroModForm,
    Point,
    basis_mk_d,
    dim_M,
    dim_S,
    g_for_divisor,
    generator_series,
    hol_basis,
)
from .polyq import squarefree_decomposition
from .rational import QQ, is_scalar, qq
from .series import TruncatedLaurent

_ZERO_MMF = MeroModForm(0)


def serre_derivative(f):
    """delta(f) - (w/12) E2 f for a weight-w form: modular of weight w + 2."""
    if not f:
        return f
    out = _ZERO_MMF
    if f.e4:
        out = out + f * QQ(-f.e4, 3) * (E6_FORM / E4_FORM)
    if f.e6:
        out = out + f * QQ(-f.e6, 2) * (E4_FORM ** 2 / E6_FORM)
    if f.rnum.degree > 0 or f.rden.degree > 0:
        # quotient rule on R(j) with delta(j) = -E4^2 E6 / Delta
        dnum = (f.rnum.derivative() * f.rden
                - f.rnum * f.rden.derivative())
        if not dnum.is_zero():
            winged = MeroModForm(-f.scale, f.e4, f.e6, f.eD,
                                 dnum, f.rden * f.rden)
            out = out + winged * (E4_FORM ** 2 * E6_FORM / DELTA_FORM)
    return out


def _as_qm(x):
    if isinstance(x, QMForm):
        return x
    if isinstance(x, MeroModForm):
        return QMForm([x])
    if is_scalar(x):
        return QMForm([MeroModForm(x)])
    raise TypeError("cannot interpret %r as a quasimodular form" % (x,))


class QMForm:
    """A polynomial in E2 with meromorphic modular coefficients.

    coeffs[r] is the weight-(k-2r) coefficient of E2^r; the list is
    trimmed so the top entry is nonzero.  Weight is inferred from the
    coefficients and None for the zero form.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        clean = [c if isinstance(c, MeroModForm) else MeroModForm(c)
                 for c in coeffs]
        while clean and not clean[-1]:
            clean.pop()
        w = None
        for r, c in enumerate(clean):
            if not c:
                continue
            if w is None:
                w = c.weight + 2 * r
            elif c.weight + 2 * r != w:
                raise NotHomogeneous("E2^%d coefficient has weight %d, expected %d"
                                     % (r, c.weight, w - 2 * r))
        self.coeffs = tuple(clean)

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def e2(cls):
        return cls((_ZERO_MMF, MeroModForm(1)))

    @property
    def weight(self):
        for r, c in enumerate(self.coeffs):
            if c:
                return c.weight + 2 * r
        return None

    @property
    def depth(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def coefficient(self, r):
        if 0 <= r < len(self.coeffs):
            return self.coeffs[r]
        return _ZERO_MMF

    def __eq__(self, other):
        try:
            other = _as_qm(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return QMForm([-c for c in self.coeffs])

    def __add__(self, other):
        try:
            other = _as_qm(other)
        except TypeError:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = []
        for r in range(n):
            x = a[r] if r < len(a) else _ZERO_MMF
            y = b[r] if r < len(b) else _ZERO_MMF
            out.append(x + y)
        return QMForm(out)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = _as_qm(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_scalar(other):
            return QMForm([c * other for c in self.coeffs])
        try:
            other = _as_qm(other)
        except TypeError:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return QMForm.zero()
        out = [_ZERO_MMF] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if not x:
                continue
            for j, y in enumerate(other.coeffs):
                if y:
                    out[i + j] = out[i + j] + x * y
        return QMForm(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = QMForm([MeroModForm(1)])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def delta(self):
        return qm_delta(self)

    def expand(self, order):
        """Exact q-expansion: sum of expand(coeff_r) * E2^r."""
        out = TruncatedLaurent.zero(order)
        for r, c in enumerate(self.coeffs):
            if not c:
                continue
            piece = c.expand(order)
            if r:
                need = order + max(0, -c.v_infinity())
                piece = piece * generator_series("E2", need) ** r
            out = out + piece
        return out.truncate(order)

    def text(self):
        if not self.coeffs:
            return "0"
        parts = []
        for r in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[r]
            if not c:
                continue
            if r == 0:
                parts.append(c.text())
            else:
                e2 = "E2" if r == 1 else "E2^%d" % r
                parts.append(e2 if c == 1 else "(%s) * %s" % (c.text(), e2))
        return " + ".join(parts)

    def __repr__(self):
        return "QMForm(%s)" % self.text()


QM_E2 = QMForm.e2()


def qm_delta(f):
    """The derivative q d/dq; raises weight by 2, depth by at most 1."""
    f = _as_qm(f)
    if not f.coeffs:
        return f
    k = f.weight
    out = [_ZERO_MMF] * (len(f.coeffs) + 1)
    for r, c in enumerate(f.coeffs):
        if not c:
            continue
        # delta(c E2^r) = serre(c) E2^r + ((k-r)/12) c E2^(r+1)
        #                 - (r/12) E4 c E2^(r-1)
        out[r] = out[r] + serre_derivative(c)
        out[r + 1] = out[r + 1] + c * QQ(k - r, 12)
        if r:
            out[r - 1] = out[r - 1] - E4_FORM * c * QQ(r, 12)
    return QMForm(out)


def qm_expand(f, order):
    return _as_qm(f).expand(order)


def coefficient_functions(f):
    """The transformation coefficients (f_0, ..., f_p), f_0 = f.

    f_s = sum over r >= s of C(r, s) * coeffs[r] * E2^(r-s).
    """
    f = _as_qm(f)
    p = max(f.depth, 0)
    out = []
    for s in range(p + 1):
        cs = [f.coefficient(r) * math.comb(r, s)
              for r in range(s, len(f.coeffs))]
        out.append(QMForm(cs))
    return out


def depth_reduce(f):
    """Peel E2-powers: f = delta(g) + m * E2^(k-1) + f_mod exactly.

    g is quasimodular of weight k - 2, m modular of weight 2 - k (zero
    unless the recursion passes depth k - 1), f_mod modular of weight k.
    """
    f = _as_qm(f)
    k = f.weight
    g = QMForm.zero()
    m = _ZERO_MMF
    cur = f
    while cur.depth > 0:
        p = cur.depth
        top = cur.coefficient(p)
        if k is not None and p == k - 1:
            m = m + top
            step = [_ZERO_MMF] * p + [top]
            cur = cur - QMForm(step)
        else:
            lift = [_ZERO_MMF] * (p - 1) + [top * QQ(12, k - p - 1)]
            step = QMForm(lift)
            g = g + step
            cur = cur - qm_delta(step)
    return g, m, cur.coefficient(0)


_CHAIN_CACHE = {}


def _bol_chain(g, k):
    """(g, delta(g), ..., delta^(k-1)(g)) as quasimodular forms, cached."""
    key = (g, k)
    hit = _CHAIN_CACHE.get(key)
    if hit is None:
        chain = [QMForm([g])]
        for _ in range(k - 1):
            chain.append(qm_delta(chain[-1]))
        top = chain[-1]
        for r in range(1, len(top.coeffs)):
            if top.coeffs[r]:
                raise BolViolation("E2^%d survives delta^%d" % (r, k - 1))
        if len(_CHAIN_CACHE) > 512:
            _CHAIN_CACHE.clear()
        hit = tuple(chain)
        _CHAIN_CACHE[key] = hit
    return hit


def delta_power_bol(g, k):
    """delta^(k-1) of a weight-(2-k) form; modular of weight k.

    Iterated differentiation of a weight-(2-k) form produces no positive
    E2-powers; a surviving E2 term means a representation bug.
    """
    if k < 2 or k % 2:
        raise ValueError("k must be even and at least 2")
    if not g:
        return _ZERO_MMF
    if g.weight != 2 - k:
        raise WeightMismatch("need weight %d, got %d" % (2 - k, g.weight))
    return _bol_chain(g, k)[-1].coefficient(0)


def _window(series, lo, hi):
    return [series.coefficient(m) for m in range(lo, hi)]


def _expanded_basis(k, bound, hi):
    """(forms, monomials, g_D, expansions) for basis_mk_d(k, bound).

    All basis elements share the divisor-clearing denominator, so one
    series inversion serves every expansion.
    """
    g = g_for_divisor(bound)
    mons = hol_basis(k + g.weight)
    forms = basis_mk_d(k, bound)
    if not mons:
        return [], [], g, []
    ginv = g.invert()
    base = ginv.expand(hi)
    pad = max(0, -ginv.v_infinity())
    exps = [m.expand(hi + pad) * base for m in mons]
    return forms, mons, g, exps


def _combine(coeffs, forms):
    out = _ZERO_MMF
    for x, b in zip(coeffs, forms):
        if x:
            out = out + b * x
    return out


def _split_attempt(f, k, prime, n_t, v_inf_f, ds):
    """Solve the split with f_tilde pole orders n_t; None if inconsistent."""
    n_g = {p: max(0, -f.valuation_at(p) - (k - 1)) for p in prime}
    n_g_inf = max(0, -v_inf_f, ds)
    d_g = dict(n_g)
    d_g[Point.INF] = n_g_inf
    d_t = dict(n_t)
    d_t[Point.INF] = ds
    g_basis = basis_mk_d(2 - k, Divisor(d_g))
    chains = [_bol_chain(b, k) for b in g_basis]
    images = [c[-1].coefficient(0) for c in chains]

    # every form in the system lies in a common M_k(D); expansions
    # agreeing through floor(k/12) + deg(D) + 2 force exact equality
    deg_tot = qq(max(max(0, -v_inf_f), n_g_inf, ds))
    for p in prime:
        deg_tot += QQ(max(n_g[p] + k - 1, -f.valuation_at(p), n_t[p]),
                      p.stabilizer_order)
    hi = k // 12 + int(math.ceil(deg_tot)) + 3
    lo = min(-n_g_inf, -ds, v_inf_f, 0)

    t_forms, t_mons, t_gd, t_exps = _expanded_basis(k, Divisor(d_t), hi)
    cols = [_window(img.expand(hi), lo, hi) for img in images]
    cols.extend(_window(ex, lo, hi) for ex in t_exps)
    target = _window(f.expand(hi), lo, hi)
    matrix = [[col[r] for col in cols] for r in range(hi - lo)]
    sol = solve(matrix, target)
    if sol is None:
        return None

    gx = sol[:len(g_basis)]
    tx = sol[len(g_basis):]
    g = _combine(gx, g_basis)
    # numerators share t_gd, so sum the holomorphic monomials first
    t_num = _combine(tx, t_mons)
    f_tilde = t_num / t_gd if t_num else _ZERO_MMF
    if k == 2 and g:
        c0 = g.expand(1).coefficient(0)
        if c0:
            g = g - MeroModForm(c0)
    if _combine(gx, images) + f_tilde != f:
        raise SystemInconsistent("split failed exact reassembly")
    return g, f_tilde, g_basis, gx, chains


def _bol_split_data(f, k, support):
    poles = f.pole_points()
    if support is None:
        prime = poles
    else:
        prime = [p for p in support if p.kind != "inf"]
        missing = [p for p in poles if p not in prime]
        if missing:
            raise ValueError("support must contain the poles of f")
    v_inf_f = f.v_infinity()
    ds = dim_S(k)
    # try the pole orders of f itself first; the representative usually
    # needs no more, and under-sizing shows up as inconsistency
    n_small = {p: min(k - 1, max(0, -f.valuation_at(p))) for p in prime}
    res = _split_attempt(f, k, prime, n_small, v_inf_f, ds)
    if res is None:
        n_full = {p: k - 1 for p in prime}
        if n_full != n_small:
            res = _split_attempt(f, k, prime, n_full, v_inf_f, ds)
    if res is None:
        raise SystemInconsistent("no exact split at the determination bound")
    return res


def bol_split(f, k, support=None):
    """Split a weight-k form as delta^(k-1)(g) + f_tilde by exact linear algebra.

    g has weight 2 - k with poles only at the poles of f (order bounds
    from the pole-prescription constructions) and possibly at the cusp;
    f_tilde satisfies the bounded-pole conditions v_inf >= -dim_S(k) and
    v_P >= 1 - k on the support.  For k = 2 the additive constant in g is
    fixed by a zero constant term in its expansion.
    """
    if k < 2 or k % 2:
        raise ValueError("k must be even and at least 2")
    if f and f.weight != k:
        raise WeightMismatch("need weight %d, got %d" % (k, f.weight))
    if not f:
        return _ZERO_MMF, _ZERO_MMF
    g, f_tilde, _basis, _gx, _chains = _bol_split_data(f, k, support)
    return g, f_tilde


class QuotientClass:
    """The class of a quasimodular form modulo exact derivatives.

    m_part has weight 2 - k (zero unless k >= 2), tilde_part has weight k
    and bounded poles for k >= 2 (arbitrary modular for k <= 1).
    """

    __slots__ = ("weight", "m_part", "tilde_part")

    def __init__(self, weight, m_part, tilde_part):
        self.weight = weight
        self.m_part = m_part
        self.tilde_part = tilde_part

    @property
    def is_zero(self):
        return not self.m_part and not self.tilde_part

    def __eq__(self, other):
        if not isinstance(other, QuotientClass):
            return NotImplemented
        return (self.weight == other.weight and self.m_part == other.m_part
                and self.tilde_part == other.tilde_part)

    def __hash__(self):
        return hash((self.weight, self.m_part, self.tilde_part))

    def __repr__(self):
        return "QuotientClass(k=%s, m=%s, tilde=%s)" % (
            self.weight, self.m_part.text(), self.tilde_part.text())


def decompose_complement(f, support=None):
    """Write f = delta(g) + m * E2^(k-1) + tilde with tilde in the complement.

    Returns (g, QuotientClass); the class determines f modulo exact
    derivatives.  The support defaults to the poles of the modular part.
    """
    f = _as_qm(f)
    g1, m, f_mod = depth_reduce(f)
    k = f.weight
    if f.is_zero:
        return QMForm.zero(), QuotientClass(None, _ZERO_MMF, _ZERO_MMF)
    if k < 2:
        return g1, QuotientClass(k, _ZERO_MMF, f_mod)
    if not f_mod:
        return g1, QuotientClass(k, m, _ZERO_MMF)
    g2, f_tilde, _basis, gx, chains = _bol_split_data(f_mod, k, support)
    g_total = g1
    if g2:
        if k == 2:
            g_total = g_total + QMForm([g2])
        else:
            # delta^(k-2) of g2 assembled linearly from the cached chains
            extra = QMForm.zero()
            for x, chain in zip(gx, chains):
                if x:
                    extra = extra + chain[k - 2] * x
            g_total = g_total + extra
    return g_total, QuotientClass(k, m, f_tilde)


def tilde_membership(f, k):
    """Whether v_inf(f) >= -dim_S(k) and v_P(f) >= 1-k away from the cusp."""
    if k < 2 or k % 2:
        raise ValueError("k must be even and at least 2")
    if not f:
        return True
    if f.weight != k:
        raise WeightMismatch("need weight %d, got %d" % (k, f.weight))
    if f.v_infinity() < -dim_S(k):
        return False
    if f.e4 < 1 - k or f.e6 < 1 - k:
        return False
    # each denominator root is a pole of order equal to its multiplicity,
    # rational or not
    for _factor, mult in squarefree_decomposition(f.rden):
        if -mult < 1 - k:
            return False
    return True


def _w_point(point, k):
    if point.kind == "i":
        return 2 * ((k - 2) // 4) + 1
    if point.kind == "rho":
        return 2 * ((k - 2) // 6) + 1
    return k - 1


def dim_tildeM(k, support):
    """(formula count, basis count) for the bounded-pole complement on support.

    The support must contain the cusp; the two values are computed
    independently and returned for cross-checking.
    """
    if k < 2 or k % 2:
        raise ValueError("k must be even and at least 2")
    pts = list(support)
    if Point.INF not in pts:
        raise ValueError("support must contain the cusp")
    prime = [p for p in pts if p.kind != "inf"]
    formula = dim_M(k) + dim_S(k) + sum(_w_point(p, k) for p in prime)
    bound = {p: k - 1 for p in prime}
    bound[Point.INF] = dim_S(k)
    return formula, len(basis_mk_d(k, Divisor(bound)))


def _class_vector(cls, lo, hi):
    """Exact coordinates of (m_part, tilde_part) on a shared window."""
    vec = []
    for part in (cls.m_part, cls.tilde_part):
        ex = part.expand(hi)
        vec.extend(ex.coefficient(m) for m in range(lo, hi))
    return vec


def _parts_window(parts):
    """(min cusp valuation, finite-pole degree bound) across a list of forms.

    The degree uses weight 1 for every point, an overestimate at the
    elliptic points that only widens the comparison window.
    """
    lo = 0
    deg = qq(0)
    for part in parts:
        if not part:
            continue
        lo = min(lo, part.v_infinity())
        deg += max(0, -part.e4) + max(0, -part.e6) + part.rden.degree
    return lo, deg


def independence_check(fs, support=None):
    """Linear independence of the classes of fs, per weight-graded piece.

    Full rank of the stacked class coordinates certifies that the
    renormalized iterated primitives of the fs are algebraically
    independent over the field generated by q, E2, E4, and E6; a rank
    defect comes with an exact rational dependence certificate.
    """
    forms = [_as_qm(f) for f in fs]
    classes = []
    for f in forms:
        _g, cls = decompose_complement(f, support)
        classes.append(cls)
    by_weight = {}
    for i, cls in enumerate(classes):
        by_weight.setdefault(cls.weight, []).append(i)
    total_rank = 0
    relations = []
    groups = {}
    for w, idxs in sorted(by_weight.items(), key=lambda kv: (kv[0] is None, kv[0])):
        group = [classes[i] for i in idxs]
        if w is None:
            # zero forms: each contributes a trivial dependence
            groups[w] = {"count": len(idxs), "rank": 0}
            for i in idxs:
                relations.append({i: qq(1)})
            continue
        # vanishing of a combination through the window forces the zero
        # form: clearing poles reduces each part to a holomorphic form,
        # which dies past weight/12
        lo_m, deg_m = _parts_window([c.m_part for c in group])
        lo_t, deg_t = _parts_window([c.tilde_part for c in group])
        lo = min(lo_m, lo_t, 0)
        bound_m = qq(2 - w) / 12 + deg_m - lo_m
        bound_t = qq(w) / 12 + deg_t - lo_t
        hi = int(math.ceil(max(bound_m, bound_t, 0))) + 2
        rows = [_class_vector(cls, lo, hi) for cls in group]
        r = rank([row[:] for row in rows])
        total_rank += r
        groups[w] = {"count": len(idxs), "rank": r}
        if r < len(idxs):
            # relations among the forms are nullspace vectors of the
            # transposed coordinate matrix
            cols = [[rows[i][m] for i in range(len(rows))]
                    for m in range(len(rows[0]))]
            for vec in nullspace(cols):
                relations.append({idxs[i]: c for i, c in enumerate(vec) if c})
    independent = total_rank == len(forms)
    report = {
        "count": len(forms),
        "rank": total_rank,
        "independent": independent,
        "by_weight": groups,
        "statement": (
            "classes modulo exact derivatives are linearly independent; "
            "the renormalized iterated primitives are algebraically "
            "independent over C(q, E2, E4, E6)" if independent else
            "classes admit an exact linear dependence; no independence "
            "certificate"),
    }
    report["relations"] = relations
    return report
