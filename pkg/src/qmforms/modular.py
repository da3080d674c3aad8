"""Exact meromorphic modular forms for the full modular group.

Every form is kept in the canonical factored shape

    scale * E4^e4 * E6^e6 * Delta^eD * rnum(j) / rden(j)

with rnum, rden monic, coprime, and coprime to j and to j - 1728 (those
factors are absorbed into the exponents through E4^3 = j*Delta and
E6^2 = (j-1728)*Delta).  Weights, divisors, and pole-prescription
constructions read off the exponents directly; all gcd work is univariate
over the rationals.  q-expansions are produced on demand from a growing
process-wide cache of generator series.
"""

from .errors import (
    DivisionByZero,
    InsufficientPrecision,
    NoSolution,
    UnknownName,
    UnsupportedPoint,
    ValenceViolation,
    WeightMismatch,
    ZeroForm,
)
from .polyq import Poly, poly_gcd, rational_roots, squarefree_decomposition
from .rational import QQ, format_rational, is_scalar, qq
from .series import TruncatedLaurent

_J_POLY = Poly((0, 1))
_J1728_POLY = Poly((-1728, 1))

GENERATOR_NAMES = ("E2", "E4", "E6", "Delta", "j")


def _sigma_series(power, weight_scale, order):
    """1 + weight_scale * sum sigma_power(n) q^n, exact to the given order."""
    sig = [0] * order
    for d in range(1, order):
        dp = d ** power
        for m in range(d, order, d):
            sig[m] += dp
    coeffs = [qq(1)] + [qq(weight_scale * s) for s in sig[1:]]
    return TruncatedLaurent(0, coeffs, order)


def _compute_generators(order):
    e2 = _sigma_series(1, -24, order)
    e4 = _sigma_series(3, 240, order)
    e6 = _sigma_series(5, -504, order)
    delta = (e4 ** 3 - e6 ** 2).scale(QQ(1, 1728))
    jfun = e4 ** 3 * delta.invert()
    return {"E2": e2, "E4": e4, "E6": e6, "Delta": delta, "j": jfun}


# grows monotonically; j loses two orders to the Delta inversion, so the
# cache is always built with that margin over the largest request
_GEN_CACHE = {"order": 0, "series": None}


def generator_series(name, order):
    """Exact rational q-expansion of E2, E4, E6, Delta, or j."""
    if name not in GENERATOR_NAMES:
        raise UnknownName("unknown generator %r" % (name,))
    if order < 1:
        raise ValueError("order must be at least 1")
    need = order + 2
    if _GEN_CACHE["order"] < need:
        new_order = max(need, 2 * _GEN_CACHE["order"])
        _GEN_CACHE["series"] = _compute_generators(new_order)
        _GEN_CACHE["order"] = new_order
    return _GEN_CACHE["series"][name].truncate(order)


class Point:
    """A point of the compactified modular curve with rational j-invariant.

    Kinds: the cusp at infinity, the elliptic points [i] (j = 1728) and
    [rho] (j = 0), and ordinary points named by their rational j-value.
    rational_j normalizes 0 and 1728 to the elliptic kinds, so the
    stabilizer weight h_P is always determined by the kind alone.
    """

    __slots__ = ("kind", "jvalue")

    _CODES = {"inf": 0, "i": 1, "rho": 2, "j": 3}

    def __init__(self, kind, jvalue=None):
        if kind not in Point._CODES:
            raise UnsupportedPoint("unknown point kind %r" % (kind,))
        self.kind = kind
        self.jvalue = jvalue

    @classmethod
    def rational_j(cls, c):
        c = qq(c)
        if c == 0:
            return Point.RHO
        if c == 1728:
            return Point.I
        return cls("j", c)

    @property
    def stabilizer_order(self):
        if self.kind == "i":
            return 2
        if self.kind == "rho":
            return 3
        return 1

    def sort_key(self):
        return (Point._CODES[self.kind], self.jvalue if self.jvalue is not None else qq(0))

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return self.kind == other.kind and self.jvalue == other.jvalue

    def __hash__(self):
        return hash((self.kind, self.jvalue))

    def text(self):
        if self.kind == "j":
            return "j=%s" % format_rational(self.jvalue)
        return self.kind

    def to_json(self):
        if self.kind == "j":
            return {"j": format_rational(self.jvalue)}
        return self.kind

    def __repr__(self):
        return "Point(%s)" % self.text()


Point.INF = Point("inf")
Point.I = Point("i")
Point.RHO = Point("rho")


class Divisor:
    """Integer valuations v_P on a finite set of rational-j points.

    The divisor of a form is sum of v_P/h_P * (P); entries hold the
    integer v_P and degree() applies the stabilizer weights.  Roots of the
    j-part with no rational j-value are carried as residual certificates
    (squarefree monic polynomial, signed multiplicity); each certificate
    contributes mult * deg(poly) to the degree with weight 1.
    """

    __slots__ = ("entries", "residual")

    def __init__(self, entries=None, residual=()):
        clean = {}
        for p, v in dict(entries or {}).items():
            if v:
                clean[p] = int(v)
        self.entries = clean
        res = {}
        for poly, mult in residual:
            if mult and poly.degree > 0:
                res[poly] = res.get(poly, 0) + mult
        self.residual = tuple(sorted(
            ((p, m) for p, m in res.items() if m),
            key=lambda pm: (pm[0].degree, pm[0].coeffs)))

    def get(self, point):
        return self.entries.get(point, 0)

    def support(self):
        return sorted(self.entries, key=Point.sort_key)

    @property
    def is_rational(self):
        return not self.residual

    def degree(self):
        total = qq(0)
        for p, v in self.entries.items():
            total += QQ(v, p.stabilizer_order)
        for poly, mult in self.residual:
            total += mult * poly.degree
        return total

    def __neg__(self):
        return Divisor({p: -v for p, v in self.entries.items()},
                       [(poly, -m) for poly, m in self.residual])

    def __add__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        entries = dict(self.entries)
        for p, v in other.entries.items():
            entries[p] = entries.get(p, 0) + v
        return Divisor(entries, self.residual + other.residual)

    def __sub__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self.entries == other.entries and self.residual == other.residual

    def __hash__(self):
        return hash((frozenset(self.entries.items()), self.residual))

    def __bool__(self):
        return bool(self.entries) or bool(self.residual)

    def text(self):
        parts = ["%d*(%s)" % (v, p.text())
                 for p, v in sorted(self.entries.items(), key=lambda pv: pv[0].sort_key())]
        parts.extend("%d*[%s]" % (m, poly.text("j")) for poly, m in self.residual)
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        data = [{"point": p.to_json(), "v": v}
                for p, v in sorted(self.entries.items(), key=lambda pv: pv[0].sort_key())]
        data.extend({"residual": poly.text("j"), "v": m} for poly, m in self.residual)
        return data

    def __repr__(self):
        return "Divisor(%s)" % self.text()


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    if is_scalar(x):
        return Poly((qq(x),))
    return Poly(x)


def _strip_factor(p, f):
    """Divide out as many copies of the monic factor f as possible."""
    count = 0
    while p.degree >= f.degree:
        q, r = divmod(p, f)
        if not r.is_zero():
            break
        p = q
        count += 1
    return p, count


class MeroModForm:
    """A meromorphic modular form of one weight, canonically factored.

    The representation is unique given the invariants in the module
    docstring, so equality is slot comparison.  The zero form has scale 0
    and weight None.  Instances are immutable.
    """

    __slots__ = ("scale", "e4", "e6", "eD", "rnum", "rden")

    def __init__(self, scale=1, e4=0, e6=0, eD=0, rnum=1, rden=1):
        scale = qq(scale)
        rnum = _as_poly(rnum)
        rden = _as_poly(rden)
        if rden.is_zero():
            raise DivisionByZero("zero denominator polynomial")
        if not scale or rnum.is_zero():
            self.scale = qq(0)
            self.e4 = self.e6 = self.eD = 0
            self.rnum = Poly.one()
            self.rden = Poly.one()
            return
        e4, e6, eD = int(e4), int(e6), int(eD)
        if rnum.degree > 0 and rden.degree > 0:
            g = poly_gcd(rnum, rden)
            if g.degree > 0:
                rnum = rnum.exact_div(g)
                rden = rden.exact_div(g)
        if rnum.degree > 0:
            rnum, a = _strip_factor(rnum, _J_POLY)
            e4 += 3 * a
            eD -= a
            rnum, a = _strip_factor(rnum, _J1728_POLY)
            e6 += 2 * a
            eD -= a
        if rden.degree > 0:
            rden, b = _strip_factor(rden, _J_POLY)
            e4 -= 3 * b
            eD += b
            rden, b = _strip_factor(rden, _J1728_POLY)
            e6 -= 2 * b
            eD += b
        self.scale = scale * rnum.lead / rden.lead
        self.e4 = e4
        self.e6 = e6
        self.eD = eD
        self.rnum = rnum.monic()
        self.rden = rden.monic()

    @property
    def is_zero(self):
        return not self.scale

    def __bool__(self):
        return bool(self.scale)

    @property
    def weight(self):
        if not self.scale:
            return None
        return 4 * self.e4 + 6 * self.e6 + 12 * self.eD

    def __eq__(self, other):
        if is_scalar(other):
            other = MeroModForm(other)
        if not isinstance(other, MeroModForm):
            return NotImplemented
        return (self.scale == other.scale and self.e4 == other.e4
                and self.e6 == other.e6 and self.eD == other.eD
                and self.rnum == other.rnum and self.rden == other.rden)

    def __hash__(self):
        return hash((self.scale, self.e4, self.e6, self.eD, self.rnum, self.rden))

    def __neg__(self):
        return MeroModForm(-self.scale, self.e4, self.e6, self.eD, self.rnum, self.rden)

    def __mul__(self, other):
        if is_scalar(other):
            return MeroModForm(self.scale * qq(other), self.e4, self.e6,
                               self.eD, self.rnum, self.rden)
        if not isinstance(other, MeroModForm):
            return NotImplemented
        if not self.scale or not other.scale:
            return MeroModForm(0)
        return MeroModForm(self.scale * other.scale,
                           self.e4 + other.e4, self.e6 + other.e6,
                           self.eD + other.eD,
                           self.rnum * other.rnum, self.rden * other.rden)

    __rmul__ = __mul__

    def invert(self):
        if not self.scale:
            raise DivisionByZero("cannot invert the zero form")
        return MeroModForm(1 / self.scale, -self.e4, -self.e6, -self.eD,
                           self.rden, self.rnum)

    def __truediv__(self, other):
        if is_scalar(other):
            return self * (QQ(1) / qq(other))
        if not isinstance(other, MeroModForm):
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        if is_scalar(other):
            return self.invert() * qq(other)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.invert() ** (-n)
        if not self.scale:
            return MeroModForm(0) if n else MeroModForm(1)
        return MeroModForm(self.scale ** n, self.e4 * n, self.e6 * n,
                           self.eD * n, self.rnum ** n, self.rden ** n)

    def __add__(self, other):
        if is_scalar(other):
            other = MeroModForm(other)
        if not isinstance(other, MeroModForm):
            return NotImplemented
        if not other.scale:
            return self
        if not self.scale:
            return other
        if self.weight != other.weight:
            raise WeightMismatch("cannot add weight %s to weight %s"
                                 % (self.weight, other.weight))
        # the weight-0 exponent mismatch lies on the lattice spanned by
        # (3,0,-1) and (0,2,-1), i.e. by j and (j-1728) in exponent form
        s, rs = divmod(self.e4 - other.e4, 3)
        t, rt = divmod(self.e6 - other.e6, 2)
        if rs or rt:
            raise WeightMismatch("exponent mismatch off the j-lattice")
        sm, tm = max(0, -s), max(0, -t)
        lift = _J_POLY ** (s + sm) * _J1728_POLY ** (t + tm)
        base = _J_POLY ** sm * _J1728_POLY ** tm
        num = (self.rnum * other.rden * lift * self.scale
               + other.rnum * self.rden * base * other.scale)
        den = self.rden * other.rden * base
        return MeroModForm(1, other.e4, other.e6, other.eD, num, den)

    __radd__ = __add__

    def __sub__(self, other):
        if is_scalar(other):
            other = MeroModForm(other)
        if not isinstance(other, MeroModForm):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def v_infinity(self):
        """The valuation at the cusp, read off the canonical shape."""
        if not self.scale:
            raise ZeroForm("the zero form has no valuation")
        return self.eD - self.rnum.degree + self.rden.degree

    def valuation_at(self, point):
        """The exact valuation at one point; no root search involved."""
        if not self.scale:
            raise ZeroForm("the zero form has no valuation")
        if point.kind == "inf":
            return self.v_infinity()
        if point.kind == "rho":
            return self.e4
        if point.kind == "i":
            return self.e6
        lin = Poly((-point.jvalue, qq(1)))
        _, a = _strip_factor(self.rnum, lin)
        _, b = _strip_factor(self.rden, lin)
        return a - b

    def pole_points(self):
        """Points of negative valuation away from the cusp.

        Poles come only from the exponents and the denominator roots, so
        this never factors numerator coefficients.  Raises
        UnsupportedPoint if the denominator has irrational roots.
        """
        if not self.scale:
            return []
        out = []
        if self.e4 < 0:
            out.append(Point.RHO)
        if self.e6 < 0:
            out.append(Point.I)
        if self.rden.degree > 0:
            roots, res = rational_roots(self.rden)
            if res.degree > 0:
                raise UnsupportedPoint("pole support must be rational")
            out.extend(Point.rational_j(c) for c, _m in roots)
        return out

    def expand(self, order):
        """Exact Laurent q-expansion guaranteed through the given order."""
        if not self.scale:
            return TruncatedLaurent.zero()
        key = (self, order)
        hit = _EXPAND_CACHE.get(key)
        if hit is not None:
            return hit
        out = self._expand_uncached(order)
        if len(_EXPAND_CACHE) > 4096:
            _EXPAND_CACHE.clear()
        _EXPAND_CACHE[key] = out
        return out

    def _expand_uncached(self, order):
        margin = 2 * abs(self.eD) + 2 * self.rnum.degree + 2 * self.rden.degree + 4
        work = order + margin
        out = TruncatedLaurent.monomial(0, self.scale)
        if self.e4:
            out = out * generator_series("E4", work) ** self.e4
        if self.e6:
            out = out * generator_series("E6", work) ** self.e6
        if self.eD:
            out = out * generator_series("Delta", work) ** self.eD
        if self.rnum.degree > 0 or self.rden.degree > 0:
            jq = generator_series("j", work)
            if self.rnum.degree > 0:
                out = out * self.rnum.evaluate(jq)
            if self.rden.degree > 0:
                out = out * self.rden.evaluate(jq).invert()
        if out.order < order:
            raise InsufficientPrecision("expansion margin too small")
        return out.truncate(order)

    def divisor(self, extra_points=()):
        """Valuations at every point of the support, plus residual certificates."""
        if not self.scale:
            raise ZeroForm("the zero form has no divisor")
        for p in extra_points:
            if not isinstance(p, Point):
                raise UnsupportedPoint("extra points must be Point instances")
        entries = {Point.RHO: self.e4, Point.I: self.e6,
                   Point.INF: self.v_infinity()}
        residual = []
        for poly, sign in ((self.rnum, 1), (self.rden, -1)):
            if poly.degree <= 0:
                continue
            for factor, mult in squarefree_decomposition(poly):
                roots, res = rational_roots(factor)
                for c, m in roots:
                    p = Point.rational_j(c)
                    entries[p] = entries.get(p, 0) + sign * mult * m
                if res.degree > 0:
                    residual.append((res, sign * mult))
        return Divisor(entries, residual)

    def valence_check(self):
        """Assert deg div(f) = weight/12; returns a small report dict."""
        deg = self.divisor().degree()
        expected = QQ(self.weight, 12)
        if deg != expected:
            raise ValenceViolation("divisor degree %s but weight/12 = %s"
                                   % (deg, expected))
        return {"weight": self.weight, "degree": deg, "ok": True}

    def text(self):
        if not self.scale:
            return "0"
        parts = []
        if self.scale != 1:
            parts.append(format_rational(self.scale))
        for name, e in (("E4", self.e4), ("E6", self.e6), ("Delta", self.eD)):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append("%s^%d" % (name, e))
        if self.rnum.degree > 0:
            parts.append("(%s)" % self.rnum.text("j"))
        if not parts:
            parts.append("1")
        out = " * ".join(parts)
        if self.rden.degree > 0:
            out += "/(%s)" % self.rden.text("j")
        return out

    def __repr__(self):
        return "MeroModForm(%s)" % self.text()


_EXPAND_CACHE = {}

ZERO_FORM = MeroModForm(0)
ONE_FORM = MeroModForm(1)
E4_FORM = MeroModForm(1, 1, 0, 0)
E6_FORM = MeroModForm(1, 0, 1, 0)
DELTA_FORM = MeroModForm(1, 0, 0, 1)
J_FORM = MeroModForm(1, 3, 0, -1)


def dim_M(k):
    """Dimension of the holomorphic forms of weight k."""
    if k < 0 or k % 2:
        return 0
    return k // 12 + (1 if k % 12 != 2 else 0)


def dim_S(k):
    """Dimension of the cusp forms of weight k."""
    return max(dim_M(k) - 1, 0)


def hol_basis(k):
    """Monomials E4^a E6^b of weight k, a descending; len = dim_M(k)."""
    if k < 0 or k % 2:
        return []
    out = []
    for a in range(k // 4, -1, -1):
        rem = k - 4 * a
        if rem % 6 == 0:
            out.append(MeroModForm(1, a, rem // 6, 0))
    return out


def u_for_point(point):
    """The canonical form with divisor (1/h_P)*(P): E4, E6, Delta, or (j-c)Delta."""
    if point.kind == "rho":
        return E4_FORM
    if point.kind == "i":
        return E6_FORM
    if point.kind == "inf":
        return DELTA_FORM
    if point.kind == "j":
        return MeroModForm(1, 0, 0, 1, Poly((-point.jvalue, qq(1))))
    raise UnsupportedPoint("no uniformizer for %r" % (point,))


def g_for_divisor(divisor):
    """The product of u_P^{n_P} over the divisor's support."""
    if divisor.residual:
        raise UnsupportedPoint("divisor has non-rational support")
    g = ONE_FORM
    for p in divisor.support():
        g = g * u_for_point(p) ** divisor.get(p)
    return g


_BASIS_CACHE = {}


def basis_mk_d(k, divisor):
    """Basis of the weight-k forms f with div(f) >= -divisor.

    Clearing by g_D reduces to holomorphic forms of weight k plus the
    weight of g_D, so the basis is g_D^{-1} times the monomial basis.
    """
    key = (k, divisor)
    hit = _BASIS_CACHE.get(key)
    if hit is None:
        g = g_for_divisor(divisor)
        hit = tuple(m / g for m in hol_basis(k + g.weight))
        _BASIS_CACHE[key] = hit
    return list(hit)


def _monomial_pair(m):
    """(a, b) with 4a + 6b = m maximizing b; m must avoid 2 mod the lattice."""
    for b in range(m // 6, -1, -1):
        if (m - 6 * b) % 4 == 0:
            return (m - 6 * b) // 4, b
    raise NoSolution("4a + 6b = %d has no nonnegative solution" % m)


def lemma_construction_i(k, point, v_p):
    """A weight-(2-k) form with exact valuation v_p + k - 1 at one point.

    The result g satisfies v_P(g) = v_p + k - 1 and v_Q(g) >= 0 at every
    Q outside {P, infinity}; the cusp valuation is unconstrained.  At the
    elliptic points the weight forces a parity/residue condition on v_p
    (attainable valuations of weight-k forms only); off-lattice inputs
    raise NoSolution.
    """
    if k < 2 or k % 2:
        raise ValueError("k must be even and at least 2")
    if point.kind == "inf":
        raise UnsupportedPoint("the cusp uses the v-infinity construction")
    if v_p > -k:
        raise ValueError("need v_p <= -k")
    w = v_p + k - 1
    if point.kind == "i":
        rhs = 2 - k - 6 * w
        if rhs % 4:
            raise NoSolution("v=%d at [i] is not attainable in weight %d" % (v_p, k))
        a = (rhs // 4) % 3
        n_inf = (rhs - 4 * a) // 12
        return MeroModForm(1, a, w, n_inf)
    if point.kind == "rho":
        rhs = 2 - k - 4 * w
        if rhs % 6:
            raise NoSolution("v=%d at [rho] is not attainable in weight %d" % (v_p, k))
        b = (rhs // 6) % 2
        n_inf = (rhs - 6 * b) // 12
        return MeroModForm(1, w, b, n_inf)
    rhs = 2 - k - 12 * w
    m = rhs % 12
    if m == 2:
        m = 14
    a, b = _monomial_pair(m)
    n_inf = (rhs - m) // 12
    return u_for_point(point) ** w * MeroModForm(1, a, b, n_inf)


def lemma_construction_ii(k, v_inf):
    """A weight-(2-k) form Delta^{v_inf} E4^a E6^b, holomorphic off the cusp.

    Exists whenever v_inf <= -dim_S(k) - 1; ties broken by maximal b.
    """
    if k < 2 or k % 2:
        raise ValueError("k must be even and at least 2")
    if v_inf > -dim_S(k) - 1:
        raise ValueError("need v_inf <= -dim_S(k) - 1")
    rhs = 2 - k - 12 * v_inf
    a, b = _monomial_pair(rhs)
    return MeroModForm(1, a, b, v_inf)
