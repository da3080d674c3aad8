"""Truncated Laurent series over exact rationals and the algebra C((q))[t].

Every value is immutable and carries a guaranteed order: coefficients at
exponents strictly below the order are exact, anything at or above it is
unknown. Operations propagate orders conservatively; in particular
order(a*b) = min(order_a + val_b, order_b + val_a). Reading a coefficient
beyond the guarantee raises InsufficientPrecision instead of returning junk.

Exact Laurent polynomials carry the sentinel order ORDER_INF and never lose
precision. t is the formal primitive of 1 under delta = q d/dq, so
delta(t) = 1 and the antiderivative lifts constant terms into higher t-powers.
"""

from collections import namedtuple

from .errors import InsufficientPrecision, ZeroInverse
from .rational import QQ, qq, is_scalar

ORDER_INF = 1 << 62

_ZERO = QQ(0)
_ONE = QQ(1)
_QQ_TYPE = type(_ZERO)

OrderContract = namedtuple("OrderContract", ["q_order", "eps_order"])


def _cap(n):
    return ORDER_INF if n >= ORDER_INF else n


def order_plus(a, b):
    """Saturating sum of order/valuation bounds: infinity absorbs."""
    if a >= ORDER_INF or b >= ORDER_INF:
        return ORDER_INF
    return _cap(a + b)


class TruncatedLaurent:
    """A Laurent series in q, known modulo q^order.

    Coefficients are stored densely from the valuation. For finite order the
    window val..order-1 is fully stored; for ORDER_INF the value is an exact
    Laurent polynomial and only its support is stored.
    """

    __slots__ = ("val", "coeffs", "order", "_hash")

    def __init__(self, val, coeffs, order=ORDER_INF):
        coeffs = [c if type(c) is _QQ_TYPE else qq(c) for c in coeffs]
        if order < ORDER_INF:
            if val > order:
                raise ValueError("valuation above order")
            del coeffs[max(0, order - val):]
            coeffs.extend([_ZERO] * (order - val - len(coeffs)))
        else:
            while coeffs and not coeffs[-1]:
                coeffs.pop()
        lead = 0
        while lead < len(coeffs) and not coeffs[lead]:
            lead += 1
        if lead:
            val += lead
            coeffs = coeffs[lead:]
        if not coeffs:
            val = order
        self.val = _cap(val)
        self.coeffs = tuple(coeffs)
        self.order = order
        self._hash = None

    @classmethod
    def zero(cls, order=ORDER_INF):
        return cls(order, (), order)

    @classmethod
    def monomial(cls, m, c=1, order=ORDER_INF):
        return cls(m, (c,), order)

    @classmethod
    def one(cls):
        return cls(0, (_ONE,))

    @classmethod
    def from_terms(cls, pairs, order=ORDER_INF):
        """Build from (exponent, coefficient) pairs."""
        pairs = [(m, qq(c)) for m, c in pairs if c]
        if not pairs:
            return cls.zero(order)
        lo = min(m for m, _ in pairs)
        hi = max(m for m, _ in pairs)
        coeffs = [_ZERO] * (hi - lo + 1)
        for m, c in pairs:
            coeffs[m - lo] += c
        return cls(lo, coeffs, order)

    def is_zero(self):
        """True when no known coefficient is nonzero."""
        return not self.coeffs

    def is_exact(self):
        return self.order >= ORDER_INF

    @property
    def contract(self):
        return OrderContract(self.order, None)

    def coefficient(self, m):
        """Coefficient of q^m; raises beyond the guaranteed order."""
        if m >= self.order:
            raise InsufficientPrecision(
                "coefficient of q^%d requested, guaranteed only below q^%d" % (m, self.order))
        if m < self.val or m - self.val >= len(self.coeffs):
            return _ZERO
        return self.coeffs[m - self.val]

    def support(self):
        """Known nonzero (exponent, coefficient) pairs, ascending."""
        return [(self.val + i, c) for i, c in enumerate(self.coeffs) if c]

    def truncate(self, new_order):
        """Forget coefficients at or above new_order."""
        if new_order >= self.order:
            return self
        if new_order <= self.val:
            return TruncatedLaurent.zero(new_order)
        return TruncatedLaurent(self.val, list(self.coeffs[:new_order - self.val]), new_order)

    def shift(self, k):
        """Multiply by q^k."""
        if self.is_zero():
            return TruncatedLaurent.zero(order_plus(self.order, k))
        return TruncatedLaurent(self.val + k, list(self.coeffs),
                                order_plus(self.order, k))

    def __neg__(self):
        out = TruncatedLaurent.__new__(TruncatedLaurent)
        out.val = self.val
        out.coeffs = tuple(-c for c in self.coeffs)
        out.order = self.order
        out._hash = None
        return out

    def __add__(self, other):
        if is_scalar(other):
            other = TruncatedLaurent.monomial(0, other)
        elif not isinstance(other, TruncatedLaurent):
            return NotImplemented
        order = min(self.order, other.order)
        # one-sided zero: val sits at the order sentinel, so bail before
        # using it for window arithmetic
        if not self.coeffs:
            return other.truncate(order)
        if not other.coeffs:
            return self.truncate(order)
        lo = min(self.val, other.val)
        hi = max(self.val + len(self.coeffs), other.val + len(other.coeffs))
        if order < ORDER_INF:
            hi = min(hi, order)
        out = [_ZERO] * (hi - lo)
        for i, c in enumerate(self.coeffs):
            m = self.val + i
            if m < hi:
                out[m - lo] = c
        for i, c in enumerate(other.coeffs):
            m = other.val + i
            if m < hi:
                out[m - lo] += c
        return TruncatedLaurent(lo, out, order)

    __radd__ = __add__

    def __sub__(self, other):
        if is_scalar(other):
            other = TruncatedLaurent.monomial(0, other)
        elif not isinstance(other, TruncatedLaurent):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        if not isinstance(other, TruncatedLaurent):
            return NotImplemented
        order = min(order_plus(self.order, other.val),
                    order_plus(other.order, self.val))
        if self.is_zero() or other.is_zero():
            return TruncatedLaurent.zero(order)
        val = _cap(self.val + other.val)
        if order < ORDER_INF:
            width = order - val
        else:
            width = len(self.coeffs) + len(other.coeffs) - 1
        out = [_ZERO] * width
        bc = other.coeffs
        for i, x in enumerate(self.coeffs):
            if not x:
                continue
            top = min(len(bc), width - i)
            for j in range(top):
                y = bc[j]
                if y:
                    out[i + j] += x * y
        return TruncatedLaurent(val, out, order)

    __rmul__ = __mul__

    def scale(self, c):
        c = qq(c)
        if not c:
            return TruncatedLaurent.zero(self.order)
        out = TruncatedLaurent.__new__(TruncatedLaurent)
        out.val = self.val
        out.coeffs = tuple(c * x for x in self.coeffs)
        out.order = self.order
        out._hash = None
        return out

    def __truediv__(self, other):
        if is_scalar(other):
            return self.scale(QQ(1) / qq(other))
        if isinstance(other, TruncatedLaurent):
            return self * other.invert()
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.invert() ** (-n)
        result = TruncatedLaurent.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def invert(self):
        """Multiplicative inverse; order drops to order - 2*val."""
        if self.is_zero():
            raise ZeroInverse("cannot invert a series with no known nonzero coefficient")
        a = self.coeffs
        lead = a[0]
        if self.order >= ORDER_INF:
            # exact input; the inverse is exact only for monomials
            width = max(len(a), 64)
        else:
            width = self.order - self.val
        inv = [_ZERO] * width
        inv[0] = _ONE / lead
        for n in range(1, width):
            acc = _ZERO
            top = min(n, len(a) - 1)
            for k in range(1, top + 1):
                if a[k] and inv[n - k]:
                    acc += a[k] * inv[n - k]
            inv[n] = -acc / lead
        if self.order >= ORDER_INF and len(a) == 1:
            return TruncatedLaurent(-self.val, [inv[0]])
        # known window starts at -val and covers width terms; for finite order
        # this equals order - 2*val
        return TruncatedLaurent(-self.val, inv, _cap(-self.val + width))

    def delta(self):
        """q d/dq, termwise m*c_m."""
        return TruncatedLaurent(
            self.val, [(self.val + i) * c for i, c in enumerate(self.coeffs)], self.order)

    def antiderivative_nonconstant(self):
        """Termwise q^m -> q^m/m; requires the constant term to be known zero."""
        if self.coefficient(0):
            raise ValueError("nonzero constant term; extract it before antidifferentiating")
        return TruncatedLaurent(
            self.val,
            [c / (self.val + i) if self.val + i != 0 else _ZERO
             for i, c in enumerate(self.coeffs)],
            self.order)

    def split_at_zero(self):
        """Split into (part with exponents >= 0, part with exponents < 0)."""
        neg = [(m, c) for m, c in self.support() if m < 0]
        pos = [(m, c) for m, c in self.support() if m >= 0]
        neg_order = ORDER_INF if self.order >= 0 else self.order
        return (TruncatedLaurent.from_terms(pos, self.order),
                TruncatedLaurent.from_terms(neg, neg_order))

    def agrees(self, other, upto=None):
        """Equality of known coefficients through min of the guarantees."""
        if is_scalar(other):
            other = TruncatedLaurent.monomial(0, other)
        bound = min(self.order, other.order)
        if upto is not None:
            bound = min(bound, upto)
        if bound >= ORDER_INF:
            # both exact: finite supports decide
            return dict(self.support()) == dict(other.support())
        lo = min(self.val, other.val)
        if lo >= bound:
            return True
        for m in range(lo, bound):
            if self.coefficient(m) != other.coefficient(m):
                return False
        return True

    def __eq__(self, other):
        if is_scalar(other):
            other = TruncatedLaurent.monomial(0, other)
        elif not isinstance(other, TruncatedLaurent):
            return NotImplemented
        return (self.val == other.val and self.order == other.order
                and self.coeffs == other.coeffs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.val, self.coeffs, self.order))
        return self._hash

    def text(self, var="q"):
        return render_terms([((m,), c) for m, c in self.support()],
                            (var,), self.order)

    def __repr__(self):
        return "TruncatedLaurent(%s)" % self.text()

    def to_json(self):
        data = {"coeffs": {str(m): str(c) for m, c in self.support()}}
        data["order"] = None if self.order >= ORDER_INF else self.order
        return data

    @classmethod
    def from_json(cls, data):
        order = data.get("order")
        order = ORDER_INF if order is None else order
        return cls.from_terms([(int(m), qq(c)) for m, c in data["coeffs"].items()], order)


def render_terms(terms, variables, order=ORDER_INF, order_var="q"):
    """Render [(exponent tuple, coefficient)] over named variables.

    Exponent style: x^-1; rational coefficients p/q render as p*x/q. A finite
    order appends + O(q^N).
    """
    pieces = []
    for exps, c in terms:
        if not c:
            continue
        factors = []
        for var, m in zip(variables, exps):
            if m == 1:
                factors.append(var)
            elif m != 0:
                factors.append("%s^%d" % (var, m))
        num, den = c.numerator, c.denominator
        body = "*".join(factors)
        if not body:
            mag = str(abs(num)) if den == 1 else "%d/%d" % (abs(num), den)
        else:
            if abs(num) != 1:
                body = "%d*%s" % (abs(num), body)
            mag = body if den == 1 else "%s/%d" % (body, den)
        pieces.append(("-" if num < 0 else "+", mag))
    marker = None
    if order < ORDER_INF:
        marker = "O(%s)" % order_var if order == 1 else "O(%s^%d)" % (order_var, order)
    if not pieces:
        return marker if marker else "0"
    sign, mag = pieces[0]
    out = ("-" if sign == "-" else "") + mag
    for sign, mag in pieces[1:]:
        out += " %s %s" % (sign, mag)
    if marker:
        out += " + " + marker
    return out


class AElement:
    """Element of C((q))[t]: a polynomial in t with TruncatedLaurent coefficients.

    Top t-coefficients are trimmed only when exactly zero; a coefficient that is
    merely zero to its guaranteed order is kept, since it may hide unknown terms.
    """

    __slots__ = ("tc", "_hash")

    def __init__(self, t_coeffs):
        tc = [s if isinstance(s, TruncatedLaurent) else _as_series(s) for s in t_coeffs]
        while tc and tc[-1].is_zero() and tc[-1].is_exact():
            tc.pop()
        self.tc = tuple(tc)
        self._hash = None

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def one(cls):
        return cls((TruncatedLaurent.one(),))

    @classmethod
    def from_series(cls, s):
        return cls((s,))

    @classmethod
    def t_power(cls, i, c=1):
        return cls([TruncatedLaurent.zero()] * i + [TruncatedLaurent.monomial(0, c)])

    def degree(self):
        """Degree in t (-1 for the exact zero element)."""
        return len(self.tc) - 1

    def coefficient(self, i):
        """Series coefficient of t^i."""
        if i < len(self.tc):
            return self.tc[i]
        return TruncatedLaurent.zero()

    def is_zero(self):
        return all(s.is_zero() for s in self.tc)

    def is_exact(self):
        return all(s.is_exact() for s in self.tc)

    def min_order(self):
        """Least guaranteed q-order across t-coefficients."""
        return min((s.order for s in self.tc), default=ORDER_INF)

    @property
    def contract(self):
        return OrderContract(self.min_order(), None)

    def __neg__(self):
        return AElement(tuple(-s for s in self.tc))

    def __add__(self, other):
        other = _as_a_element(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.tc), len(other.tc))
        return AElement([self.coefficient(i) + other.coefficient(i) for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_a_element(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        if isinstance(other, TruncatedLaurent):
            return AElement([s * other for s in self.tc])
        if not isinstance(other, AElement):
            return NotImplemented
        if not self.tc or not other.tc:
            return AElement.zero()
        out = [TruncatedLaurent.zero() for _ in range(len(self.tc) + len(other.tc) - 1)]
        for i, a in enumerate(self.tc):
            if a.is_zero() and a.is_exact():
                continue
            for j, b in enumerate(other.tc):
                out[i + j] = out[i + j] + a * b
        return AElement(out)

    __rmul__ = __mul__

    def scale(self, c):
        return AElement([s.scale(c) for s in self.tc])

    def __truediv__(self, other):
        if is_scalar(other):
            return self.scale(QQ(1) / qq(other))
        if isinstance(other, TruncatedLaurent):
            return self * other.invert()
        if isinstance(other, AElement):
            if other.degree() > 0:
                raise ZeroInverse("cannot invert an element with t-dependence")
            return self * other.coefficient(0).invert()
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = AElement.one()
        for _ in range(n):
            result = result * self
        return result

    def truncate(self, new_order):
        return AElement([s.truncate(new_order) for s in self.tc])

    def delta(self):
        """q d/dq with delta(t) = 1."""
        n = len(self.tc)
        if not n:
            return AElement.zero()
        out = [TruncatedLaurent.zero() for _ in range(n)]
        for i, s in enumerate(self.tc):
            out[i] = out[i] + s.delta()
            if i >= 1:
                out[i - 1] = out[i - 1] + s.scale(i)
        return AElement(out)

    def antiderivative(self):
        """The delta-antiderivative: the unique F with delta(F) = self whose
        t-coefficient constants are all forced, and F_0 has none.

        delta(P t^i) = delta_q(P) t^i + i P t^(i-1), so the t-coefficients of
        F satisfy x_i = delta_q(F_i) + (i+1) F_{i+1} and are built from the
        top degree down; the q-constant of F_{i+1} is pinned to
        x_i[q^0]/(i+1) to keep each level integrable.  On pure constants
        this reduces to c t^i -> c t^(i+1)/(i+1), and on t-free input to
        q^m -> q^m/m plus the constant lift.
        """
        d = len(self.tc) - 1
        if d < 0:
            return self
        consts = [s.coefficient(0) for s in self.tc]
        out = [None] * (d + 2)
        out[d + 1] = TruncatedLaurent.monomial(0, consts[d] / (d + 1))
        for i in range(d, -1, -1):
            rhs = self.tc[i] - out[i + 1].scale(i + 1)
            body = rhs.antiderivative_nonconstant()
            c = consts[i - 1] / i if i >= 1 else _ZERO
            out[i] = body + TruncatedLaurent.monomial(0, c)
        return AElement(out)

    def ev0(self):
        """The coefficient of q^0 t^0."""
        return self.coefficient(0).coefficient(0)

    def agrees(self, other, upto=None):
        other = _as_a_element(other)
        if other is NotImplemented:
            raise TypeError("cannot compare with %r" % (other,))
        n = max(len(self.tc), len(other.tc))
        return all(self.coefficient(i).agrees(other.coefficient(i), upto) for i in range(n))

    def __eq__(self, other):
        other = _as_a_element(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.tc), len(other.tc))
        return all(self.coefficient(i) == other.coefficient(i) for i in range(n))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.tc)
        return self._hash

    def text(self, var="q", tvar="t"):
        terms = []
        order = self.min_order()
        for i in reversed(range(len(self.tc))):
            for m, c in self.tc[i].support():
                terms.append(((i, m), c))
        return render_terms(terms, (tvar, var), order)

    def __repr__(self):
        return "AElement(%s)" % self.text()

    def to_json(self):
        return {"t": {str(i): s.to_json() for i, s in enumerate(self.tc) if not s.is_zero()},
                "order": None if self.min_order() >= ORDER_INF else self.min_order()}

    @classmethod
    def from_json(cls, data):
        order = data.get("order")
        order = ORDER_INF if order is None else order
        tc = {}
        for key, sdata in data["t"].items():
            s = TruncatedLaurent.from_json(sdata)
            if s.order >= ORDER_INF and order < ORDER_INF:
                s = s.truncate(order)
            tc[int(key)] = s
        n = max(tc) + 1 if tc else 0
        return cls([tc.get(i, TruncatedLaurent.zero(order)) for i in range(n)])


def _as_series(x):
    if isinstance(x, TruncatedLaurent):
        return x
    if is_scalar(x):
        return TruncatedLaurent.monomial(0, x)
    raise TypeError("expected a series or scalar, got %r" % (x,))


def _as_a_element(x):
    if isinstance(x, AElement):
        return x
    if isinstance(x, TruncatedLaurent):
        return AElement((x,))
    if is_scalar(x):
        return AElement((TruncatedLaurent.monomial(0, x),))
    return NotImplemented
