"""Laurent series in (q, eps) and the algebra C((q, eps))[t, t_eps].

BiLaurent stores explicit (q-exponent, eps-exponent) -> coefficient maps with
guaranteed orders and guaranteed support bounds (tails) in both variables.
AEpsElement is a polynomial in t and t_eps over BiLaurent. delta = q d/dq acts
with delta(t) = 1 and kills eps and t_eps; ev_eps substitutes (q, t) ->
(eps, t_eps); split_pm splits by sign of the eps-exponent, with eps-degree 0
belonging to the plus part.
"""

from .errors import InsufficientPrecision
from .rational import QQ, qq, is_scalar
from .series import (ORDER_INF, AElement, OrderContract, TruncatedLaurent,
                     _cap, order_plus, render_terms)

_ZERO = QQ(0)
_QQ_TYPE = type(_ZERO)


class BiLaurent:
    """A Laurent series in q and eps, known modulo q^q_order and eps^eps_order.

    q_tail/eps_tail are guaranteed lower bounds for the exponents of *all*
    terms of the value, including unknown ones beyond the orders.
    """

    __slots__ = ("terms", "q_order", "eps_order", "q_tail", "eps_tail", "_hash")

    def __init__(self, terms, q_order=ORDER_INF, eps_order=ORDER_INF,
                 q_tail=None, eps_tail=None):
        clean = {}
        for (m, n), c in terms.items():
            if m >= q_order or n >= eps_order:
                continue
            c = c if type(c) is _QQ_TYPE else qq(c)
            if c:
                clean[(m, n)] = c
        self.terms = clean
        self.q_order = q_order
        self.eps_order = eps_order
        if q_tail is None:
            q_tail = min((m for m, _ in clean), default=q_order)
        if eps_tail is None:
            eps_tail = min((n for _, n in clean), default=eps_order)
        self.q_tail = min(_cap(q_tail), _cap(q_order))
        self.eps_tail = min(_cap(eps_tail), _cap(eps_order))
        self._hash = None

    @classmethod
    def zero(cls, q_order=ORDER_INF, eps_order=ORDER_INF):
        return cls({}, q_order, eps_order)

    @classmethod
    def monomial(cls, m, n, c=1):
        return cls({(m, n): c})

    @classmethod
    def from_q_series(cls, s):
        """Embed a TruncatedLaurent in q (exactly no eps content)."""
        return cls({(m, 0): c for m, c in s.support()},
                   q_order=s.order, eps_order=ORDER_INF,
                   q_tail=s.val, eps_tail=0)

    @classmethod
    def from_eps_series(cls, s):
        """Read a TruncatedLaurent as a series in eps (exactly no q content)."""
        return cls({(0, n): c for n, c in s.support()},
                   q_order=ORDER_INF, eps_order=s.order,
                   q_tail=0, eps_tail=s.val)

    def is_zero(self):
        return not self.terms

    @property
    def contract(self):
        return OrderContract(self.q_order, self.eps_order)

    def coefficient(self, m, n):
        if m >= self.q_order or n >= self.eps_order:
            raise InsufficientPrecision(
                "coefficient of q^%d eps^%d beyond guarantee (q^%s, eps^%s)"
                % (m, n, self.q_order, self.eps_order))
        return self.terms.get((m, n), _ZERO)

    def __neg__(self):
        out = BiLaurent.__new__(BiLaurent)
        out.terms = {k: -c for k, c in self.terms.items()}
        out.q_order, out.eps_order = self.q_order, self.eps_order
        out.q_tail, out.eps_tail = self.q_tail, self.eps_tail
        out._hash = None
        return out

    def __add__(self, other):
        if is_scalar(other):
            other = BiLaurent.monomial(0, 0, other)
        elif not isinstance(other, BiLaurent):
            return NotImplemented
        qo = min(self.q_order, other.q_order)
        eo = min(self.eps_order, other.eps_order)
        merged = dict(self.terms)
        for k, c in other.terms.items():
            merged[k] = merged.get(k, _ZERO) + c
        return BiLaurent(merged, qo, eo,
                         q_tail=min(self.q_tail, other.q_tail),
                         eps_tail=min(self.eps_tail, other.eps_tail))

    __radd__ = __add__

    def __sub__(self, other):
        if is_scalar(other):
            other = BiLaurent.monomial(0, 0, other)
        elif not isinstance(other, BiLaurent):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        if not isinstance(other, BiLaurent):
            return NotImplemented
        qo = min(order_plus(self.q_order, other.q_tail),
                 order_plus(other.q_order, self.q_tail))
        eo = min(order_plus(self.eps_order, other.eps_tail),
                 order_plus(other.eps_order, self.eps_tail))
        out = {}
        for (m1, n1), c1 in self.terms.items():
            for (m2, n2), c2 in other.terms.items():
                m, n = m1 + m2, n1 + n2
                if m >= qo or n >= eo:
                    continue
                key = (m, n)
                prev = out.get(key)
                out[key] = c1 * c2 if prev is None else prev + c1 * c2
        return BiLaurent(out, qo, eo,
                         q_tail=order_plus(self.q_tail, other.q_tail),
                         eps_tail=order_plus(self.eps_tail, other.eps_tail))

    __rmul__ = __mul__

    def scale(self, c):
        c = qq(c)
        if not c:
            return BiLaurent.zero(self.q_order, self.eps_order)
        out = BiLaurent.__new__(BiLaurent)
        out.terms = {k: c * x for k, x in self.terms.items()}
        out.q_order, out.eps_order = self.q_order, self.eps_order
        out.q_tail, out.eps_tail = self.q_tail, self.eps_tail
        out._hash = None
        return out

    def delta_q(self):
        """q d/dq termwise; eps is a constant for delta."""
        return BiLaurent({(m, n): m * c for (m, n), c in self.terms.items() if m},
                         self.q_order, self.eps_order, self.q_tail, self.eps_tail)

    def subs_q_to_eps(self):
        """Substitute q -> eps, collapsing (m, n) to eps^(m+n)."""
        eo = min(order_plus(self.q_order, self.eps_tail),
                 order_plus(self.eps_order, self.q_tail))
        out = {}
        for (m, n), c in self.terms.items():
            e = m + n
            if e >= eo:
                continue
            key = (0, e)
            prev = out.get(key)
            out[key] = c if prev is None else prev + c
        return BiLaurent(out, ORDER_INF, eo,
                         q_tail=0, eps_tail=order_plus(self.q_tail, self.eps_tail))

    def q_constant_column(self):
        """The m = 0 column as an eps-series; requires q_order >= 1."""
        if self.q_order < 1:
            raise InsufficientPrecision("q^0 column unknown below q-order 1")
        return TruncatedLaurent.from_terms(
            [(n, c) for (m, n), c in self.terms.items() if m == 0], self.eps_order)

    def eps_constant_column(self):
        """The n = 0 column as a q-series; requires eps_order >= 1."""
        if self.eps_order < 1:
            raise InsufficientPrecision("eps^0 column unknown below eps-order 1")
        return TruncatedLaurent.from_terms(
            [(m, c) for (m, n), c in self.terms.items() if n == 0], self.q_order)

    def split_eps(self):
        """Split into (eps-exponent >= 0 part, eps-exponent < 0 part)."""
        if self.eps_order < 0:
            raise InsufficientPrecision("cannot split below eps-order 0")
        plus = {k: c for k, c in self.terms.items() if k[1] >= 0}
        minus = {k: c for k, c in self.terms.items() if k[1] < 0}
        return (BiLaurent(plus, self.q_order, self.eps_order,
                          self.q_tail, max(self.eps_tail, 0)),
                BiLaurent(minus, self.q_order, ORDER_INF,
                          self.q_tail, self.eps_tail))

    def __eq__(self, other):
        if is_scalar(other):
            other = BiLaurent.monomial(0, 0, other)
        elif not isinstance(other, BiLaurent):
            return NotImplemented
        return (self.terms == other.terms and self.q_order == other.q_order
                and self.eps_order == other.eps_order)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.terms.items()), self.q_order, self.eps_order))
        return self._hash

    def text(self):
        terms = sorted(((m, n), c) for (m, n), c in self.terms.items())
        out = render_terms([((m, n), c) for (m, n), c in terms], ("q", "eps"))
        return _append_order_markers(out, self.q_order, self.eps_order)

    def __repr__(self):
        return "BiLaurent(%s)" % self.text()

    def to_json(self):
        return {"coeffs": {"%d,%d" % k: str(c) for k, c in sorted(self.terms.items())},
                "q_order": None if self.q_order >= ORDER_INF else self.q_order,
                "eps_order": None if self.eps_order >= ORDER_INF else self.eps_order}


def _append_order_markers(text, q_order, eps_order):
    markers = []
    if q_order < ORDER_INF:
        markers.append("O(q^%d)" % q_order)
    if eps_order < ORDER_INF:
        markers.append("O(eps^%d)" % eps_order)
    if not markers:
        return text
    if text == "0":
        return " + ".join(markers)
    return text + " + " + " + ".join(markers)


class AEpsElement:
    """Polynomial in t and t_eps with BiLaurent coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs):
        clean = {}
        for (i, j), b in coeffs.items():
            if not isinstance(b, BiLaurent):
                raise TypeError("coefficients must be BiLaurent values")
            if b.is_zero() and b.q_order >= ORDER_INF and b.eps_order >= ORDER_INF:
                continue
            clean[(i, j)] = b
        self.coeffs = clean
        self._hash = None

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def from_a_element(cls, a):
        """Embed C((q))[t] with exactly no eps content."""
        return cls({(i, 0): BiLaurent.from_q_series(s)
                    for i, s in enumerate(a.tc) if not (s.is_zero() and s.is_exact())})

    @classmethod
    def from_scalar(cls, c):
        return cls({(0, 0): BiLaurent.monomial(0, 0, c)})

    def coefficient(self, i, j):
        return self.coeffs.get((i, j), BiLaurent.zero())

    def is_zero(self):
        return all(b.is_zero() for b in self.coeffs.values())

    @property
    def contract(self):
        qo = min((b.q_order for b in self.coeffs.values()), default=ORDER_INF)
        eo = min((b.eps_order for b in self.coeffs.values()), default=ORDER_INF)
        return OrderContract(qo, eo)

    def __neg__(self):
        return AEpsElement({k: -b for k, b in self.coeffs.items()})

    def __add__(self, other):
        other = _as_aeps(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for k, b in other.coeffs.items():
            out[k] = out[k] + b if k in out else b
        return AEpsElement(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_aeps(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_scalar(other):
            return AEpsElement({k: b.scale(other) for k, b in self.coeffs.items()})
        other = _as_aeps(other)
        if other is NotImplemented:
            return NotImplemented
        out = {}
        for (i1, j1), b1 in self.coeffs.items():
            for (i2, j2), b2 in other.coeffs.items():
                k = (i1 + i2, j1 + j2)
                p = b1 * b2
                out[k] = out[k] + p if k in out else p
        return AEpsElement(out)

    __rmul__ = __mul__

    def delta(self):
        """q d/dq with delta(t) = 1, delta(eps) = delta(t_eps) = 0."""
        out = {}
        for (i, j), b in self.coeffs.items():
            db = b.delta_q()
            if (i, j) in out:
                out[(i, j)] = out[(i, j)] + db
            else:
                out[(i, j)] = db
            if i >= 1:
                k = (i - 1, j)
                step = b.scale(i)
                out[k] = out[k] + step if k in out else step
        return AEpsElement(out)

    def antiderivative(self):
        """The delta-antiderivative, a true right inverse of delta.

        delta(B t^i) = delta_q(B) t^i + i B t^(i-1), so for each fixed
        t_eps-degree the t-coefficients are built from the top down:
        x_i = delta_q(F_i) + (i+1) F_{i+1}, with the q-constant column of
        F_{i+1} (an eps-series, constant for delta) pinned to the
        q-constant column of x_i scaled by 1/(i+1).
        """
        if not self.coeffs:
            return self
        out = {}
        by_j = {}
        for (i, j), b in self.coeffs.items():
            by_j.setdefault(j, {})[i] = b
        for j, col_cells in by_j.items():
            d = max(col_cells)
            empty = BiLaurent.zero()
            cols = {i: col_cells[i].q_constant_column() if i in col_cells
                    else TruncatedLaurent.zero()
                    for i in range(d + 1)}
            upper = BiLaurent.from_eps_series(cols[d].scale(QQ(1, d + 1)))
            out[(d + 1, j)] = upper
            for i in range(d, -1, -1):
                b = col_cells.get(i, empty)
                rhs = b - upper.scale(i + 1)
                # the q-constant column cancels exactly by construction
                assert not any(m == 0 for (m, _n) in rhs.terms)
                body = BiLaurent(
                    {(m, n): c / m for (m, n), c in rhs.terms.items()},
                    rhs.q_order, rhs.eps_order, rhs.q_tail, rhs.eps_tail)
                cur = body
                if i >= 1:
                    cur = body + BiLaurent.from_eps_series(
                        cols[i - 1].scale(QQ(1, i)))
                out[(i, j)] = cur
                upper = cur
        return AEpsElement(out)

    def ev_eps(self):
        """Substitute (t, q) -> (t_eps, eps)."""
        out = {}
        for (i, j), b in self.coeffs.items():
            sub = b.subs_q_to_eps()
            k = (0, i + j)
            out[k] = out[k] + sub if k in out else sub
        return AEpsElement(out)

    def split_pm(self):
        """(plus, minus) with eps-degree >= 0 in plus, < 0 in minus."""
        plus, minus = {}, {}
        for k, b in self.coeffs.items():
            p, m = b.split_eps()
            plus[k] = p
            minus[k] = m
        return AEpsElement(plus), AEpsElement(minus)

    def project_const(self):
        """The coefficient of eps^0 t_eps^0, as an element of C((q))[t]."""
        top = -1
        for (i, j) in self.coeffs:
            if j == 0:
                top = max(top, i)
        tc = [TruncatedLaurent.zero() for _ in range(top + 1)]
        for (i, j), b in self.coeffs.items():
            if j == 0:
                tc[i] = tc[i] + b.eps_constant_column()
        return AElement(tc)

    def __eq__(self, other):
        other = _as_aeps(other)
        if other is NotImplemented:
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coefficient(*k) == other.coefficient(*k) for k in keys)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.coeffs.items()))
        return self._hash

    def text(self):
        terms = []
        qo = eo = ORDER_INF
        for (i, j) in sorted(self.coeffs, key=lambda k: (-k[0], -k[1])):
            b = self.coeffs[(i, j)]
            qo, eo = min(qo, b.q_order), min(eo, b.eps_order)
            for (m, n), c in sorted(b.terms.items()):
                terms.append(((i, j, m, n), c))
        out = render_terms(terms, ("t", "t_eps", "q", "eps"))
        return _append_order_markers(out, qo, eo)

    def __repr__(self):
        return "AEpsElement(%s)" % self.text()


def _as_aeps(x):
    if isinstance(x, AEpsElement):
        return x
    if isinstance(x, AElement):
        return AEpsElement.from_a_element(x)
    if isinstance(x, TruncatedLaurent):
        return AEpsElement({(0, 0): BiLaurent.from_q_series(x)})
    if isinstance(x, BiLaurent):
        return AEpsElement({(0, 0): x})
    if is_scalar(x):
        return AEpsElement.from_scalar(x)
    return NotImplemented
