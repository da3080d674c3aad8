"""Expression parsing and elaboration for the series and modular engines.

The grammar covers the generator atoms E2, E4, E6, Delta, j, the series
atom q, integer literals, arithmetic with integer powers, and the function
nodes D(.) for the q-derivative, I(f1, .., fn) for renormalized iterated
primitives, and Ir(f, r) for the r-fold primitive.  Precedence, tightest
first: ^ then unary minus then * / then + -.

Elaboration keeps values exact as long as they stay in the modular world
(scalars, MeroModForm, QMForm) and drops to truncated series as soon as q
or an integral node appears; mixed-weight sums of forms are rejected.
"""

from .errors import NotHomogeneous, ParseError, QMError, UnknownName, WeightMismatch
from .integrals import r_fold_primitive, required_input_order
from .modular import DELTA_FORM, E4_FORM, E6_FORM, J_FORM, MeroModForm
from .quasi import QMForm, qm_delta
from .rational import QQ, is_scalar, qq
from .series import AElement, TruncatedLaurent
from .words import shared_engine

_OPS = set("+-*/^(),;")
_FUNCS = ("D", "I", "Ir")


def _tokenize(src):
    out = []
    line, col = 1, 1
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            out.append(("int", int(src[i:j]), line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            out.append(("name", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _OPS:
            out.append(("op", ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError("unexpected character %r" % ch, line, col)
    out.append(("end", None, line, col))
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value):
        kind, val, line, col = self.next()
        if kind != "op" or val != value:
            raise ParseError("expected %r" % value, line, col)

    def at_op(self, *values):
        kind, val, _, _ = self.peek()
        return kind == "op" and val in values

    def parse(self):
        node = self.expr()
        kind, val, line, col = self.peek()
        if kind != "end":
            raise ParseError("unexpected %r after expression" % (val,), line, col)
        return node

    def expr(self):
        node = self.term()
        while self.at_op("+", "-"):
            op = self.next()[1]
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.at_op("*", "/"):
            op = self.next()[1]
            rhs = self.factor()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def factor(self):
        if self.at_op("-"):
            self.next()
            return ("neg", self.factor())
        return self.power()

    def power(self):
        node = self.atom()
        if self.at_op("^"):
            self.next()
            sign = 1
            if self.at_op("-"):
                self.next()
                sign = -1
            kind, val, line, col = self.next()
            if kind != "int":
                raise ParseError("exponent must be an integer", line, col)
            node = ("pow", node, sign * val)
        return node

    def atom(self):
        kind, val, line, col = self.next()
        if kind == "end":
            raise ParseError("unexpected end of input", line, col)
        if kind == "int":
            return ("int", val)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "name":
            if self.at_op("("):
                if val not in _FUNCS:
                    raise UnknownName("unknown function %r at line %d col %d"
                                      % (val, line, col))
                self.next()
                args = []
                if not self.at_op(")"):
                    args.append(self.expr())
                    while self.at_op(",", ";"):
                        self.next()
                        args.append(self.expr())
                self.expect(")")
                return ("call", val, args)
            return ("name", val)
        raise ParseError("unexpected %r" % (val,), line, col)


def parse_expr(src):
    """Parse source text into an AST of nested tuples."""
    return _Parser(_tokenize(src)).parse()


def render_expr(node):
    """Text form of an AST; parse_expr(render_expr(x)) == x."""
    kind = node[0]
    if kind == "int":
        return str(node[1])
    if kind == "name":
        return node[1]
    if kind == "neg":
        return "-(%s)" % render_expr(node[1])
    if kind == "pow":
        return "(%s)^%d" % (render_expr(node[1]), node[2])
    if kind == "call":
        return "%s(%s)" % (node[1], ", ".join(render_expr(a) for a in node[2]))
    sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[kind]
    return "(%s) %s (%s)" % (render_expr(node[1]), sym, render_expr(node[2]))


# ---------------------------------------------------------------------------
# elaboration

_NAMES = {
    "E2": QMForm.e2,
    "E4": lambda: E4_FORM,
    "E6": lambda: E6_FORM,
    "Delta": lambda: DELTA_FORM,
    "j": lambda: J_FORM,
    "q": lambda: TruncatedLaurent.monomial(1),
}


def _is_series(x):
    return isinstance(x, (TruncatedLaurent, AElement))


def _to_laurent(x, order):
    if isinstance(x, TruncatedLaurent):
        return x
    if isinstance(x, (MeroModForm, QMForm)):
        return x.expand(order)
    if is_scalar(x):
        return TruncatedLaurent.monomial(0, qq(x))
    raise QMError("cannot use %r as a series" % (x,))


def _add(a, b, order):
    if isinstance(a, AElement) or isinstance(b, AElement):
        if not isinstance(a, AElement):
            a = AElement.from_series(_to_laurent(a, order))
        if not isinstance(b, AElement):
            b = AElement.from_series(_to_laurent(b, order))
        return a + b
    if _is_series(a) or _is_series(b):
        return _to_laurent(a, order) + _to_laurent(b, order)
    try:
        return a + b
    except WeightMismatch:
        raise NotHomogeneous("sum of modular forms of different weights")


def _mul(a, b, order):
    if isinstance(a, AElement) and isinstance(b, AElement):
        return a * b
    if isinstance(a, AElement) or isinstance(b, AElement):
        if isinstance(b, AElement):
            a, b = b, a
        return a * _to_laurent(b, order)
    if _is_series(a) or _is_series(b):
        return _to_laurent(a, order) * _to_laurent(b, order)
    return a * b


def _invert(x):
    if is_scalar(x):
        return QQ(1) / qq(x)
    if isinstance(x, QMForm):
        if x.depth > 0:
            raise QMError("cannot invert a quasimodular form of positive depth")
        x = x.coefficient(0)
    return x.invert()


def _pow(x, n):
    if n >= 0:
        if is_scalar(x):
            return qq(x) ** n
        return x ** n
    return _pow(_invert(x), -n)


def _derivative(x):
    if is_scalar(x):
        return QQ(0)
    if isinstance(x, MeroModForm):
        return qm_delta(QMForm([x]))
    if isinstance(x, QMForm):
        return qm_delta(x)
    return x.delta()


def _intify(x):
    if is_scalar(x):
        r = qq(x)
        if r.denominator == 1:
            return int(r)
    raise ParseError("Ir needs a literal integer repetition count")


def elaborate(node, order, engine=None):
    """Evaluate an AST; series-valued results are guaranteed through q^order.

    Modular atoms stay exact symbolic objects until they meet q or an
    integral, at which point they expand at the ambient order; callers
    should pass a margin above the order they intend to display.
    """
    if engine is None:
        engine = shared_engine()
    kind = node[0]
    if kind == "int":
        return qq(node[1])
    if kind == "name":
        maker = _NAMES.get(node[1])
        if maker is None:
            raise UnknownName("unknown name %r" % node[1])
        return maker()
    if kind == "neg":
        return -elaborate(node[1], order, engine)
    if kind == "pow":
        return _pow(elaborate(node[1], order, engine), node[2])
    if kind == "add":
        return _add(elaborate(node[1], order, engine),
                    elaborate(node[2], order, engine), order)
    if kind == "sub":
        b = elaborate(node[2], order, engine)
        return _add(elaborate(node[1], order, engine), -b, order)
    if kind == "mul":
        return _mul(elaborate(node[1], order, engine),
                    elaborate(node[2], order, engine), order)
    if kind == "div":
        return _mul(elaborate(node[1], order, engine),
                    _invert(elaborate(node[2], order, engine)), order)
    if kind == "call":
        name, args = node[1], node[2]
        if name == "D":
            if len(args) != 1:
                raise ParseError("D takes exactly one argument")
            return _derivative(elaborate(args[0], order, engine))
        if name == "Ir":
            if len(args) != 2:
                raise ParseError("Ir takes a series and a count")
            f = _to_laurent(elaborate(args[0], order, engine), order)
            r = _intify(elaborate(args[1], order, engine))
            return r_fold_primitive(f, r)
        if name == "I":
            fs = [_to_laurent(elaborate(a, order, engine), order) for a in args]
            need = required_input_order(fs, order)
            if need > order:
                fs = [_to_laurent(elaborate(a, need, engine), need) for a in args]
            return engine.iter_primitive(fs)
    raise QMError("malformed expression node %r" % (node,))


def evaluate(src, order, engine=None):
    """Parse and elaborate in one step."""
    return elaborate(parse_expr(src), order, engine)
