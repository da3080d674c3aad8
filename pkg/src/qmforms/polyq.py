"""Dense univariate polynomials over exact rationals.

Coefficients are stored ascending by degree with trailing zeros trimmed.
Includes exact division, monic gcd, Yun squarefree decomposition, and a
complete rational-root finder (divisor candidates from integer
factorization, so no root is ever missed).
"""

import math

from .rational import QQ, qq, is_scalar

_ZERO = QQ(0)
_ONE = QQ(1)


def _trim(coeffs):
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Polynomial in one variable with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, Poly):
            self.coeffs = coeffs.coeffs
            return
        if is_scalar(coeffs):
            coeffs = (coeffs,)
        self.coeffs = _trim([qq(c) for c in coeffs])

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def one(cls):
        return cls((1,))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def monomial(cls, n, c=1):
        return cls((0,) * n + (c,))

    @property
    def degree(self):
        # degree of the zero polynomial is -1 by convention
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def coefficient(self, n):
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return _ZERO

    @property
    def lead(self):
        if not self.coeffs:
            return _ZERO
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if is_scalar(other):
            return self.coeffs == _trim([qq(other)])
        return NotImplemented

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __add__(self, other):
        if is_scalar(other):
            other = Poly((other,))
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-Poly(other) if not isinstance(other, Poly) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_scalar(other):
            c = qq(other)
            if not c:
                return Poly.zero()
            return Poly([a * c for a in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] = out[i + j] + ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        if is_scalar(other):
            other = Poly((other,))
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly.zero(), self
        quo = [_ZERO] * (dq + 1)
        inv_lead = _ONE / other.coeffs[-1]
        for i in range(dq, -1, -1):
            c = rem[i + len(other.coeffs) - 1] * inv_lead
            if c:
                quo[i] = c
                for j, oc in enumerate(other.coeffs):
                    rem[i + j] = rem[i + j] - c * oc
        return Poly(quo), Poly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        quo, rem = divmod(self, other)
        if not rem.is_zero():
            raise ValueError("inexact polynomial division")
        return quo

    def monic(self):
        if not self.coeffs:
            return self
        return self * (_ONE / self.coeffs[-1])

    def derivative(self):
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, x):
        """Horner evaluation; works for any x supporting * and + with QQ."""
        if not self.coeffs:
            return _ZERO * x if not is_scalar(x) else _ZERO
        acc = None
        for c in reversed(self.coeffs):
            if acc is None:
                acc = x * 0 + c if not is_scalar(x) else qq(c)
            else:
                acc = acc * x + c
        return acc

    def __call__(self, x):
        return self.evaluate(x)

    def shift_root(self, c):
        """Compose with x -> x + c."""
        acc = Poly.zero()
        lin = Poly((qq(c), 1))
        for coef in reversed(self.coeffs):
            acc = acc * lin + Poly((coef,))
        return acc

    def text(self, var="x"):
        if not self.coeffs:
            return "0"
        parts = []
        for n in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[n]
            if not c:
                continue
            if n == 0:
                term = str(abs(c))
            else:
                mag = abs(c)
                base = var if n == 1 else "%s^%d" % (var, n)
                num, den = mag.numerator, mag.denominator
                if num == 1 and den == 1:
                    term = base
                elif den == 1:
                    term = "%d*%s" % (num, base)
                elif num == 1:
                    term = "%s/%d" % (base, den)
                else:
                    term = "%d*%s/%d" % (num, base, den)
            if not parts:
                parts.append(term if c > 0 else "-" + term)
            else:
                parts.append(("+ " if c > 0 else "- ") + term)
        return " ".join(parts)

    def __repr__(self):
        return "Poly(%s)" % self.text()


def poly_gcd(a, b):
    """Monic greatest common divisor."""
    a, b = Poly(a), Poly(b)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def squarefree_decomposition(p):
    """Yun's algorithm: list of (monic squarefree factor, multiplicity).

    The product of factor^multiplicity over the list equals p up to the
    leading coefficient; factors of degree zero are dropped.
    """
    p = Poly(p)
    if p.degree <= 0:
        return []
    p = p.monic()
    dp = p.derivative()
    g = poly_gcd(p, dp)
    out = []
    if g.degree == 0:
        return [(p, 1)]
    w = p.exact_div(g)
    y = dp.exact_div(g)
    z = y - w.derivative()
    i = 1
    while not w.degree == 0:
        f = poly_gcd(w, z)
        if f.degree > 0:
            out.append((f.monic(), i))
        w2 = w.exact_div(f) if f.degree > 0 else w
        y2 = z.exact_div(f) if f.degree > 0 else z
        w, y = w2, y2
        z = y - w.derivative()
        i += 1
    return out


# ---------------------------------------------------------------------------
# integer factorization support for the complete rational-root search

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_probable_prime(n):
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n):
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1


def factorint(n):
    """Prime factorization of abs(n) as a dict prime -> exponent."""
    n = abs(int(n))
    out = {}
    if n <= 1:
        return out
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return out


def divisors(n):
    """Sorted positive divisors of abs(n)."""
    out = [1]
    for p, e in factorint(n).items():
        out = [d * p ** i for d in out for i in range(e + 1)]
    return sorted(out)


def rational_roots(p):
    """All rational roots of p with multiplicities, plus the rootless part.

    Returns (roots, residual) where roots is a list of (QQ root, int mult)
    sorted by root and residual is the monic cofactor with no rational
    roots.  Complete: candidate search covers every divisor pair of the
    integer-cleared trailing and leading coefficients.
    """
    p = Poly(p)
    if p.degree <= 0:
        return [], Poly.one() if not p.is_zero() else Poly.zero()
    roots = []
    residual = Poly.one()
    for factor, mult in squarefree_decomposition(p):
        f = factor
        # strip x = 0 roots first so the trailing coefficient is nonzero
        nzero = 0
        while f.degree > 0 and not f.coefficient(0):
            f = f.exact_div(Poly.x())
            nzero += 1
        if nzero:
            roots.append((_ZERO, mult))
        if f.degree > 0:
            den_lcm = 1
            for c in f.coeffs:
                den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, int(c.denominator))
            ints = [int(c * den_lcm) for c in f.coeffs]
            a0, an = ints[0], ints[-1]
            for num in divisors(a0):
                if f.degree == 0:
                    break
                for den in divisors(an):
                    if math.gcd(num, den) != 1:
                        continue
                    for cand in (QQ(num, den), QQ(-num, den)):
                        if not f.evaluate(cand):
                            roots.append((cand, mult))
                            f = f.exact_div(Poly((-cand, 1)))
                if f.degree == 0:
                    break
        if f.degree > 0:
            residual = residual * f ** mult
    roots.sort(key=lambda rm: rm[0])
    return roots, residual.monic() if not residual.is_zero() else residual
