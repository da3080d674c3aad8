"""Exact rational scalars.

gmpy2.mpq when available (several times faster on long convolutions), else
fractions.Fraction. Both store reduced fractions with positive denominator
and print as "p" or "p/q".
"""

import fractions

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    QQ = fractions.Fraction

_QQ_TYPE = type(QQ(0))

# scalar types accepted by series/form constructors
SCALAR_TYPES = (int, _QQ_TYPE, fractions.Fraction)


def qq(value, den=None):
    """Coerce to an exact rational. Accepts ints, rationals and 'p/q' strings."""
    if isinstance(value, float):
        raise TypeError("refusing float %r; pass int, rational or 'p/q' string" % value)
    if den is not None:
        return QQ(value, den)
    if type(value) is _QQ_TYPE:
        return value
    return QQ(value)


def is_scalar(value):
    return isinstance(value, SCALAR_TYPES)


def format_rational(x):
    """Render as 'p' or 'p/q'."""
    return str(x)
