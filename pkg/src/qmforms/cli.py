"""Command line front end wiring the parsing, series, and modular engines.

Commands: expand, integrate, decompose, dims, independence, lyndon,
radford, selftest.  Output is deterministic: exact rationals render as
p/q, orderings are fixed, and --json switches to a stable JSON encoding.
Exit codes: 0 success, 1 verification failure or engine error, 2 usage
error (argparse and malformed input).
"""

import argparse
import json
import sys

from .errors import InsufficientPrecision, ParseError, QMError, UnknownName
from .expr import elaborate, parse_expr
from .integrals import required_input_order
from .modular import MeroModForm, Point
from .quasi import QMForm, decompose_complement, dim_tildeM, independence_check
from .rational import is_scalar, qq
from .series import AElement, TruncatedLaurent
from .words import (
    LetterRegistry,
    lyndon_words,
    radford_decompose,
    shared_engine,
)

_MARGIN = 16


def _emit(data, text):
    """Print text, or the JSON form when data is requested."""
    if data is not None:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def _elaborated(src, order):
    """Parse and elaborate with an adaptive internal margin."""
    ast = parse_expr(src)
    margin = _MARGIN
    for _attempt in range(3):
        try:
            return elaborate(ast, order + margin)
        except InsufficientPrecision:
            margin *= 4
    return elaborate(ast, order + margin)


def _as_series(value, order):
    if isinstance(value, (MeroModForm, QMForm)):
        return value.expand(order)
    if is_scalar(value):
        return TruncatedLaurent.monomial(0, qq(value))
    return value


def cmd_expand(args):
    value = _elaborated(args.expr, args.order)
    out = _as_series(value, args.order)
    if isinstance(out, AElement):
        out = out.truncate(args.order)
        data = {"a_element": out.to_json()} if args.json else None
        _emit(data, out.text())
        return 0
    out = out.truncate(args.order)
    data = None
    if args.json:
        data = {"series": out.to_json()}
        if isinstance(value, (MeroModForm, QMForm)) and value.weight is not None:
            data["weight"] = value.weight
    _emit(data, out.text())
    return 0


def cmd_integrate(args):
    engine = shared_engine()
    fs = []
    for src in args.exprs:
        v = _elaborated(src, args.order)
        fs.append(_as_series(v, args.order + _MARGIN))
        if isinstance(fs[-1], AElement):
            raise QMError("integrands must be t-free series")
    need = required_input_order(fs, args.order)
    if need > args.order + _MARGIN:
        fs = [_as_series(_elaborated(src, need), need) for src in args.exprs]
    result = engine.iter_primitive(fs)
    if result.min_order() > args.order:
        shown = result
    else:
        shown = result.truncate(args.order)
    _emit({"a_element": shown.to_json()} if args.json else None, shown.text())
    return 0


def _parse_point(text):
    name = text.strip()
    if name.startswith("j="):
        return Point.rational_j(qq(name[2:]))
    try:
        return Point(name)
    except QMError:
        raise UnknownName("unknown point %r" % name)


def _parse_support(text):
    if not text:
        return None
    return [_parse_point(part) for part in text.split(",") if part.strip()]


def _form_text(f):
    return f.text() if not is_scalar(f) else str(qq(f))


def cmd_decompose(args):
    value = _elaborated(args.expr, args.order)
    if is_scalar(value):
        value = MeroModForm(value)
    if isinstance(value, MeroModForm):
        value = QMForm([value])
    if not isinstance(value, QMForm):
        raise QMError("decompose needs a (quasi)modular expression")
    support = _parse_support(args.support)
    g, cls = decompose_complement(value, support)
    if args.json:
        _emit({
            "weight": cls.weight,
            "g": g.text(),
            "m": _form_text(cls.m_part),
            "tilde": _form_text(cls.tilde_part),
        }, None)
    else:
        print("weight: %s" % cls.weight)
        print("g     = %s" % g.text())
        print("m     = %s" % _form_text(cls.m_part))
        print("tilde = %s" % _form_text(cls.tilde_part))
    return 0


def _parse_k_range(text):
    lo, sep, hi = text.partition("..")
    if not sep:
        k = int(lo)
        return k, k
    return int(lo), int(hi)


def cmd_dims(args):
    support = _parse_support(args.support) or [Point.INF]
    if Point.INF not in support:
        support = [Point.INF] + support
    lo, hi = _parse_k_range(args.k)
    rows = []
    all_match = True
    for k in range(lo, hi + 1):
        if k % 2:
            continue
        formula, count = dim_tildeM(k, support)
        ok = formula == count
        all_match = all_match and ok
        rows.append({"k": k, "support": [p.text() for p in support],
                     "formula": formula, "count": count,
                     "match": ok})
    if args.json:
        _emit(rows, None)
    else:
        print("k   formula  count  match")
        for row in rows:
            print("%-3d %-8d %-6d %s" % (row["k"], row["formula"],
                                         row["count"],
                                         "ok" if row["match"] else "MISMATCH"))
    return 0 if all_match else 1


def cmd_independence(args):
    forms = []
    for src in args.exprs:
        v = _elaborated(src, args.order)
        if is_scalar(v):
            v = MeroModForm(v)
        if not isinstance(v, (MeroModForm, QMForm)):
            raise QMError("independence needs (quasi)modular expressions")
        forms.append(v)
    support = _parse_support(args.support)
    report = independence_check(forms, support)
    verdict = "independent" if report["independent"] else "dependent"
    if args.json:
        _emit({
            "count": report["count"],
            "rank": report["rank"],
            "verdict": verdict,
            "relations": [{str(i): str(c) for i, c in rel.items()}
                          for rel in report["relations"]],
        }, None)
    else:
        print("count: %d" % report["count"])
        print("rank:  %d" % report["rank"])
        for rel in report["relations"]:
            terms = " + ".join("(%s)*f%d" % (c, i) for i, c in sorted(rel.items()))
            print("relation: %s = 0 (mod derivatives and E2-multiples)" % terms)
        print(verdict)
    return 0


def _registry_from(names):
    reg = LetterRegistry()
    for name in names:
        reg.register(name.strip())
    return reg


def cmd_lyndon(args):
    names = [n for n in args.alphabet.split(",") if n.strip()]
    reg = _registry_from(names)
    found = lyndon_words(reg.alphabet(), args.maxlen)
    if args.json:
        _emit([w.to_json() for w in found], None)
    else:
        for w in found:
            print(w.text())
    return 0


def cmd_radford(args):
    names = [n for n in args.alphabet.split(",") if n.strip()]
    reg = _registry_from(names)
    word = reg.parse_word(args.word)
    poly = radford_decompose(word)
    if args.json:
        _emit(poly.to_json(), None)
    else:
        print(poly.text())
    return 0


def cmd_selftest(args):
    from .selftest import DEFAULT_SEED, run_all
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    ok = run_all(seed=seed, order=args.order)
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qmforms",
        description="exact series, modular forms, and iterated primitives")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, order=True):
        if order:
            p.add_argument("--order", type=int, default=40,
                           help="guaranteed q-expansion order (default 40)")
        p.add_argument("--json", action="store_true", help="JSON output")

    p = sub.add_parser("expand", help="q-expansion of an expression")
    p.add_argument("expr")
    common(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("integrate", help="renormalized iterated primitive")
    p.add_argument("exprs", nargs="+", metavar="expr")
    common(p)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("decompose", help="derivative + E2-line + pole-bounded part")
    p.add_argument("expr")
    p.add_argument("--support", default="",
                   help="allowed pole support, e.g. inf,i,rho,j=2")
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("dims", help="dimension formula vs basis count")
    p.add_argument("--k", default="2..24", help="weight or range like 2..24")
    p.add_argument("--support", default="inf", help="pole support list")
    common(p, order=False)
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("independence", help="algebraic independence certificate")
    p.add_argument("exprs", nargs="+", metavar="expr")
    p.add_argument("--support", default="")
    common(p)
    p.set_defaults(func=cmd_independence)

    p = sub.add_parser("lyndon", help="Lyndon words over an alphabet")
    p.add_argument("--alphabet", default="a,b")
    p.add_argument("--maxlen", type=int, default=4)
    common(p, order=False)
    p.set_defaults(func=cmd_lyndon)

    p = sub.add_parser("radford", help="polynomial in Lyndon words")
    p.add_argument("word", help="bracketed word like [b|a]")
    p.add_argument("--alphabet", default="a,b")
    common(p, order=False)
    p.set_defaults(func=cmd_radford)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--seed", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, UnknownName) as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 2
    except QMError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
