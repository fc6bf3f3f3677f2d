"""Command-line front end.

Subcommands: zeta, eis, theta, uop, vop, lambda, pullback, congruence,
integrality, weights, selftest. All numbers print as exact rationals;
q-expansions travel as JSON documents.
"""

import argparse
import json
import sys
from fractions import Fraction

from .errors import HilbertQexpError
from .rings import format_rational, parse_rational
from .serialize import load_field


def _read_qexp(path):
    from .qexp import QExpansion
    with open(path) as fh:
        return QExpansion.deserialize(fh.read())


def _emit_qexp(f, out):
    text = f.serialize()
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_zeta(args):
    from .congruences import local_abelian_data
    from .zeta import p_adic_zeta, zeta_special_value
    field = load_field(args.field)
    zv = zeta_special_value(field, args.k)
    if args.json:
        doc = {"zeta": format_rational(zv.value),
               "argument": zv.argument,
               "denominator_factors": {str(q): e for q, e in
                                       sorted(zv.denominator_factors.items())},
               "numerator_factors": {str(q): e for q, e in
                                     sorted(zv.numerator_factors.items())}}
        if zv.numerator_cofactor != 1:
            doc["numerator_cofactor"] = str(zv.numerator_cofactor)
        if args.p:
            doc["p_adic_zeta"] = format_rational(p_adic_zeta(field, args.p, args.k))
        print(json.dumps(doc, indent=1))
        return 0
    print("zeta_L(%d) = %s" % (zv.argument, format_rational(zv.value)))
    den = " * ".join("%d^%d" % (q, e) if e > 1 else str(q)
                     for q, e in sorted(zv.denominator_factors.items()))
    print("denominator = %s" % (den or "1"))
    from .rings import val_p
    for q in sorted(zv.denominator_factors):
        print("val_%d = %s" % (q, val_p(zv.value, q)))
    if args.p:
        print("zeta*_L(%d) at p=%d: %s"
              % (zv.argument, args.p,
                 format_rational(p_adic_zeta(field, args.p, args.k))))
    return 0


def _cmd_eis(args):
    from .eisenstein import (eisenstein_dagger, eisenstein_pstar,
                             eisenstein_qexp)
    from .qexp import dual_cusp, standard_cusp
    field = load_field(args.field)
    cusp = dual_cusp(field) if args.cusp == "dual" else standard_cusp(field)
    T = parse_rational(args.trace_bound)
    if args.pstar:
        f = eisenstein_pstar(field, args.pstar, args.k, trace_bound=T,
                             precision=args.prec, cusp=cusp)
    elif args.dagger:
        f = eisenstein_dagger(field, args.k, args.dagger, cusp=cusp,
                              trace_bound=T)
    else:
        f = eisenstein_qexp(field, args.k, cusp=cusp, trace_bound=T)
    _emit_qexp(f, args.out)
    return 0


def _find_prime(field, p, label):
    from .fields import factor_rational_prime
    for P in factor_rational_prime(field, p):
        if P.label == label:
            return P
    raise HilbertQexpError("no prime labelled %s over %d" % (label, p))


def _cmd_theta(args):
    from .theta_ops import padic_theta, theta
    f = _read_qexp(args.infile)
    p = getattr(f.ring, "p", None)
    if p is None:
        raise HilbertQexpError("expansion ring has no distinguished prime")
    P = _find_prime(f.field, p, args.prime_label)
    if f.ring.kind == "padic":
        out = padic_theta(f, P, args.i, args.j)
    else:
        out = theta(f, P, args.i, args.j)
    _emit_qexp(out, args.out)
    return 0


def _cmd_uop(args):
    from .theta_ops import U
    _emit_qexp(U(_read_qexp(args.infile)), args.out)
    return 0


def _cmd_vop(args):
    from .theta_ops import V
    _emit_qexp(V(_read_qexp(args.infile)), args.out)
    return 0


def _cmd_lambda(args):
    from .theta_ops import Lambda
    _emit_qexp(Lambda(_read_qexp(args.infile)), args.out)
    return 0


def _cmd_pullback(args):
    from .functorial import pullback_qexp
    f = _read_qexp(args.infile)
    if args.target_field not in (None, "Q"):
        raise HilbertQexpError("only --target-field Q is built in")
    _emit_qexp(pullback_qexp(f), args.out)
    return 0


def _cmd_congruence(args):
    from .congruences import verify_congruence
    field = load_field(args.field)
    rep = verify_congruence(field, args.p, args.k, args.kprime)
    if args.json:
        out = {"predicted_min": rep["predicted_min"], "actual": rep["actual"],
               "pass": rep["pass"]}
        print(json.dumps(out))
    else:
        print("predicted val_%d >= %s, actual = %s -> %s"
              % (args.p, rep["predicted_min"], rep["actual"],
                 "PASS" if rep["pass"] else "FAIL"))
    return 0 if rep["pass"] else 1


def _cmd_integrality(args):
    from .congruences import check_integrality
    field = load_field(args.field)
    rep = check_integrality(field, args.p, args.k)
    if args.json:
        print(json.dumps(rep))
    else:
        if rep["integral"]:
            print("2^-g zeta_L(1-%d) is %d-integral -> PASS" % (args.k, args.p))
        else:
            print("n = %d, requires %d | k=%d -> %s"
                  % (rep["n"], rep["required_divisor"], args.k,
                     "PASS" if rep["pass"] else "FAIL"))
    return 0 if rep["pass"] else 1


def _cmd_weights(args):
    from .weights import WeightSpace
    field = load_field(args.field)
    space = WeightSpace(field, args.p)
    doc = {
        "p": args.p,
        "pairs": ["%s,%d" % pair for pair in space.pairs],
        "psi_weights": {"%s,%d" % pair: space.psi(*pair).describe()["exps"]
                        for pair in space.pairs},
        "hasse_lattice_index": space.hasse_lattice_index(),
        "ordinary_box": {"%s,%d" % pair: list(v) for pair, v in
                         space.ordinary_box()["box"].items()},
    }
    refine = space.ordinary_box()["totally_ramified_intro_refinement"]
    if refine:
        doc["ordinary_box_intro_refinement"] = {
            "%s,%d" % pair: list(v) for pair, v in refine.items()}
    print(json.dumps(doc, indent=1))
    return 0


def _cmd_selftest(args):
    from .acceptance import run_acceptance
    rows = run_acceptance(fast=args.fast)
    width = max(len(r["name"]) for r in rows)
    failed = 0
    for r in rows:
        status = "PASS" if r["ok"] else "FAIL"
        if not r["ok"]:
            failed += 1
        print("%-*s  %s  %s" % (width, r["name"], status, r.get("detail", "")))
    print("%d/%d criteria passed" % (len(rows) - failed, len(rows)))
    return 0 if failed == 0 else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="hilbert-qexp", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    z = sub.add_parser("zeta", help="Dedekind zeta special values")
    z.add_argument("--field", required=True)
    z.add_argument("--k", type=int, required=True)
    z.add_argument("--p", type=int, default=None)
    z.add_argument("--json", action="store_true")
    z.set_defaults(fn=_cmd_zeta)

    e = sub.add_parser("eis", help="Eisenstein q-expansions")
    e.add_argument("--field", required=True)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--trace-bound", default="4")
    e.add_argument("--cusp", choices=["standard", "dual"], default="standard")
    e.add_argument("--dagger", type=int, default=None, metavar="P")
    e.add_argument("--pstar", type=int, default=None, metavar="P")
    e.add_argument("--prec", type=int, default=2)
    e.add_argument("--out", default=None)
    e.set_defaults(fn=_cmd_eis)

    t = sub.add_parser("theta", help="theta operator on a q-expansion file")
    t.add_argument("--in", dest="infile", required=True)
    t.add_argument("--prime-label", default="P1")
    t.add_argument("--i", type=int, default=1)
    t.add_argument("--j", type=int, default=0)
    t.add_argument("--out", default=None)
    t.set_defaults(fn=_cmd_theta)

    for name, fn in (("uop", _cmd_uop), ("vop", _cmd_vop),
                     ("lambda", _cmd_lambda)):
        s = sub.add_parser(name, help="%s operator" % name)
        s.add_argument("--in", dest="infile", required=True)
        s.add_argument("--out", default=None)
        s.set_defaults(fn=fn)

    pb = sub.add_parser("pullback", help="base-change pullback to Q")
    pb.add_argument("--in", dest="infile", required=True)
    pb.add_argument("--target-field", default="Q")
    pb.add_argument("--out", default=None)
    pb.set_defaults(fn=_cmd_pullback)

    c = sub.add_parser("congruence", help="verify a zeta congruence")
    c.add_argument("--field", required=True)
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--kprime", type=int, required=True)
    c.add_argument("--json", action="store_true")
    c.set_defaults(fn=_cmd_congruence)

    ig = sub.add_parser("integrality", help="check the denominator theorem")
    ig.add_argument("--field", required=True)
    ig.add_argument("--p", type=int, required=True)
    ig.add_argument("--k", type=int, required=True)
    ig.add_argument("--json", action="store_true")
    ig.set_defaults(fn=_cmd_integrality)

    w = sub.add_parser("weights", help="weight-lattice data at p")
    w.add_argument("--field", required=True)
    w.add_argument("--p", type=int, required=True)
    w.set_defaults(fn=_cmd_weights)

    st = sub.add_parser("selftest", help="run the acceptance suite")
    st.add_argument("--fast", action="store_true",
                    help="skip the slowest golden values")
    st.set_defaults(fn=_cmd_selftest)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except HilbertQexpError as exc:
        if getattr(args, "json", False):
            print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        else:
            print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
