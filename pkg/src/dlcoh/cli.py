"""Command line entry point: `dlcoh <subcommand> ...`.

Exit codes: 0 success, 1 failed verification or check, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import braid as br
from . import cohomology as co
from . import hecke as hk
from .coxeter import CoxeterSystem, parse_coxeter_config, preset
from .errors import DLCohError, ParseError
from .rings import BiPoly

TYPES = ("A2", "2A2", "B2", "2B2", "G2", "2G2")


class InputError(Exception):
    pass


def _system(args) -> CoxeterSystem:
    if getattr(args, "config", None):
        return parse_coxeter_config(args.config)
    name = args.type
    if name.startswith("2") and name[1:] in ("A2", "B2", "G2"):
        name = name[1:]
    try:
        return preset(name)
    except (KeyError, ValueError) as e:
        raise InputError(str(e)) from None


def _twisted(args) -> bool:
    return args.type.startswith("2") or bool(getattr(args, "F", False))


def _element(W: CoxeterSystem, word: str):
    word = word.strip()
    if word in ("", "1", "e"):
        return W.identity
    if word == "w0":
        return W.longest_element()
    if not W.is_reduced_word(word):
        raise ParseError(f"{word!r} is not a reduced word")
    return W.element(word)


def cmd_nf(args):
    W = _system(args)
    b = br.parse_braid(W, args.expr)
    return {"input": args.expr, "normal_form": str(b),
            "factors": [W.word(a) for a in b.atoms()], "length": b.length,
            "alpha": W.word(br.alpha(b)) or "1"}


def cmd_divides(args):
    W = _system(args)
    a, b = br.parse_braid(W, args.a), br.parse_braid(W, args.b)
    return {"a": args.a, "b": args.b, "divides": br.left_divides(a, b)}


def cmd_classify(args):
    W = preset("A2")
    b = br.parse_braid(W, args.expr)
    d = br.a2_classify(b, max_length=args.max_length)
    return {"input": args.expr, "n": d.n, "kind": d.kind, "params": list(d.params),
            "phi": d.phi, "representative": d.representative_word(), "descriptor": str(d)}


def cmd_hecke(args):
    W = _system(args)
    c = br.parse_completed(W, args.expr)
    h = hk.eval_completed(c)
    return {"input": args.expr, "hecke": str(h),
            "coefficients": {W.word(W.elements[w]) or "1": str(p)
                             for w, p in sorted(h.coeffs.items())}}


def cmd_kl(args):
    W = _system(args)
    table = hk.kl_polynomials(W)
    if args.csv:
        return {"csv": table.to_csv()}
    y, w = _element(W, args.y), _element(W, args.w)
    return {"y": args.y, "w": args.w, "P": str(table.P(y, w)), "mu": table.mu(y, w)}


def cmd_smooth(args):
    W = _system(args)
    w = _element(W, args.w)
    return {"w": args.w, "smooth": hk.is_rationally_smooth(w)}


def cmd_trace(args):
    W = _system(args)
    specs = hk.char_specs(W.label, _twisted(args))
    if args.char not in specs:
        raise InputError(f"unknown character {args.char!r}; have {', '.join(specs)}")
    c = br.parse_completed(W, args.expr)
    tr = hk.char_trace(specs[args.char], hk.eval_completed(c))
    out = {"input": args.expr, "char": args.char, "F": _twisted(args), "trace": str(tr)}
    if args.minus_ht:
        out["trace_at_-ht"] = str(tr.subst_minus_ht())
    return out


def cmd_H(args):
    gt = co.group_type(args.type)
    c = gt.parse(args.expr)
    if args.closed_form:
        H = co.closed_form_H(gt, c)
    elif args.table_only:
        H = co.table_H(gt, c)
    else:
        H = co.resolve_H(gt, c)
    return {"input": args.expr, "H": gt.display(H),
            "Id": str(co.id_component(gt, c)), "St": str(co.st_component(gt, c))}


def cmd_verify(args):
    gt = co.group_type(args.type)
    suite = co.load_suite(gt, args.suite)
    rep = co.verify_tables(gt, suite, threads=args.threads)
    fails = [{"line": i.line, "instance": str(i), "detail": m} for i, m in rep.failures()]
    out = {"type": gt.tag, "instances": len(rep.results), "passed": rep.passed,
           "rules": rep.rules, "failures": fails}
    if gt.tag == "2G2":
        eps = co.check_2g2(suite)
        out["eps"] = {"involved": sum(r.involves_eps for r in eps),
                      "constraining": [str(r.instance) for r in eps if r.constrains]}
    return out


def cmd_conj(args):
    if args.which == "a2":
        W = preset("A2")
        b = br.parse_braid(W, args.expr or "")
        ok, H, pred = co.check_conjA2(b)
        return {"input": args.expr, "holds": ok, "H": H.to_dict(), "predicted": str(pred)}
    specs = hk.char_specs(_system(args).label, _twisted(args))
    names = [args.char] if args.char else list(specs)
    out = {}
    for n in names:
        if n not in specs:
            raise InputError(f"unknown character {n!r}")
        if args.which == "Ahm1":
            ok, k = co.check_conjA_hm1(specs[n])
            out[n] = {"holds": ok, "exponent": k}
        else:
            W = specs[n].system
            ws = [_element(W, args.expr)] if args.expr else W.elements
            out[n] = {"holds": all(co.check_conjB_hm1(specs[n], w) for w in ws)}
    return {"check": args.which, "type": args.type, "results": out,
            "holds": all(r["holds"] for r in out.values())}


def _text(d) -> str:
    if "csv" in d:
        return d["csv"].rstrip("\n")
    lines = []
    for k, v in d.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v)
        lines.append(f"{k}: {v}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dlcoh", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, fn, help, typed=True, default_type="A2"):
        q = sub.add_parser(name, help=help)
        q.set_defaults(fn=fn)
        if typed:
            q.add_argument("--type", default=default_type, help="preset, I2(m), or a twisted tag")
            q.add_argument("--config", help="Coxeter config, e.g. 'rank=2; m(s,t)=3; names=st'")
        q.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        return q

    q = add("nf", cmd_nf, "Garside normal form of a positive braid")
    q.add_argument("expr")
    q = add("divides", cmd_divides, "left divisibility a <= b")
    q.add_argument("a")
    q.add_argument("b")
    q = add("classify-a2", cmd_classify, "A2 conjugacy class descriptor and phi", typed=False)
    q.add_argument("expr")
    q.add_argument("--max-length", type=int, default=20)
    q = add("hecke", cmd_hecke, "T-basis expansion of a completed braid")
    q.add_argument("expr")
    q = add("kl", cmd_kl, "Kazhdan-Lusztig polynomial P_{y,w}", default_type="A3")
    q.add_argument("y", nargs="?", default="")
    q.add_argument("w", nargs="?", default="")
    q.add_argument("--csv", action="store_true", help="dump the whole table")
    q = add("smooth", cmd_smooth, "rational smoothness test P_{1,w} = 1", default_type="A3")
    q.add_argument("w")
    q = add("trace", cmd_trace, "character trace of a completed braid")
    q.add_argument("expr")
    q.add_argument("--char", default="rho")
    q.add_argument("--F", action="store_true", help="twist by F (implied for 2A2, 2B2, 2G2)")
    q.add_argument("--minus-ht", action="store_true", help="also print the value at x = -ht")
    q = sub.add_parser("H", help="graded character H(y)")
    q.set_defaults(fn=cmd_H)
    q.add_argument("--type", choices=TYPES, default="A2")
    q.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    q.add_argument("expr")
    g = q.add_mutually_exclusive_group()
    g.add_argument("--closed-form", action="store_true")
    g.add_argument("--table-only", action="store_true")
    q = sub.add_parser("verify", help="run an identity suite")
    q.set_defaults(fn=cmd_verify)
    q.add_argument("--type", choices=TYPES, required=True)
    q.add_argument("--suite", help="suite file (default: the shipped one)")
    q.add_argument("--threads", type=int, default=1)
    q.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    q = add("conj", cmd_conj, "conjecture checks: a2, Ahm1, Bhm1")
    q.add_argument("which", choices=("a2", "Ahm1", "Bhm1"))
    q.add_argument("expr", nargs="?", default="")
    q.add_argument("--char")
    q.add_argument("--F", action="store_true")
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    p = build_parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        res = args.fn(args)
    except (ParseError, InputError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except DLCohError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    if args.format == "json":
        print(json.dumps(res, sort_keys=False), file=out)
    else:
        print(_text(res), file=out)
    if args.cmd == "verify":
        return 0 if res["passed"] else 1
    if args.cmd == "conj":
        return 0 if res["holds"] else 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
