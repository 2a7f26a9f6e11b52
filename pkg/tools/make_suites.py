"""Regenerate src/dlcoh/data/suites/*.ids.

Every rule is instantiated on a fixed list of small tails y; an instance is
kept when all of its H-values can be resolved from the tables (whether it
then holds is left to `dlcoh verify`). At most PER_RULE instances per rule.
"""
import itertools
import sys
from pathlib import Path

from dlcoh.braid import CompletedBraidElt, braid_of_atoms
from dlcoh.cohomology import (IdentityInstance, Term, apply_rappel, evaluate, group_type,
                              load_table)
from dlcoh.errors import PatternMismatch, Unresolvable
from dlcoh.rings import BiPoly

PER_RULE = 5
OUT = Path(__file__).resolve().parent.parent / "src" / "dlcoh" / "data" / "suites"

TAILS = ["", "s", "t", "_s", "_t", "s s", "s t", "t s", "t t", "_s _t", "_t s", "s _t",
         "s t s", "t s t", "s t t", "t s s", "_s t", "t _s", "_s _t _s",
         "w0", "s w0", "t w0", "_s w0", "_t w0", "s t w0", "s s w0", "_s _t w0", "w0 w0",
         "pi", "s pi", "t pi", "_s pi", "_t pi", "s s pi", "pi pi",
         "s _s", "t _t", "st _t", "ts _s"]


def fmt_term(t: Term, first: bool) -> str:
    c = t.coeff
    neg = False
    if all(v < 0 for v in c.terms().values()):
        neg, c = True, -c
    body = f"{t.kind}({t.arg})"
    if c != BiPoly.coerce(1):
        cs = str(c)
        body = (f"({cs})" if "+" in cs or "-" in cs else cs) + " * " + body
    if first:
        return ("- " if neg else "") + body
    return ("- " if neg else "+ ") + body


def fmt(inst: IdentityInstance) -> str:
    side = lambda ts: " ".join(fmt_term(t, i == 0) for i, t in enumerate(ts)) or "0"
    if inst.relation == "even":
        return f"{inst.rule} | even {side(inst.lhs)}"
    return f"{inst.rule} | {side(inst.lhs)} = {side(inst.rhs)}"


def resolvable(gt, inst) -> bool:
    try:
        evaluate(gt, inst)
        return True
    except Unresolvable:
        return False


def candidates(gt):
    W = gt.system
    tails = []
    for y in TAILS:
        if "pi" in y and gt.period != "pi":
            continue
        if "w0" in y and gt.period != "w0":
            continue
        tails.append(gt.parse(y))
    for rule in ["rappel.ii", "rappel.iii", "rappel.iii'", "rappel.iv", "rappel.v",
                 "rappelA2.i", "rappelA2.i'", "rappelA2.ii", "rappelA2.iii",
                 "rappelB2.i", "rappelB2.ii", "rappelB2.iii",
                 "rappelG2.i", "rappelG2.ii", "rappelG2.iii", "rappelG2.iv", "rappelG2.v",
                 "rappelA2.v", "rappelB2.iv", "rappelG2.vi", "rappelA2.iv", "rappelB2.v"]:
        got = []
        for swap in (False, True):
            for y in tails:
                try:
                    inst = apply_rappel(rule, gt, y, swap=swap)
                except PatternMismatch:
                    continue
                if resolvable(gt, inst):
                    got.append(inst)
        yield rule, got
    # underlined products for the closed-form and parity rules
    atoms = ["_s", "_t", "_st", "_ts", "_sts", "_tst"]
    for rule in ["rappelA2.v", "rappelB2.iv", "rappelG2.vi", "rappelB2.v"]:
        got = []
        for k in (2, 3):
            for word in itertools.product(atoms, repeat=k):
                try:
                    inst = apply_rappel(rule, gt, " ".join(word))
                except PatternMismatch:
                    continue
                if resolvable(gt, inst):
                    got.append(inst)
        yield rule, got
    got = []
    for y in ["", "w0", "w0 w0", "_w0", "w0 _w0", "_w0 w0 w0", "pi"]:
        try:
            inst = apply_rappel("rappelB2.v", gt, y)
        except (PatternMismatch, Exception):
            continue
        if resolvable(gt, inst):
            got.append(inst)
    yield "rappelB2.v", got
    # H(xy) = H(y F(x)) on cuts of table keys
    got = []
    for e in load_table(gt):
        toks = e.key.tokens
        for cut in range(1, len(toks)):
            x = CompletedBraidElt(W, toks[:cut])
            y = CompletedBraidElt(W, toks[cut:])
            inst = apply_rappel("rappel.i", gt, y, x=x)
            if resolvable(gt, inst):
                got.append(inst)
    yield "rappel.i", got
    # rows carrying the formal eps, alone and shifted by the period
    got = []
    for e in load_table(gt):
        if not e.value.has_eps():
            continue
        for key in (e.key, e.key * gt.parse(gt.period)):
            toks = key.tokens
            for cut in range(1, len(toks)):
                x = CompletedBraidElt(W, toks[:cut])
                y = CompletedBraidElt(W, toks[cut:])
                inst = apply_rappel("rappel.i", gt, y, x=x)
                if resolvable(gt, inst):
                    got.append(inst)
    yield "rappel.i", got
    got = []
    for x, y in [("_s", ""), ("", "_t"), ("_s", "_t"), ("_t", "_s _t"), ("_st", "_s"), ("s", "")]:
        inst = apply_rappel("w0bar", gt, y, x=x)
        if resolvable(gt, inst):
            got.append(inst)
    yield "w0bar", got
    got = []
    bs = [" ".join(w) for n in range(0, 5) for w in itertools.product("st", repeat=n)]
    bs += [b + " " + gt.period for b in bs if len(b) <= 3]
    for gen in ("s", "t"):
        for b in bs:
            try:
                inst = apply_rappel("s^mb", gt, b, s=gen)
            except PatternMismatch:
                continue
            if resolvable(gt, inst):
                got.append(inst)
    yield "s^mb", got
    one = BiPoly.coerce(1)
    h2t = BiPoly.monomial(2, 2)
    got = []
    for y in ["", "t", "_t", "s t"]:
        Y = gt.parse(y)
        got.append(IdentityInstance("Id", [Term(one, "ID", gt.parse("s _s") * Y)],
                                    [Term(h2t, "ID", gt.parse("_s") * Y)]))
        got.append(IdentityInstance("Id", [Term(one, "ID", gt.parse("_s _s") * Y)],
                                    [Term(h2t + 1, "ID", gt.parse("_s") * Y)]))
    yield "Id", got
    got = []
    for y in ["", "t", "s t"]:
        Y = gt.parse(y)
        got.append(IdentityInstance("St", [Term(one, "ST", gt.parse("_s") * Y)], []))
        got.append(IdentityInstance("St", [Term(one, "ST", gt.parse("s") * Y)],
                                    [Term(BiPoly.monomial(0, 1), "ST", Y)]))
    yield "St", got


def main(tags):
    OUT.mkdir(parents=True, exist_ok=True)
    for tag in tags:
        gt = group_type(tag)
        lines = [f"# identity instances for {tag}; generated by tools/make_suites.py"]
        total = 0
        seen = set()
        for rule, insts in candidates(gt):
            kept = []
            for inst in insts:
                s = fmt(inst)
                if s not in seen:
                    seen.add(s)
                    kept.append(s)
            kept = kept[:PER_RULE]
            if kept:
                lines.append("")
                lines += kept
                total += len(kept)
        (OUT / f"{tag}.ids").write_text("\n".join(lines) + "\n")
        print(tag, total)


if __name__ == "__main__":
    main(sys.argv[1:] or ["A2", "2A2", "B2", "2B2", "G2", "2G2"])
