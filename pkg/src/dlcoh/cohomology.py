"""Graded characters H(y) for rank-2 groups: closed forms, tables, identities.

A value H(y) is a GradedChar, a map from unipotent character symbols to
polynomials in Z[t^(1/2), h] (plus an optional formal eps). Id and St are
never stored in H(y); `id_component` / `st_component` compute them apart.

Six group types are registered. Each knows its Coxeter system, its F, the
symbols it tracks, the central periodicity element P (pi or w0) with its
factor, and the Ennola permutation E, so that

    H(y P^n) = factor^n * E^n(H(y)).

Bundled symbols: in 2B2 "rho" is the sum of the two cuspidal characters; in
2G2 the tracked symbols are Ri, Rpi, Z (sums over Galois orbits) and the
shorthands A = Ri + Z, B = Rpi + Z are accepted on input and used on output.
"""
from __future__ import annotations

import os
import re
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable

from .braid import (BraidElt, CompletedBraidElt, _normal_form, a2_classify, braid_of_atoms,
                    f_action, left_cancel, parse_completed, pi, strip_central, unit,
                    w0 as w0_braid, zb_image)
from .coxeter import CoxeterSystem, DiagramAutomorphism, preset
from .errors import (HNotKnown, NotDivisor, NotInTable, NotScalar, NotUnderlinedProduct,
                     ParseError, PatternMismatch, Unresolvable)
from .hecke import (CharSpec, HeckeElt, T, central_char_pi, char_specs, char_trace,
                    eval_completed, hecke_mult, invert_T)
from .rings import AlgebraicNumber, BiPoly, LaurentPoly, parse_bipoly

__all__ = [
    "GradedChar", "GroupType", "group_type", "GROUP_TYPES", "closed_form_H", "table_H",
    "trace_formula_hm1", "id_component", "st_component", "rank1_H", "TableEntry",
    "load_table", "IdentityInstance", "apply_rappel", "RULES", "parse_suite", "load_suite",
    "verify_tables", "check_conjA_hm1", "check_conjB_hm1", "check_conjA2",
    "fclass_invariance_suite", "data_dir",
]

H2T = BiPoly.monomial(2, 2)         # h^2 t
ZERO = BiPoly()


# ---------------------------------------------------------------- graded characters

class GradedChar:
    """symbol -> BiPoly, zero entries dropped."""

    __slots__ = ("values",)

    def __init__(self, values: dict[str, BiPoly] | None = None):
        self.values = {k: BiPoly.coerce(v) for k, v in (values or {}).items()
                       if not BiPoly.coerce(v).is_zero()}

    def __getitem__(self, sym: str) -> BiPoly:
        return self.values.get(sym, ZERO)

    def symbols(self) -> set[str]:
        return set(self.values)

    def is_zero(self) -> bool:
        return not self.values

    def __add__(self, o: "GradedChar") -> "GradedChar":
        out = dict(self.values)
        for k, v in o.values.items():
            out[k] = out.get(k, ZERO) + v
        return GradedChar(out)

    def __neg__(self):
        return GradedChar({k: -v for k, v in self.values.items()})

    def __sub__(self, o: "GradedChar") -> "GradedChar":
        return self + (-o)

    def scale(self, c) -> "GradedChar":
        c = BiPoly.coerce(c)
        return GradedChar({k: c * v for k, v in self.values.items()})

    __rmul__ = scale

    def permute(self, perm: dict[str, str]) -> "GradedChar":
        return GradedChar({perm.get(k, k): v for k, v in self.values.items()})

    def specialize_h(self, value: int) -> "GradedChar":
        return GradedChar({k: v.specialize_h(value) for k, v in self.values.items()})

    def specialize_eps(self, value: int) -> "GradedChar":
        return GradedChar({k: v.specialize_eps(value) for k, v in self.values.items()})

    def has_eps(self) -> bool:
        return any(v.has_eps() for v in self.values.values())

    def coefficients(self) -> list[int]:
        return [c for v in self.values.values() for c in v.coefficients()]

    def first_difference(self, o: "GradedChar") -> tuple | None:
        """(symbol, (t_halves, h, eps), mine, theirs) for the first mismatch."""
        d = self - o
        for sym in sorted(d.values):
            for key in sorted(d.values[sym].terms()):
                return sym, key, self[sym].coefficient(*key), o[sym].coefficient(*key)
        return None

    def __eq__(self, o):
        if isinstance(o, int) and o == 0:
            return self.is_zero()
        return isinstance(o, GradedChar) and o.values == self.values

    def __hash__(self):
        return hash(frozenset(self.values.items()))

    def to_dict(self) -> dict[str, str]:
        return {k: str(self.values[k]) for k in sorted(self.values)}

    def __repr__(self):
        return f"GradedChar({self.to_dict()})"

    def __str__(self):
        if not self.values:
            return "0"
        return " + ".join(f"({v})*{k}" for k, v in sorted(self.values.items()))


# ---------------------------------------------------------------- group types

# symbol -> ([(coefficient, spec name)], k, m): H_sym = sum(c * Tr(. | spec)) / (k * sqrt(m))
ClosedForm = dict[str, tuple[list[tuple[AlgebraicNumber, str]], int, int]]

_ONE = AlgebraicNumber(1)
_R3 = AlgebraicNumber.sqrt(3)


def _cf(*terms, k=1, m=1):
    return ([(AlgebraicNumber.coerce(c), name) for c, name in terms], k, m)


@dataclass
class GroupType:
    tag: str
    base: str
    twisted: bool
    symbols: tuple[str, ...]
    period: str                              # "pi" or "w0"
    factor: BiPoly
    ennola: dict[str, str]
    closed_forms: ClosedForm
    aliases: dict[str, dict[str, int]] = field(default_factory=dict)
    swap_symmetric: bool = False             # H(y) = H(sigma(y)) for the s<->t swap
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.system: CoxeterSystem = preset(self.base)
        names = self.system.generator_names
        self.F: DiagramAutomorphism = (self.system.diagram_automorphism(names[::-1])
                                       if self.twisted else self.system.diagram_automorphism())
        self.swap = self.system.diagram_automorphism(names[::-1])
        self.specs: dict[str, CharSpec] = char_specs(self.base, self.twisted)
        self.P: BraidElt = pi(self.system) if self.period == "pi" else w0_braid(self.system)
        for a, b in self.ennola.items():
            if self.ennola.get(b, b) != a:
                raise ValueError(f"{self.tag}: Ennola map is not an involution")

    def E(self, g: GradedChar, n: int = 1) -> GradedChar:
        return g.permute(self.ennola) if n % 2 else g

    def expand(self, values: dict[str, BiPoly]) -> GradedChar:
        """Rewrite input shorthands (2G2's A, B) in tracked symbols."""
        out = GradedChar()
        for sym, v in values.items():
            if sym in self.aliases:
                out = out + GradedChar({k: v * c for k, c in self.aliases[sym].items()})
            elif sym in self.symbols:
                out = out + GradedChar({sym: v})
            else:
                raise ParseError(f"{self.tag}: unknown symbol {sym!r}")
        return out

    def display(self, g: GradedChar) -> dict[str, str]:
        if self.tag != "2G2":
            return g.to_dict()
        a, b = g["Ri"], g["Rpi"]
        return GradedChar({"A": a, "B": b, "Z": g["Z"] - a - b}).to_dict()

    def parse(self, text: str):
        return parse_completed(self.system, text)

    def __repr__(self):
        return f"GroupType({self.tag})"


def _make_types() -> dict[str, GroupType]:
    a2 = {"rho": _cf((1, "rho"))}
    b2 = {
        "sigma": _cf((1, "sigma"), (-1, "tau"), (1, "rho"), k=2),
        "tau": _cf((-1, "sigma"), (1, "tau"), (1, "rho"), k=2),
        "rho": _cf((1, "sigma"), (1, "tau"), (1, "rho"), k=2),
        "theta": _cf((-1, "sigma"), (-1, "tau"), (1, "rho"), k=2),
    }
    g2 = {
        "A": _cf((1, "A"), (3, "B"), (2, "sigma"), (2, "tau"), k=6),
        "sigma": _cf((2, "A"), (4, "sigma"), (-2, "tau"), k=6),
        "tau": _cf((2, "A"), (-2, "sigma"), (4, "tau"), k=6),
        "rho": _cf((1, "A"), (-3, "B"), (2, "sigma"), (2, "tau"), k=6),
        "J": _cf((2, "A"), (-2, "sigma"), (-2, "tau"), k=6),
    }
    # 1/2 (A/sqrt3 +- B) = (A +- sqrt3 B) / (2 sqrt3)
    g2t = {
        "Ri": _cf((1, "A"), (_R3, "B"), k=2, m=3),
        "Rpi": _cf((1, "A"), (-_R3, "B"), k=2, m=3),
        "Z": _cf((1, "A"), m=3),
    }
    p8 = BiPoly.monomial(6, 8)
    p5 = BiPoly.monomial(4, 5)
    p7 = BiPoly.monomial(6, 7)
    types = [
        GroupType("A2", "A2", False, ("rho",), "pi", p8, {}, a2, swap_symmetric=True),
        GroupType("2A2", "A2", True, ("rho",), "pi", p8, {}, a2),
        GroupType("B2", "B2", False, ("sigma", "tau", "rho", "theta"), "w0", p5,
                  {"sigma": "tau", "tau": "sigma", "rho": "theta", "theta": "rho"}, b2),
        GroupType("2B2", "B2", True, ("rho",), "w0", p5, {},
                  {"rho": _cf((1, "rho"), m=2)},
                  metadata={"rho": "sum of the two cuspidal unipotent characters"}),
        GroupType("G2", "G2", False, ("sigma", "tau", "A", "rho", "J"), "w0", p7,
                  {"A": "rho", "rho": "A"}, g2,
                  metadata={"J": "sum of the two characters with eigenvalues j, j^2"}),
        GroupType("2G2", "G2", True, ("Ri", "Rpi", "Z"), "w0", p7,
                  {"Ri": "Rpi", "Rpi": "Ri"}, g2t,
                  aliases={"A": {"Ri": 1, "Z": 1}, "B": {"Rpi": 1, "Z": 1}},
                  metadata={"Ri": "rho_i + rho_-i", "Rpi": "rho'_i + rho'_-i",
                            "Z": "rho_zeta12^5 + rho_zeta12^7"}),
    ]
    return {g.tag: g for g in types}


GROUP_TYPES: dict[str, GroupType] = {}


def group_type(tag: str | GroupType) -> GroupType:
    if isinstance(tag, GroupType):
        return tag
    if not GROUP_TYPES:
        GROUP_TYPES.update(_make_types())
    try:
        return GROUP_TYPES[tag]
    except KeyError:
        raise ValueError(f"unknown group type {tag!r}; expected one of A2 2A2 B2 2B2 G2 2G2") from None


# ---------------------------------------------------------------- closed forms

def _trace_combination(gt: GroupType, h: HeckeElt) -> dict[str, LaurentPoly]:
    traces = {name: char_trace(spec, h) for name, spec in gt.specs.items()}
    out = {}
    for sym, (terms, k, m) in gt.closed_forms.items():
        total = LaurentPoly()
        for c, name in terms:
            total = total + traces[name] * c
        if m != 1:
            total = total.mul_sqrt(m)
        out[sym] = total.div_int(k * m)
    return out


def closed_form_H(gt: GroupType | str, c: CompletedBraidElt | str) -> GradedChar:
    """H of a product of underlined atoms, from character traces at x = h^2 t."""
    gt = group_type(gt)
    if isinstance(c, str):
        c = gt.parse(c)
    if not c.all_underlined():
        raise NotUnderlinedProduct(f"{c} has a plain token")
    vals = _trace_combination(gt, eval_completed(c))
    return GradedChar({k: v.subst_h2t() for k, v in vals.items()})


def trace_formula_hm1(gt: GroupType | str, c: CompletedBraidElt | str) -> GradedChar:
    """The h = -1 value predicted by character traces, for any completed element."""
    gt = group_type(gt)
    if isinstance(c, str):
        c = gt.parse(c)
    vals = _trace_combination(gt, eval_completed(c))
    return GradedChar({k: v.subst_h2t().specialize_h(-1) for k, v in vals.items()})


# ---------------------------------------------------------------- Id / St

def _system(x) -> CoxeterSystem:
    if isinstance(x, CoxeterSystem):
        return x
    return group_type(x).system


def id_component(gt, c: CompletedBraidElt) -> BiPoly:
    """Multiplicity of Id: w -> (h^2 t)^l(w), _w -> sum over [1, w] of (h^2 t)^l(v)."""
    W = _system(gt) if gt is not None else c.system
    out = BiPoly.coerce(1)
    for u, w in c.tokens:
        if u:
            out = out * sum((H2T ** W._length[v] for v in W.bruhat_interval(W.elements[w])), ZERO)
        else:
            out = out * H2T ** W._length[w]
    return out


def st_component(gt, c: CompletedBraidElt) -> BiPoly:
    if c.has_underlined():
        return ZERO
    return BiPoly.monomial(0, c.length)


def rank1_H(n: int) -> dict[str, BiPoly]:
    W = preset("A1")
    c = CompletedBraidElt(W, [(False, W.gen(0).id)] * n)
    return {"Id": id_component(W, c), "St": st_component(W, c)}


# ---------------------------------------------------------------- tables

def data_dir() -> Path:
    env = os.environ.get("DLCOH_DATA")
    return Path(env) if env else Path(__file__).parent / "data"


@dataclass(frozen=True)
class TableEntry:
    key: CompletedBraidElt
    value: GradedChar
    source: str
    line: int = 0


def _parse_value(gt: GroupType, text: str) -> GradedChar:
    vals: dict[str, BiPoly] = {}
    for part in text.split(";"):
        part = part.strip()
        if not part or part == "0":
            continue
        if ":" not in part:
            raise ParseError(f"expected 'symbol: poly', got {part!r}")
        sym, poly = part.split(":", 1)
        sym = sym.strip()
        vals[sym] = vals.get(sym, ZERO) + parse_bipoly(poly)
    return gt.expand(vals)


def parse_table(gt: GroupType | str, text: str, source: str = "") -> list[TableEntry]:
    gt = group_type(gt)
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "|" not in line:
            raise ParseError(f"{source}:{no}: missing '|'")
        keys, value = line.split("|", 1)
        val = _parse_value(gt, value)
        for key in keys.split(","):
            out.append(TableEntry(gt.parse(key.strip()), val, source or f"table:{gt.tag}", no))
    return out


def load_table(gt: GroupType | str) -> list[TableEntry]:
    gt = group_type(gt)
    return _load_table_cached(gt.tag, str(data_dir()))


@lru_cache(maxsize=None)
def _load_table_cached(tag: str, root: str) -> list[TableEntry]:
    path = Path(root) / "tables" / f"{tag}.tbl"
    return parse_table(tag, path.read_text(), f"table:{tag}")


@lru_cache(maxsize=None)
def _table_index(tag: str, root: str):
    index = {}
    for e in _load_table_cached(tag, root):
        z = zb_image(e.key)
        if z in index and index[z].value != e.value:
            raise ValueError(f"table {tag}: keys {index[z].key} and {e.key} clash")
        index[z] = e
    return index


# A search state is a tuple of segments: ("P", normal form) or ("U", element id).

def _state_of(c: CompletedBraidElt) -> tuple:
    return _normalise(tuple(("U", w) if u else ("P", (w,)) for u, w in c.tokens))


def _normalise(segs) -> tuple:
    W = None
    out: list = []
    for kind, val in segs:
        if kind == "P":
            if not val:
                continue
            if out and out[-1][0] == "P":
                out[-1] = ("P", out[-1][1] + tuple(val))
                continue
            out.append(("P", tuple(val)))
        else:
            out.append((kind, val))
    return tuple(out)


def _finish(W: CoxeterSystem, segs: tuple) -> tuple:
    return tuple((k, _normal_form(W, v)) if k == "P" else (k, v) for k, v in _normalise(segs))


def _completed(W: CoxeterSystem, segs: tuple) -> CompletedBraidElt:
    toks = []
    for k, v in segs:
        if k == "P":
            toks += [(False, f) for f in v]
        else:
            toks.append((True, v))
    return CompletedBraidElt(W, toks)


def _moves(gt: GroupType, state: tuple, swap: bool = True):
    """Neighbours under H(xy) = H(y F(x)) (both directions) and, in split A2, the swap."""
    W, F = gt.system, gt.F
    if not state:
        return
    fx = lambda seg: (seg[0], tuple(F.apply_id(f) for f in seg[1])) if seg[0] == "P" else (seg[0], F.apply_id(seg[1]))
    if len(state) > 1:
        yield _finish(W, state[1:] + (fx(state[0]),))
        yield _finish(W, (fx(state[-1]),) + state[:-1])
    head, tail = state[0], state[-1]
    if head[0] == "P":
        b = BraidElt(W, head[1])
        for s in W.left_descent_ids(head[1][0]):
            rest = left_cancel(b, BraidElt(W, (W.gen(s).id,)))
            yield _finish(W, (("P", rest.factors),) + state[1:] + (("P", (F.apply_id(W.gen(s).id),)),))
    if tail[0] == "P":
        fs = tail[1]
        for s in W.right_descent_ids(fs[-1]):
            g = W.gen(s).id
            last = W._rmul[fs[-1]][s]
            rest = fs[:-1] + ((last,) if last else ())
            yield _finish(W, (("P", (F.apply_id(g),)),) + state[:-1] + (("P", rest),))
    if swap and gt.swap_symmetric:
        yield tuple((k, tuple(gt.swap.apply_id(f) for f in v)) if k == "P" else (k, gt.swap.apply_id(v))
                    for k, v in state)


def _lookup(gt: GroupType, state: tuple, index) -> tuple[int, TableEntry] | None:
    W = gt.system
    n, segs = 0, state
    if segs and segs[-1][0] == "P":
        n, rest = strip_central(BraidElt(W, segs[-1][1]), gt.P)
        segs = segs[:-1] + (("P", rest.factors),)
    e = index.get(zb_image(_completed(W, _normalise(segs))))
    return (n, e) if e is not None else None


def _orbit(gt: GroupType, start: tuple, depth: int, swap: bool = True):
    """Breadth-first states reachable by cyclic moves, in discovery order."""
    seen = {start}
    frontier = deque([(start, 0)])
    while frontier:
        state, d = frontier.popleft()
        yield state
        if d == depth:
            continue
        for nxt in _moves(gt, state, swap):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append((nxt, d + 1))


def table_H(gt: GroupType | str, c: CompletedBraidElt | str, depth: int = 8,
            trace: list | None = None) -> GradedChar:
    """H(c) from the shipped table, periodicity and cyclic moves."""
    gt = group_type(gt)
    if isinstance(c, str):
        c = gt.parse(c)
    W = gt.system
    if any(u and w == W._w0 for u, w in c.tokens):
        return GradedChar()
    index = _table_index(gt.tag, str(data_dir()))
    for state in _orbit(gt, _finish(W, _state_of(c)), depth):
        hit = _lookup(gt, state, index)
        if hit is not None:
            n, e = hit
            if trace is not None:
                trace.append((str(_completed(W, state)), str(e.key), n))
            return gt.E(e.value, n).scale(gt.factor ** n)
    raise NotInTable(f"{gt.tag}: H({c}) is not reachable from the table")


def _match_prefix(W: CoxeterSystem, state: tuple, anchor: tuple) -> tuple | None:
    """Segments left over after the anchor, if the state starts with it."""
    if len(anchor) > len(state):
        return None
    for i, (kind, val) in enumerate(anchor):
        k2, v2 = state[i]
        if kind == "U":
            if (k2, v2) != (kind, val):
                return None
            continue
        if k2 != "P":
            return None
        try:
            rest = left_cancel(BraidElt(W, v2), BraidElt(W, val))
        except NotDivisor:
            return None
        if i == len(anchor) - 1:
            return _normalise((("P", rest.factors),) + state[i + 1:])
        if rest.factors:
            return None
    return _normalise(state[len(anchor):])


_FAMILIES = {
    "rappel.i": "rotation", "xy=yFx": "rotation",
    "rappelA2.i'": "rappelA2.i",
    "rappelA2.v": "CF", "rappelB2.iv": "CF", "rappelG2.vi": "CF",
    "rappelA2.iv": "swap", "rappel.v": "w0bar",
}


def rule_family(rule: str) -> str:
    return _FAMILIES.get(rule, rule)


class Resolver:
    """Evaluates H through the table, closed forms and the rewrite rules.

    Families listed in `exclude` are not used, so that an instance of a rule
    is never checked by applying that same rule.
    """

    def __init__(self, gt: GroupType | str, exclude: Iterable[str] = (), depth: int = 6,
                 rewrites: bool = True):
        self.gt = group_type(gt)
        self.exclude = frozenset(exclude)
        self.depth = 0 if "rotation" in self.exclude else depth
        self.swap = "swap" not in self.exclude
        self.index = _table_index(self.gt.tag, str(data_dir()))
        self.memo: dict[tuple, GradedChar | None] = {}
        self.active: set[tuple] = set()
        self.rules = []
        if rewrites:
            W = self.gt.system
            for rule, (types, lhs, rhs) in _ANCHORS.items():
                if rule_family(rule) in self.exclude or (types and self.gt.tag not in types):
                    continue
                for sw in (False, True):
                    a = _state_of(self.gt.parse(_swap_word(lhs, sw)))
                    r = [(parse_bipoly(cf), self.gt.parse(_swap_word(w, sw))) for cf, w in rhs]
                    self.rules.append((rule, _finish(W, a), r))

    def H(self, c: CompletedBraidElt | str) -> GradedChar:
        if isinstance(c, str):
            c = self.gt.parse(c)
        got = self._state(_finish(self.gt.system, _state_of(c)))
        if got is None:
            raise NotInTable(f"{self.gt.tag}: cannot resolve H({c})")
        return got

    def _state(self, start: tuple) -> GradedChar | None:
        if start in self.memo:
            return self.memo[start]
        if start in self.active:
            return None
        gt, W = self.gt, self.gt.system
        if "w0bar" not in self.exclude and any(k == "U" and v == W._w0 for k, v in start):
            return GradedChar()
        self.active.add(start)
        states = list(_orbit(gt, start, self.depth, self.swap))
        result = None
        for st in states:
            hit = _lookup(gt, st, self.index)
            if hit is not None:
                n, e = hit
                result = gt.E(e.value, n).scale(gt.factor ** n)
                break
        if result is None and "CF" not in self.exclude and all(k == "U" for k, _ in start):
            result = closed_form_H(gt, _completed(W, start))
        if result is None:
            result = self._rewrite(states)
        self.active.discard(start)
        self.memo[start] = result
        return result

    def _rewrite(self, states) -> GradedChar | None:
        W = self.gt.system
        for st in states:
            for _, anchor, rhs in self.rules:
                rest = _match_prefix(W, st, anchor)
                if rest is None:
                    continue
                total = GradedChar()
                for coeff, piece in rhs:
                    v = self._state(_finish(W, _state_of(piece) + rest))
                    if v is None:
                        break
                    total = total + v.scale(coeff)
                else:
                    return total
        return None


def resolve_H(gt: GroupType | str, c: CompletedBraidElt, exclude: Iterable[str] = ()) -> GradedChar:
    """H(c) from the table, closed forms and rewrite rules (minus `exclude`)."""
    return Resolver(gt, exclude).H(c)


# ---------------------------------------------------------------- identity instances

@dataclass
class Term:
    coeff: BiPoly
    kind: str                   # H | CF | ID | ST
    arg: CompletedBraidElt

    def __str__(self):
        return f"({self.coeff})*{self.kind}({self.arg})"


@dataclass
class IdentityInstance:
    rule: str
    lhs: list[Term]
    rhs: list[Term] = field(default_factory=list)
    relation: str = "eq"        # eq | even
    line: int = 0

    def __str__(self):
        l = " + ".join(map(str, self.lhs)) or "0"
        if self.relation == "even":
            return f"{self.rule} | even {l}"
        return f"{self.rule} | {l} = {' + '.join(map(str, self.rhs)) or '0'}"


def _eval_term(gt: GroupType, t: Term, res: "Resolver") -> GradedChar:
    if t.kind == "H":
        v = res.H(t.arg)
    elif t.kind == "CF":
        v = closed_form_H(gt, t.arg)
    elif t.kind == "ID":
        v = GradedChar({"Id": id_component(gt, t.arg)})
    elif t.kind == "ST":
        v = GradedChar({"St": st_component(gt, t.arg)})
    else:
        raise ValueError(t.kind)
    return v.scale(t.coeff)


def evaluate_sides(gt: GroupType | str, inst: IdentityInstance) -> tuple[GradedChar, GradedChar]:
    gt = group_type(gt)
    res = Resolver(gt, exclude={rule_family(inst.rule)})
    try:
        lhs = sum((_eval_term(gt, t, res) for t in inst.lhs), GradedChar())
        rhs = sum((_eval_term(gt, t, res) for t in inst.rhs), GradedChar())
    except NotInTable as e:
        raise Unresolvable(f"line {inst.line}: {inst}: {e}") from None
    return lhs, rhs


def evaluate(gt: GroupType | str, inst: IdentityInstance) -> tuple[bool, str]:
    lhs, rhs = evaluate_sides(gt, inst)
    if inst.relation == "even":
        odd = [c for c in lhs.coefficients() if c % 2]
        return (not odd, "" if not odd else f"odd coefficient in {lhs}")
    if lhs == rhs:
        return True, ""
    sym, key, a, b = lhs.first_difference(rhs)
    return False, f"{sym} at t^({key[0]}/2) h^{key[1]} eps^{key[2]}: {a} != {b}"


# ---------------------------------------------------------------- rules

def _swap_word(text: str, swap: bool) -> str:
    return text.translate(str.maketrans("st", "ts")) if swap else text


def _pattern(gt: GroupType, lhs: str, rhs: list[tuple[str, str]], rule: str, y: CompletedBraidElt,
             swap: bool) -> IdentityInstance:
    L = gt.parse(_swap_word(lhs, swap)) * y
    R = [Term(parse_bipoly(c), "H", gt.parse(_swap_word(w, swap)) * y) for c, w in rhs]
    return IdentityInstance(rule, [Term(BiPoly.coerce(1), "H", L)], R)


# rule -> (types it applies to, lhs anchor, [(coefficient, rhs anchor)])
_ANCHORS = {
    "rappel.ii": (None, "_s _t", [("1", "_st")]),
    "rappel.iii": (None, "s _s", [("h^2*t", "_s")]),
    "rappel.iii'": (None, "_s s", [("h^2*t", "_s")]),
    "rappel.iv": (None, "_s _s", [("h^2*t+1", "_s")]),
    "rappel.v": (None, "_w0", []),
    "rappelA2.i": ({"A2", "2A2"}, "_s _t _s", [("h^2*t", "_s")]),
    "rappelA2.i'": ({"A2", "2A2"}, "_st _s", [("h^2*t", "_s")]),
    "rappelA2.ii": ({"A2", "2A2"}, "_t s _t", [("h", "_t")]),
    "rappelA2.iii": ({"A2", "2A2"}, "_s t s", [("h", "_s _t")]),
    "rappelB2.i": ({"B2", "2B2"}, "_s t s t", [("h", "_sts")]),
    "rappelB2.ii": ({"B2", "2B2"}, "_t _sts", [("h^2*t", "_t _s")]),
    "rappelB2.iii": ({"B2", "2B2"}, "_s _t _s", [("h^2*t", "_s"), ("1", "_sts")]),
    "rappelG2.i": ({"G2", "2G2"}, "_s t s t s t", [("h", "_ststs")]),
    "rappelG2.ii": ({"G2", "2G2"}, "_s _ts", [("1", "_sts"), ("h^2*t", "_s")]),
    "rappelG2.iii": ({"G2", "2G2"}, "_t _sts", [("1", "_tsts"), ("h^2*t", "_ts")]),
    "rappelG2.iv": ({"G2", "2G2"}, "_s _tsts", [("1", "_ststs"), ("h^2*t", "_sts")]),
    "rappelG2.v": ({"G2", "2G2"}, "_t _ststs", [("h^2*t", "_tsts")]),
}

_CF_RULES = {"rappelA2.v": {"A2", "2A2"}, "rappelB2.iv": {"B2", "2B2"}, "rappelG2.vi": {"G2", "2G2"}}

RULES = sorted(set(_ANCHORS) | set(_CF_RULES) | {
    "rappel.i", "xy=yFx", "rappelA2.iv", "rappelB2.v", "s^mb", "w0bar", "Id", "St"})


def _is_F_stable_product(gt: GroupType, c: CompletedBraidElt) -> bool:
    """Underlined atoms fixed by F, plain runs lying in the centraliser of F."""
    W = gt.system
    for kind, val in _state_of(c):
        if kind == "U" and gt.F.apply_id(val) != val:
            return False
        if kind == "P":
            b = braid_of_atoms(W, val)
            if f_action(gt.F, b) != b:
                return False
    return True


def apply_rappel(rule: str, gt: GroupType | str, y: CompletedBraidElt | str = "",
                 x: CompletedBraidElt | str | None = None, swap: bool = False,
                 s: str | None = None) -> IdentityInstance:
    """Instantiate a rewrite rule on a tail y (and a head x where the rule has one).

    For `s^mb` the argument y plays the role of b and s names the generator;
    the instance is the second-order recurrence satisfied by m -> H(s^m b).
    """
    gt = group_type(gt)
    W = gt.system
    if isinstance(y, str):
        y = gt.parse(y)
    if isinstance(x, str):
        x = gt.parse(x)
    one = BiPoly.coerce(1)
    if rule in _ANCHORS:
        types, lhs, rhs = _ANCHORS[rule]
        if types is not None and gt.tag not in types:
            raise PatternMismatch(f"{rule} does not apply to {gt.tag}")
        return _pattern(gt, lhs, rhs, rule, y, swap)
    if rule in ("rappel.i", "xy=yFx"):
        if x is None:
            raise PatternMismatch(f"{rule} needs a head x")
        return IdentityInstance(rule, [Term(one, "H", x * y)], [Term(one, "H", y * f_action(gt.F, x))])
    if rule == "rappelA2.iv":
        if gt.tag != "A2":
            raise PatternMismatch("the swap symmetry is a split A2 rule")
        return IdentityInstance(rule, [Term(one, "H", y)], [Term(one, "H", f_action(gt.swap, y))])
    if rule in _CF_RULES:
        if gt.tag not in _CF_RULES[rule]:
            raise PatternMismatch(f"{rule} does not apply to {gt.tag}")
        if not y.all_underlined():
            raise PatternMismatch(f"{rule} needs a product of underlined atoms")
        return IdentityInstance(rule, [Term(one, "H", y)], [Term(one, "CF", y)])
    if rule == "rappelB2.v":
        if gt.tag != "2B2" or not _is_F_stable_product(gt, y):
            raise PatternMismatch("parity needs 2B2 and F-stable underlined atoms")
        return IdentityInstance(rule, [Term(one, "H", y)], relation="even")
    if rule == "w0bar":
        head = x if x is not None else CompletedBraidElt(W)
        return IdentityInstance(rule, [Term(one, "H", head * gt.parse("_w0") * y)], [])
    if rule == "s^mb":
        gen = s or W.generator_names[0]
        b = braid_of_atoms(W, [w for u, w in y.tokens]) if y.is_plain() else None
        sb = braid_of_atoms(W, [W.gen(gen).id])
        if b is None or b * braid_of_atoms(W, [gt.F(W.gen(gen)).id]) != sb * b:
            raise PatternMismatch(f"s^mb needs a plain b with b F(s) = s b")
        S = gt.parse(gen)
        return IdentityInstance(rule, [Term(one, "H", S * S * y)],
                                [Term(parse_bipoly("h+h^2*t"), "H", S * y),
                                 Term(parse_bipoly("-h^3*t"), "H", y)])
    if rule in ("Id", "St"):
        raise PatternMismatch(f"{rule} instances are written out explicitly")
    raise PatternMismatch(f"unknown rule {rule!r}")


# ---------------------------------------------------------------- suites

_CALL = re.compile(r"(H|CF|ID|ST)\(([^()]*)\)")


def _parse_side(gt: GroupType, text: str) -> list[Term]:
    text = text.strip()
    if text in ("", "0"):
        return []
    terms: list[Term] = []
    pos = 0
    for m in _CALL.finditer(text):
        pre = text[pos:m.start()].strip()
        pos = m.end()
        sign = 1
        if terms or pre.startswith(("+", "-")):
            if not pre or pre[0] not in "+-":
                raise ParseError(f"expected + or - before {m.group(0)!r}")
            sign = -1 if pre[0] == "-" else 1
            pre = pre[1:].strip()
        if pre:
            if not pre.endswith("*"):
                raise ParseError(f"expected '*' after coefficient {pre!r}")
            coeff = parse_bipoly(pre[:-1])
        else:
            coeff = BiPoly.coerce(1)
        terms.append(Term(coeff * sign, m.group(1), gt.parse(m.group(2))))
    if text[pos:].strip():
        raise ParseError(f"trailing text {text[pos:]!r}")
    if not terms:
        raise ParseError(f"no H(...) term in {text!r}")
    return terms


def parse_suite(gt: GroupType | str, text: str) -> list[IdentityInstance]:
    """Lines `rule | lhs = rhs` or `rule | even expr`; `#` starts a comment."""
    gt = group_type(gt)
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rule, body = (p.strip() for p in line.split("|", 1))
        except ValueError:
            raise ParseError(f"line {no}: missing '|'") from None
        if body.startswith("even "):
            out.append(IdentityInstance(rule, _parse_side(gt, body[5:]), relation="even", line=no))
            continue
        if body.count("=") != 1:
            raise ParseError(f"line {no}: expected exactly one '='")
        l, r = body.split("=")
        try:
            out.append(IdentityInstance(rule, _parse_side(gt, l), _parse_side(gt, r), line=no))
        except ParseError as e:
            raise ParseError(f"line {no}: {e}") from None
    return out


def load_suite(gt: GroupType | str, path: str | Path | None = None) -> list[IdentityInstance]:
    gt = group_type(gt)
    if path is None:
        path = data_dir() / "suites" / f"{gt.tag}.ids"
    return parse_suite(gt, Path(path).read_text())


@dataclass
class SuiteReport:
    tag: str
    results: list[tuple[IdentityInstance, bool, str]]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.results)

    @property
    def rules(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for inst, _, _ in self.results:
            out[inst.rule] = out.get(inst.rule, 0) + 1
        return out

    def failures(self):
        return [(i, msg) for i, ok, msg in self.results if not ok]


def verify_tables(gt: GroupType | str, suite: list[IdentityInstance] | None = None,
                  threads: int = 1) -> SuiteReport:
    gt = group_type(gt)
    if suite is None:
        suite = load_suite(gt)
    run: Callable = lambda inst: (inst,) + evaluate(gt, inst)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, suite))
    else:
        results = [run(i) for i in suite]
    return SuiteReport(gt.tag, results)


@dataclass
class EpsReport:
    instance: IdentityInstance
    formal: bool                # holds with eps as an indeterminate
    at_zero: bool
    at_minus_one: bool
    involves_eps: bool

    @property
    def constrains(self) -> bool:
        """The identity would rule out one of the two admissible values."""
        return self.at_zero != self.at_minus_one


def check_2g2(suite: list[IdentityInstance] | None = None) -> list[EpsReport]:
    """Evaluate each 2G2 instance formally and at eps = 0, -1; eps is never fixed."""
    gt = group_type("2G2")
    if suite is None:
        suite = load_suite(gt)
    out = []
    for inst in suite:
        lhs, rhs = evaluate_sides(gt, inst)
        if inst.relation == "even":
            ok = lambda a, b: not [c for c in a.coefficients() if c % 2]
        else:
            ok = lambda a, b: a == b
        out.append(EpsReport(inst, ok(lhs, rhs),
                             ok(lhs.specialize_eps(0), rhs.specialize_eps(0)),
                             ok(lhs.specialize_eps(-1), rhs.specialize_eps(-1)),
                             lhs.has_eps() or rhs.has_eps()))
    return out


# ---------------------------------------------------------------- conjecture checks

def check_conjA_hm1(spec: CharSpec) -> tuple[bool, int]:
    """T_pi acts on the representation as x^k; returns (consistent on all T_w F, k)."""
    c = central_char_pi(spec)
    terms = c.terms()
    if len(terms) != 1 or 1 != next(iter(terms.values())) or next(iter(terms)) % 2:
        raise NotScalar(f"T_pi acts on {spec.name} by {c}, not a power of x")
    k = next(iter(terms)) // 2
    W = spec.system
    tpi = hecke_mult(T(W.longest_element()), T(W.longest_element()))
    ok = all(char_trace(spec, hecke_mult(tpi, T(w))) == c * char_trace(spec, T(w))
             for w in W.elements)
    return ok, k


def check_conjB_hm1(spec: CharSpec, w) -> bool:
    """Tr(T_w^-1 F) is the bar conjugate of Tr(T_w F)."""
    return char_trace(spec, invert_T(w)) == char_trace(spec, T(w)).bar()


def check_conjA2(b: BraidElt) -> tuple[bool, GradedChar, BiPoly]:
    """H(b) = (-h)^(l(b) - phi(b)) Tr(T_b | R_{-ht}) on split A2."""
    gt = group_type("A2")
    W = gt.system
    if b.system is not W:
        raise ValueError("check_conjA2 needs a braid of the A2 preset")
    c = CompletedBraidElt(W, [(False, f) for f in b.factors])
    try:
        H = table_H(gt, c)
    except NotInTable as e:
        raise HNotKnown(str(e)) from None
    phi = a2_classify(b).phi
    tr = char_trace(gt.specs["rho"], eval_completed(c)).subst_minus_ht()
    pred = BiPoly.monomial(0, 1, coeff=-1) ** (b.length - phi) * tr
    return H == GradedChar({"rho": pred}), H, pred


def fclass_invariance_suite(depth: int = 8) -> list[tuple[str, str, bool]]:
    """Split A2: H(xy) = H(yx) for all token cuts of table keys, and H(c) = H(sigma(c))."""
    gt = group_type("A2")
    W = gt.system
    out = []
    for e in load_table(gt):
        c = e.key
        base = table_H(gt, c, depth)
        letters = []
        for u, w in c.tokens:
            if u:
                letters.append((True, w))
            else:
                letters += [(False, W.gen(s).id) for s in W._words[w]]
        for cut in range(1, len(letters)):
            rot = CompletedBraidElt(W, letters[cut:] + letters[:cut])
            out.append((str(c), str(rot), table_H(gt, rot, depth) == base))
        sw = f_action(gt.swap, c)
        out.append((str(c), str(sw), table_H(gt, sw, depth) == base))
    return out
