"""Positive braid monoids, their Garside normal forms, and the completed monoid.

A BraidElt stores its left-greedy normal form as a tuple of nontrivial
W-element ids. Products are normalised by making every adjacent pair
left-weighted (every left descent of the right factor is a right descent of
the left one), which characterises the greedy form.

A CompletedBraidElt is a word in plain atoms w and underlined atoms _w. Its
image in the monoid ring Z[B+] sends _w to the sum of v over the Bruhat
interval [1, w]; equality of completed elements is tested on that image.
Whether the image map is injective is not known, so `completed_equal` is
exact for "different" only; `rewrite_equal` checks a few monoid relations
syntactically and is exact for "equal" only.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .coxeter import CoxeterSystem, DiagramAutomorphism, WeylElt
from .errors import NotA2, NotDivisor, ParseError

__all__ = [
    "BraidElt", "CompletedBraidElt", "ZBraidElt", "A2ClassDescriptor",
    "braid_of_word", "braid_of_atoms", "unit", "pi", "w0",
    "alpha", "omega", "alpha_I", "omega_I", "left_divides", "left_cancel",
    "reverse", "f_action", "fixed_submonoid_generators", "conj_elementary",
    "explore_D_plus", "completed_of_tokens", "rho", "zb_image", "completed_equal",
    "rewrite_equal", "parse_braid", "parse_completed", "a2_classify",
]


def _normal_form(W: CoxeterSystem, atoms: Iterable[int]) -> tuple[int, ...]:
    f = [a for a in atoms if a]
    rmul, lmul = W._rmul, W._lmul
    changed = True
    while changed:
        changed = False
        for i in range(len(f) - 1):
            x, y = f[i], f[i + 1]
            if not y:
                continue
            moved = True
            while moved:
                moved = False
                rd = W.right_descent_ids(x)
                for s in W.left_descent_ids(y):
                    if s not in rd:
                        x, y = rmul[x][s], lmul[y][s]
                        moved = changed = True
                        break
            f[i], f[i + 1] = x, y
        if changed:
            f = [a for a in f if a]
    return tuple(f)


class BraidElt:
    """Element of B+ in Garside normal form."""

    __slots__ = ("system", "factors")

    def __init__(self, system: CoxeterSystem, factors: tuple[int, ...] = ()):
        self.system = system
        self.factors = tuple(factors)

    @property
    def length(self) -> int:
        return sum(self.system._length[f] for f in self.factors)

    def atoms(self) -> list[WeylElt]:
        return [self.system.elements[f] for f in self.factors]

    def letters(self) -> list[int]:
        out = []
        for f in self.factors:
            out.extend(self.system._words[f])
        return out

    @property
    def word(self) -> str:
        return "".join(self.system.word(a) for a in self.atoms())

    def is_unit(self) -> bool:
        return not self.factors

    def __mul__(self, other: "BraidElt") -> "BraidElt":
        return BraidElt(self.system, _normal_form(self.system, self.factors + other.factors))

    def __pow__(self, n: int) -> "BraidElt":
        out = unit(self.system)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, BraidElt) and other.system is self.system and other.factors == self.factors

    def __hash__(self):
        return hash(("B", id(self.system), self.factors))

    def __repr__(self):
        return "B(" + ("".join(f"({a.word})" for a in self.atoms()) or "1") + ")"

    def __str__(self):
        return " ".join(a.word for a in self.atoms()) or "1"


def unit(W: CoxeterSystem) -> BraidElt:
    return BraidElt(W, ())


def braid_of_atoms(W: CoxeterSystem, atoms: Iterable[WeylElt | int]) -> BraidElt:
    ids = [a.id if isinstance(a, WeylElt) else int(a) for a in atoms]
    return BraidElt(W, _normal_form(W, ids))


def braid_of_word(W: CoxeterSystem, letters: str | Sequence) -> BraidElt:
    return braid_of_atoms(W, [W._rmul[0][W.gen_index(c)] for c in letters if c not in ", "])


def w0(W: CoxeterSystem) -> BraidElt:
    return BraidElt(W, (W._w0,))


def pi(W: CoxeterSystem) -> BraidElt:
    return BraidElt(W, (W._w0, W._w0))


def alpha(b: BraidElt) -> WeylElt:
    return b.system.elements[b.factors[0] if b.factors else 0]


def omega(b: BraidElt) -> BraidElt:
    return BraidElt(b.system, b.factors[1:])


def _cancel_letter(b: BraidElt, s: int) -> BraidElt | None:
    """s^-1 b when s left-divides b, else None."""
    W = b.system
    if not b.factors or s not in W.left_descent_ids(b.factors[0]):
        return None
    first = W._lmul[b.factors[0]][s]
    return BraidElt(W, _normal_form(W, (first,) + b.factors[1:]))


def left_cancel(b: BraidElt, a: BraidElt) -> BraidElt:
    """The c with a c = b; raises NotDivisor when a does not left-divide b."""
    cur = b
    for s in a.letters():
        cur = _cancel_letter(cur, s)
        if cur is None:
            raise NotDivisor(f"{a!r} does not left-divide {b!r}")
    return cur


def left_divides(a: BraidElt, b: BraidElt) -> bool:
    try:
        left_cancel(b, a)
        return True
    except NotDivisor:
        return False


def _subset_ids(W: CoxeterSystem, I) -> set[int]:
    return {W.gen_index(s) for s in I}


def alpha_I(b: BraidElt, I) -> BraidElt:
    return _split_I(b, I)[0]


def omega_I(b: BraidElt, I) -> BraidElt:
    return _split_I(b, I)[1]


def _split_I(b: BraidElt, I) -> tuple[BraidElt, BraidElt]:
    W = b.system
    J = _subset_ids(W, I)
    head: list[int] = []
    rem = b
    while True:
        if not rem.factors:
            break
        cand = [s for s in W.left_descent_ids(rem.factors[0]) if s in J]
        if not cand:
            break
        s = cand[0]
        head.append(s)
        rem = _cancel_letter(rem, s)
    return braid_of_atoms(W, [W._rmul[0][s] for s in head]), rem


def reverse(b: BraidElt) -> BraidElt:
    W = b.system
    return braid_of_atoms(W, [W._rmul[0][s] for s in reversed(b.letters())])


def f_action(F: DiagramAutomorphism, b):
    if isinstance(b, BraidElt):
        return BraidElt(b.system, _normal_form(b.system, [F.apply_id(f) for f in b.factors]))
    if isinstance(b, CompletedBraidElt):
        return CompletedBraidElt(b.system, [(u, F.apply_id(w)) for u, w in b.tokens])
    if isinstance(b, WeylElt):
        return F(b)
    raise TypeError(type(b))


def fixed_submonoid_generators(F: DiagramAutomorphism) -> list[BraidElt]:
    """Generators w0^I of the F-fixed submonoid, one per F-orbit I of S."""
    W = F.system
    return [BraidElt(W, (W.longest_element(orb).id,)) for orb in F.orbits()]


def conj_elementary(w: BraidElt, y: WeylElt | BraidElt, F: DiagramAutomorphism) -> BraidElt:
    """y^-1 w F(y) for a left divisor y of w."""
    W = w.system
    yb = y if isinstance(y, BraidElt) else braid_of_atoms(W, [y])
    return left_cancel(w, yb) * f_action(F, yb)


def explore_D_plus(w: BraidElt, F: DiagramAutomorphism, depth: int) -> set[BraidElt]:
    W = w.system
    seen = {w}
    frontier = [w]
    for _ in range(depth):
        nxt = []
        for b in frontier:
            for y in W.elements:
                yb = BraidElt(W, (y.id,) if y.id else ())
                if not left_divides(yb, b):
                    continue
                c = conj_elementary(b, yb, F)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        if not nxt:
            break
        frontier = nxt
    return seen


# ---------------------------------------------------------------- Z[B+]

class ZBraidElt:
    """Finite formal Z-combination of positive braids."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[BraidElt, int] | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def __add__(self, o: "ZBraidElt") -> "ZBraidElt":
        r = dict(self.terms)
        for k, v in o.terms.items():
            r[k] = r.get(k, 0) + v
        return ZBraidElt(r)

    def __mul__(self, o: "ZBraidElt") -> "ZBraidElt":
        r: dict[BraidElt, int] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in o.terms.items():
                k = k1 * k2
                r[k] = r.get(k, 0) + v1 * v2
        return ZBraidElt(r)

    def __eq__(self, o):
        return isinstance(o, ZBraidElt) and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        parts = []
        for k in sorted(self.terms, key=lambda b: (b.length, b.word)):
            v = self.terms[k]
            parts.append(f"{v}*[{k}]")
        return " + ".join(parts) or "0"


# ---------------------------------------------------------------- completed monoid

class CompletedBraidElt:
    """Word in plain atoms (False, w) and underlined atoms (True, w)."""

    __slots__ = ("system", "tokens")

    def __init__(self, system: CoxeterSystem, tokens: Iterable[tuple[bool, int]] = ()):
        self.system = system
        self.tokens = tuple((bool(u), int(w)) for u, w in tokens if w)

    def __mul__(self, other: "CompletedBraidElt") -> "CompletedBraidElt":
        return CompletedBraidElt(self.system, self.tokens + other.tokens)

    def __len__(self):
        return len(self.tokens)

    @property
    def length(self) -> int:
        return sum(self.system._length[w] for _, w in self.tokens)

    def has_underlined(self) -> bool:
        return any(u for u, _ in self.tokens)

    def all_underlined(self) -> bool:
        return all(u for u, _ in self.tokens)

    def is_plain(self) -> bool:
        return not self.has_underlined()

    def __eq__(self, other):
        return (isinstance(other, CompletedBraidElt) and other.system is self.system
                and other.tokens == self.tokens)

    def __hash__(self):
        return hash(("C", id(self.system), self.tokens))

    def __str__(self):
        W = self.system
        out = []
        for u, w in self.tokens:
            word = W.word(W.elements[w])
            out.append(("_" if u else "") + word)
        return " ".join(out) or "1"

    def __repr__(self):
        return f"C({self})"


def completed_of_tokens(W: CoxeterSystem, tokens: Iterable) -> CompletedBraidElt:
    """Tokens are (underlined, WeylElt | id | word) triples-as-pairs."""
    out = []
    for u, w in tokens:
        if isinstance(w, WeylElt):
            w = w.id
        elif isinstance(w, str):
            if not W.is_reduced_word(w):
                raise ParseError(f"{w!r} is not a reduced word")
            w = W.element(w).id
        out.append((u, w))
    return CompletedBraidElt(W, out)


def rho(c: CompletedBraidElt) -> BraidElt:
    return braid_of_atoms(c.system, [w for _, w in c.tokens])


def zb_image(c: CompletedBraidElt) -> ZBraidElt:
    W = c.system
    cur: dict[BraidElt, int] = {unit(W): 1}
    for u, w in c.tokens:
        factors = sorted(W.bruhat_interval(W.elements[w])) if u else [w]
        nxt: dict[BraidElt, int] = {}
        for b, k in cur.items():
            for v in factors:
                nb = BraidElt(W, _normal_form(W, b.factors + (v,)))
                nxt[nb] = nxt.get(nb, 0) + k
        cur = nxt
    return ZBraidElt(cur)


def completed_equal(c1: CompletedBraidElt, c2: CompletedBraidElt) -> bool:
    return zb_image(c1) == zb_image(c2)


def _split_underlined(W: CoxeterSystem, w: int) -> list[int]:
    """Finest factorisation of w into pieces with pairwise disjoint supports."""
    word = W._words[w]
    for cut in range(1, len(word)):
        a, b = W._eval(word[:cut]), W._eval(word[cut:])
        if not (set(W._words[a]) & set(W._words[b])):
            return _split_underlined(W, a) + _split_underlined(W, b)
    return [w]


def rewrite_canonical(c: CompletedBraidElt) -> tuple:
    """Token form after applying a few defining relations of the completed monoid."""
    W = c.system
    toks: list[tuple[bool, int]] = []
    for u, w in c.tokens:
        if u:
            toks.extend((True, p) for p in _split_underlined(W, w))
        else:
            toks.append((False, w))
    merged: list[tuple[bool, object]] = []
    for u, w in toks:
        if merged and merged[-1][0] == u:
            pu, pw = merged[-1]
            if not u:
                merged[-1] = (False, pw + (w,))
                continue
            if not (set(W._words[pw]) & set(W._words[w])):
                merged[-1] = (True, W._eval(W._words[pw] + W._words[w]))
                continue
        merged.append((u, w) if u else (False, (w,)))
    out = []
    for u, w in merged:
        out.append((True, w) if u else (False, _normal_form(W, w)))
    return tuple(out)


def rewrite_equal(c1: CompletedBraidElt, c2: CompletedBraidElt) -> bool:
    return rewrite_canonical(c1) == rewrite_canonical(c2)


# ---------------------------------------------------------------- parsing

def _parse_tokens(W: CoxeterSystem, text: str) -> list[tuple[bool, int]]:
    out: list[tuple[bool, int]] = []
    for tok in text.split():
        under = tok.startswith("_")
        body = tok[1:] if under else tok
        if body == "pi":
            if under:
                raise ParseError("pi cannot be underlined")
            out += [(False, W._w0), (False, W._w0)]
        elif body == "w0":
            out.append((under, W._w0))
        elif body == "1":
            continue
        elif body:
            try:
                letters = W.letters_of(body)
            except ParseError:
                raise ParseError(f"unknown generator in token {tok!r}") from None
            w = W._eval(letters)
            if W._length[w] != len(letters):
                raise ParseError(f"token {tok!r} is not a reduced word")
            out.append((under, w))
        else:
            raise ParseError(f"empty token in {text!r}")
    return out


def parse_completed(W: CoxeterSystem, text: str) -> CompletedBraidElt:
    """Parse e.g. `_st s pi`."""
    return CompletedBraidElt(W, _parse_tokens(W, text))


def parse_braid(W: CoxeterSystem, text: str) -> BraidElt:
    toks = _parse_tokens(W, text)
    if any(u for u, _ in toks):
        raise ParseError("underlined token in a positive braid")
    return braid_of_atoms(W, [w for _, w in toks])


# ---------------------------------------------------------------- A2 classes

@dataclass(frozen=True)
class A2ClassDescriptor:
    n: int                   # power of pi
    kind: str                # PowerOfS | ST | Staircase | W0Sa | W0Staircase
    params: tuple[int, ...] = field(default=())
    phi: int = 0

    def __str__(self):
        p = ",".join(map(str, self.params))
        return f"pi^{self.n} * {self.kind}({p}) phi={self.phi}"

    def representative_word(self) -> str:
        if self.kind == "PowerOfS":
            core = "s" * self.params[0]
        elif self.kind == "ST":
            core = "st"
        elif self.kind == "Staircase":
            core = "".join(("s" if i % 2 == 0 else "t") * a for i, a in enumerate(self.params))
        elif self.kind == "W0Sa":
            core = "sts" + "s" * self.params[0]
        else:
            core = "sts" + "".join(("s" if i % 2 == 0 else "t") * a for i, a in enumerate(self.params))
        return "ststst" * self.n + core


def _is_a2(W: CoxeterSystem) -> bool:
    return W.rank == 2 and W.coxeter_matrix[0][1] == 3


def _compositions(total: int, parts: int, minimum: int = 2):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def _rotation_max(seq: tuple[int, ...]) -> bool:
    return all(seq >= seq[i:] + seq[:i] for i in range(len(seq)))


def _a2_candidates(W: CoxeterSystem, L: int) -> dict[tuple[int, ...], tuple[str, tuple[int, ...], int]]:
    cache = W.__dict__.setdefault("_a2_cand_cache", {})
    if L in cache:
        return cache[L]
    out: dict[tuple[int, ...], tuple[str, tuple[int, ...], int]] = {}

    def add(word: str, kind: str, params: tuple[int, ...], phi: int):
        nf = braid_of_word(W, word).factors
        assert nf not in out, (word, out.get(nf))
        out[nf] = (kind, params, phi)

    add("s" * L, "PowerOfS", (L,), 0)
    if L == 2:
        add("st", "ST", (), 0)
    for k in range(1, L // 4 + 1):
        for comp in _compositions(L, 2 * k):
            if _rotation_max(comp):
                add("".join(("s" if i % 2 == 0 else "t") * a for i, a in enumerate(comp)),
                    "Staircase", comp, k)
    if L in (3, 4):
        add("sts" + "s" * (L - 3), "W0Sa", (L - 3,), L - 3)
    rest = L - 3
    for k in range(1, (rest + 2) // 4 + 1 if rest >= 2 else 1):
        for comp in _compositions(rest, 2 * k - 1):
            if _rotation_max(comp):
                add("sts" + "".join(("s" if i % 2 == 0 else "t") * a for i, a in enumerate(comp)),
                    "W0Staircase", comp, k)
    cache[L] = out
    return out


def a2_orbit(b: BraidElt, limit: int = 200000) -> set[BraidElt]:
    """Closure of b under cyclic permutation and conjugation by w0."""
    W = b.system
    swap = W.diagram_automorphism({W.generator_names[0]: W.generator_names[1],
                                   W.generator_names[1]: W.generator_names[0]})
    seen = {b}
    queue = deque([b])
    while queue:
        cur = queue.popleft()
        nbrs = [f_action(swap, cur)]
        if cur.factors:
            for s in W.left_descent_ids(cur.factors[0]):
                rest = _cancel_letter(cur, s)
                nbrs.append(rest * BraidElt(W, (W._rmul[0][s],)))
        for nb in nbrs:
            if nb not in seen:
                seen.add(nb)
                if len(seen) > limit:
                    raise RuntimeError("orbit too large")
                queue.append(nb)
    return seen


def strip_central(b: BraidElt, P: BraidElt) -> tuple[int, BraidElt]:
    n = 0
    while True:
        try:
            b = left_cancel(b, P)
        except NotDivisor:
            return n, b
        n += 1


def a2_classify(b: BraidElt, max_length: int = 20) -> A2ClassDescriptor:
    W = b.system
    if not _is_a2(W):
        raise NotA2("classification is only available for type A2")
    if b.length > max_length:
        raise ValueError(f"length {b.length} exceeds the bound {max_length}")
    P = pi(W)
    best = None
    for z in a2_orbit(b):
        n, y = strip_central(z, P)
        hit = _a2_candidates(W, y.length).get(y.factors)
        if hit is not None:
            kind, params, phi = hit
            d = A2ClassDescriptor(n, kind, params, phi + n)
            if best is None or (d.n, d.kind, d.params) > (best.n, best.kind, best.params):
                best = d
    if best is None:
        raise RuntimeError(f"no canonical representative found for {b!r}")
    return best
