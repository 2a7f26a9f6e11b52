"""Finite Coxeter systems with fully enumerated elements.

Elements are indices into a table built by breadth-first search; index 0 is the
identity and every element carries its ShortLex-minimal reduced word. The
search identifies elements through the geometric representation written over
Z[zeta_N] (integer vectors modulo a cyclotomic polynomial), which is exact and
faithful; after enumeration only the multiplication tables are kept.
"""
from __future__ import annotations

import math
import re
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import BadMatrix, NotAutomorphism, NotFinite, ParseError

__all__ = ["CoxeterSystem", "WeylElt", "DiagramAutomorphism", "build_coxeter",
           "preset", "dihedral", "parse_coxeter_config", "PRESETS"]

DEFAULT_CAP = 20000


# ---------------------------------------------------------- cyclotomic ring

def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den monic, coefficient lists low degree first
    num = list(num)
    q = [0] * max(1, len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    return q, num[: len(den) - 1]


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p, r = _poly_divmod(p, list(cyclotomic(d)))
            assert not any(r)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


class _Cyclo:
    """Arithmetic in Z[x]/Phi_N(x), elements as coefficient tuples."""

    def __init__(self, n: int):
        self.n = n
        self.phi = cyclotomic(n)
        self.deg = len(self.phi) - 1

    def reduce(self, p: list[int]) -> tuple[int, ...]:
        p = list(p) + [0] * max(0, self.deg - len(p))
        if len(p) > self.deg:
            _, p = _poly_divmod(p, list(self.phi))
        return tuple(p)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.deg

    def const(self, c: int) -> tuple[int, ...]:
        return self.reduce([c])

    def root_power(self, k: int) -> tuple[int, ...]:
        k %= self.n
        return self.reduce([0] * k + [1])

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def mul(self, a, b):
        if not any(a) or not any(b):
            return self.zero()
        r = [0] * (2 * self.deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        r[i + j] += x * y
        return self.reduce(r)


# ---------------------------------------------------------------- elements

class WeylElt:
    __slots__ = ("system", "id")

    def __init__(self, system: "CoxeterSystem", ident: int):
        self.system = system
        self.id = ident

    @property
    def length(self) -> int:
        return self.system._length[self.id]

    @property
    def word(self) -> str:
        return self.system.word(self)

    def letters(self) -> tuple[int, ...]:
        return self.system._words[self.id]

    def inverse(self) -> "WeylElt":
        return self.system.inverse(self)

    def is_identity(self) -> bool:
        return self.id == 0

    def __mul__(self, other: "WeylElt") -> "WeylElt":
        return self.system.mult(self, other)

    def __eq__(self, other):
        return isinstance(other, WeylElt) and other.system is self.system and other.id == self.id

    def __hash__(self):
        return hash((id(self.system), self.id))

    def __lt__(self, other: "WeylElt"):
        return self.id < other.id

    def __repr__(self):
        return f"W({self.word or '1'})"


class CoxeterSystem:
    """A finite Coxeter system (W, S) given by its Coxeter matrix."""

    def __init__(self, matrix: Sequence[Sequence[int]], names: str | Sequence[str], cap: int = DEFAULT_CAP,
                 label: str | None = None):
        m = [list(map(int, row)) for row in matrix]
        r = len(m)
        names = list(names)
        if r == 0 or any(len(row) != r for row in m):
            raise BadMatrix("Coxeter matrix must be square and nonempty")
        for i in range(r):
            if m[i][i] != 1:
                raise BadMatrix("diagonal entries must be 1")
            for j in range(r):
                if i != j and (m[i][j] < 2 or m[i][j] != m[j][i]):
                    raise BadMatrix(f"bad entry m[{i}][{j}]={m[i][j]}")
        if len(names) != r or len(set(names)) != r or any(len(n) != 1 for n in names):
            raise BadMatrix("need one distinct single-character name per generator")
        self.rank = r
        self.coxeter_matrix = tuple(tuple(row) for row in m)
        self.generator_names = tuple(names)
        self.cap = cap
        self.label = label
        self._index = {n: i for i, n in enumerate(names)}
        self._enumerate()
        self._interval_cache: dict[int, frozenset[int]] = {}

    # ------------------------------------------------------------ building
    def _enumerate(self):
        r, m = self.rank, self.coxeter_matrix
        lcm = 1
        for i in range(r):
            for j in range(r):
                if i != j:
                    lcm = lcm * m[i][j] // math.gcd(lcm, m[i][j])
        ring = _Cyclo(2 * lcm)
        coef = [[None] * r for _ in range(r)]
        for i in range(r):
            for j in range(r):
                if i != j:
                    k = lcm // m[i][j]  # zeta^k = exp(i*pi/m)
                    coef[i][j] = ring.add(ring.root_power(k), ring.root_power(-k))
        one, zero = ring.const(1), ring.zero()

        def times_gen(mat, s):
            # columns: (M S_s)[:, j] = M[:, j] + c_sj M[:, s]; (M S_s)[:, s] = -M[:, s]
            new = [list(row) for row in mat]
            for row_i in range(r):
                col_s = mat[row_i][s]
                for j in range(r):
                    if j == s:
                        new[row_i][j] = tuple(-v for v in col_s)
                    elif any(col_s) and any(coef[s][j]):
                        new[row_i][j] = ring.add(mat[row_i][j], ring.mul(coef[s][j], col_s))
            return tuple(tuple(row) for row in new)

        ident = tuple(tuple(one if i == j else zero for j in range(r)) for i in range(r))
        mats = [ident]
        seen = {ident: 0}
        words: list[tuple[int, ...]] = [()]
        rmul: list[list[int]] = []
        head = 0
        while head < len(mats):
            row = []
            for s in range(r):
                nm = times_gen(mats[head], s)
                idx = seen.get(nm)
                if idx is None:
                    idx = len(mats)
                    if idx >= self.cap:
                        raise NotFinite(f"more than {self.cap} elements")
                    seen[nm] = idx
                    mats.append(nm)
                    words.append(words[head] + (s,))
                row.append(idx)
            rmul.append(row)
            head += 1
        self._words = words
        self._length = [len(w) for w in words]
        self._rmul = rmul
        inv = [0] * len(words)
        for i, w in enumerate(words):
            inv[i] = self._eval(reversed(w))
        self._inv = inv
        self._lmul = [[inv[rmul[inv[i]][s]] for s in range(r)] for i in range(len(words))]
        self._w0 = max(range(len(words)), key=lambda i: self._length[i])
        self.elements = [WeylElt(self, i) for i in range(len(words))]

    def _eval(self, letters: Iterable[int]) -> int:
        cur = 0
        for s in letters:
            cur = self._rmul[cur][s]
        return cur

    # ------------------------------------------------------------ basics
    def __len__(self):
        return len(self._words)

    @property
    def size(self) -> int:
        return len(self._words)

    @property
    def identity(self) -> WeylElt:
        return self.elements[0]

    def gen_index(self, name: str | int) -> int:
        if isinstance(name, int):
            return name
        try:
            return self._index[name]
        except KeyError:
            raise ParseError(f"unknown generator {name!r}") from None

    def gen(self, name: str | int) -> WeylElt:
        return self.elements[self._rmul[0][self.gen_index(name)]]

    def gens(self) -> list[WeylElt]:
        return [self.gen(i) for i in range(self.rank)]

    def letters_of(self, word: str | Sequence) -> list[int]:
        return [self.gen_index(c) for c in word]

    def element(self, word: str | Sequence = "") -> WeylElt:
        """Product of the letters (any word, reduced or not)."""
        return self.elements[self._eval(self.letters_of(word))]

    def is_reduced_word(self, word: str | Sequence) -> bool:
        letters = self.letters_of(word)
        return self._length[self._eval(letters)] == len(letters)

    def word(self, w: WeylElt) -> str:
        return "".join(self.generator_names[i] for i in self._words[w.id])

    def length(self, w: WeylElt) -> int:
        return self._length[w.id]

    def mult(self, u: WeylElt, v: WeylElt) -> WeylElt:
        cur = u.id
        for s in self._words[v.id]:
            cur = self._rmul[cur][s]
        return self.elements[cur]

    def inverse(self, w: WeylElt) -> WeylElt:
        return self.elements[self._inv[w.id]]

    def rmul_gen(self, w: WeylElt, s: str | int) -> WeylElt:
        return self.elements[self._rmul[w.id][self.gen_index(s)]]

    def lmul_gen(self, s: str | int, w: WeylElt) -> WeylElt:
        return self.elements[self._lmul[w.id][self.gen_index(s)]]

    def left_descents(self, w: WeylElt) -> frozenset[str]:
        return frozenset(self.generator_names[s] for s in self.left_descent_ids(w.id))

    def right_descents(self, w: WeylElt) -> frozenset[str]:
        return frozenset(self.generator_names[s] for s in self.right_descent_ids(w.id))

    def left_descent_ids(self, i: int) -> list[int]:
        ln = self._length[i]
        return [s for s in range(self.rank) if self._length[self._lmul[i][s]] < ln]

    def right_descent_ids(self, i: int) -> list[int]:
        ln = self._length[i]
        return [s for s in range(self.rank) if self._length[self._rmul[i][s]] < ln]

    # ------------------------------------------------------------ Bruhat
    def bruhat_interval(self, w: WeylElt) -> frozenset[int]:
        """Ids of all v <= w: products of subwords of one reduced word of w."""
        got = self._interval_cache.get(w.id)
        if got is None:
            cur = {0}
            for s in self._words[w.id]:
                cur |= {self._rmul[v][s] for v in cur}
            got = frozenset(cur)
            self._interval_cache[w.id] = got
        return got

    def bruhat_leq(self, v: WeylElt, w: WeylElt) -> bool:
        return v.id in self.bruhat_interval(w)

    def lower_interval(self, w: WeylElt) -> list[WeylElt]:
        return [self.elements[i] for i in sorted(self.bruhat_interval(w))]

    # ------------------------------------------------------------ parabolics
    def _subset(self, I) -> frozenset[int]:
        if I is None:
            return frozenset(range(self.rank))
        return frozenset(self.gen_index(s) for s in I)

    def longest_element(self, I: Iterable | None = None) -> WeylElt:
        J = self._subset(I)
        if J == frozenset(range(self.rank)):
            return self.elements[self._w0]
        cur, seen = 0, True
        # climb inside W_J until no generator of J lengthens
        while seen:
            seen = False
            for s in J:
                n = self._rmul[cur][s]
                if self._length[n] > self._length[cur]:
                    cur, seen = n, True
        return self.elements[cur]

    def is_I_reduced(self, w: WeylElt, I: Iterable) -> bool:
        """No s in I is a left descent of w."""
        J = self._subset(I)
        return not (J & set(self.left_descent_ids(w.id)))

    def is_reduced_I(self, w: WeylElt, I: Iterable) -> bool:
        """No s in I is a right descent of w."""
        J = self._subset(I)
        return not (J & set(self.right_descent_ids(w.id)))

    def support(self, w: WeylElt) -> frozenset[str]:
        return frozenset(self.generator_names[s] for s in self._words[w.id])

    # ------------------------------------------------------------ automorphisms
    def diagram_automorphism(self, perm: dict | str | None = None) -> "DiagramAutomorphism":
        return DiagramAutomorphism(self, perm)

    def __repr__(self):
        return f"CoxeterSystem({self.label or self.generator_names}, |W|={self.size})"


class DiagramAutomorphism:
    """Permutation of S preserving the Coxeter matrix, extended to W."""

    def __init__(self, system: CoxeterSystem, perm: dict | str | None = None):
        r = system.rank
        if perm is None:
            images = list(range(r))
        elif isinstance(perm, (str, tuple, list)):
            # "ts" means s -> t, t -> s (images listed in generator order)
            if len(perm) != r:
                raise NotAutomorphism("permutation string must list every image")
            images = [system.gen_index(c) for c in perm]
        else:
            images = [system.gen_index(perm.get(n, n)) for n in system.generator_names]
        if sorted(images) != list(range(r)):
            raise NotAutomorphism("not a permutation of the generators")
        m = system.coxeter_matrix
        if any(m[images[i]][images[j]] != m[i][j] for i in range(r) for j in range(r)):
            raise NotAutomorphism("permutation does not preserve the Coxeter matrix")
        self.system = system
        self.images = tuple(images)
        table = []
        for w in system._words:
            table.append(system._eval(images[s] for s in w))
        self._table = table

    def is_identity(self) -> bool:
        return self.images == tuple(range(self.system.rank))

    def gen_image(self, s: int) -> int:
        return self.images[s]

    def __call__(self, w: WeylElt) -> WeylElt:
        return self.system.elements[self._table[w.id]]

    def apply_id(self, i: int) -> int:
        return self._table[i]

    def orbits(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for s in range(self.system.rank):
            if s in seen:
                continue
            orb = [s]
            nxt = self.images[s]
            while nxt != s:
                orb.append(nxt)
                nxt = self.images[nxt]
            seen.update(orb)
            out.append(tuple(sorted(orb)))
        return out

    def __repr__(self):
        names = self.system.generator_names
        return "F(" + ",".join(f"{names[i]}->{names[j]}" for i, j in enumerate(self.images)) + ")"


# ---------------------------------------------------------------- constructors

def build_coxeter(matrix, names, cap: int = DEFAULT_CAP, label: str | None = None) -> CoxeterSystem:
    return CoxeterSystem(matrix, names, cap, label)


def dihedral(m: int, names: str = "st") -> CoxeterSystem:
    return CoxeterSystem([[1, m], [m, 1]], names, label=f"I2({m})")


PRESETS = {
    "A1": ([[1]], "s"),
    "A2": ([[1, 3], [3, 1]], "st"),
    "B2": ([[1, 4], [4, 1]], "st"),
    "G2": ([[1, 6], [6, 1]], "st"),
    "A3": ([[1, 3, 2], [3, 1, 3], [2, 3, 1]], "123"),
    "A1xA1": ([[1, 2], [2, 1]], "st"),
}

_cache: dict[str, CoxeterSystem] = {}


def preset(name: str) -> CoxeterSystem:
    """Shared instance of a named system: A1, A2, B2, G2, A3, A1xA1 or I2(m)."""
    if name not in _cache:
        if name in PRESETS:
            mat, names = PRESETS[name]
            _cache[name] = CoxeterSystem(mat, names, label=name)
        else:
            mm = re.fullmatch(r"I2\((\d+)\)", name)
            if not mm:
                raise ParseError(f"unknown Coxeter type {name!r}")
            _cache[name] = dihedral(int(mm.group(1)))
    return _cache[name]


def parse_coxeter_config(text: str, cap: int = DEFAULT_CAP) -> CoxeterSystem:
    """Parse `rank=2; m(s,t)=3; names=st`. Unlisted pairs default to m=2."""
    rank, names, pairs = None, None, []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        mm = re.fullmatch(r"m\(\s*(\S)\s*,\s*(\S)\s*\)\s*=\s*(\d+)", part)
        if mm:
            pairs.append((mm.group(1), mm.group(2), int(mm.group(3))))
            continue
        key, sep, val = part.partition("=")
        if not sep:
            raise ParseError(f"bad config item {part!r}")
        key, val = key.strip(), val.strip()
        if key == "rank":
            rank = int(val)
        elif key == "names":
            names = val
        else:
            raise ParseError(f"unknown config key {key!r}")
    if rank is None:
        raise ParseError("rank missing")
    if names is None:
        names = "stuvwxyz"[:rank] if rank <= 8 else None
    if names is None or len(names) != rank:
        raise ParseError("names must list one character per generator")
    idx = {c: i for i, c in enumerate(names)}
    mat = [[1 if i == j else 2 for j in range(rank)] for i in range(rank)]
    for a, b, v in pairs:
        if a not in idx or b not in idx or a == b:
            raise ParseError(f"bad pair m({a},{b})")
        mat[idx[a]][idx[b]] = mat[idx[b]][idx[a]] = v
    return CoxeterSystem(mat, names, cap)
