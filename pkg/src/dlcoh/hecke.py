"""Iwahori-Hecke algebra H_x(W) in the T_w basis.

Quadratic relation (T_s + 1)(T_s - x) = 0. Products are built by right
multiplication with generators:

    T_w T_s = T_ws                        if l(ws) > l(w)
            = (x - 1) T_w + x T_ws        otherwise

The closure element T_{_w} is the sum of T_v over the Bruhat interval [1, w].
Kazhdan-Lusztig polynomials use integer powers of x only, and D_w is
sum_y P_{y,w} T_y.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .braid import CompletedBraidElt
from .coxeter import CoxeterSystem, DiagramAutomorphism, WeylElt, preset
from .errors import DimensionMismatch, NotScalar, NotSmooth
from .rings import AlgebraicNumber, LaurentPoly, Matrix

__all__ = ["HeckeElt", "T", "t_bar", "eval_completed", "hecke_mult", "KLTable",
           "kl_polynomials", "kl_basis_D", "is_rationally_smooth", "LemmaT",
           "lemma_T_case", "CharSpec", "char_specs", "char_trace", "rep_matrix",
           "central_char_pi", "central_char_w0", "invert_Ts", "invert_T"]

X = LaurentPoly.x(1)
ONE = LaurentPoly.coerce(1)


class HeckeElt:
    __slots__ = ("system", "coeffs")

    def __init__(self, system: CoxeterSystem, coeffs: dict[int, LaurentPoly] | None = None):
        self.system = system
        self.coeffs = {int(k): LaurentPoly.coerce(v) for k, v in (coeffs or {}).items()
                       if not LaurentPoly.coerce(v).is_zero()}

    def coefficient(self, w: WeylElt | int) -> LaurentPoly:
        i = w.id if isinstance(w, WeylElt) else w
        return self.coeffs.get(i, LaurentPoly())

    def __add__(self, o: "HeckeElt") -> "HeckeElt":
        r = dict(self.coeffs)
        for k, v in o.coeffs.items():
            r[k] = r.get(k, LaurentPoly()) + v
        return HeckeElt(self.system, r)

    def __neg__(self):
        return HeckeElt(self.system, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, o: "HeckeElt") -> "HeckeElt":
        return self + (-o)

    def __mul__(self, o):
        if isinstance(o, HeckeElt):
            return hecke_mult(self, o)
        o = LaurentPoly.coerce(o)
        if o is NotImplemented:
            return o
        return HeckeElt(self.system, {k: v * o for k, v in self.coeffs.items()})

    def __rmul__(self, o):
        o = LaurentPoly.coerce(o)
        if o is NotImplemented:
            return o
        return HeckeElt(self.system, {k: o * v for k, v in self.coeffs.items()})

    def __eq__(self, o):
        return isinstance(o, HeckeElt) and o.system is self.system and o.coeffs == self.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def specialize(self, sqrt_x: int = 1) -> dict[int, AlgebraicNumber]:
        """Coefficients at x^(1/2) = sqrt_x; sqrt_x = 1 gives the group algebra."""
        out = {}
        for k, v in self.coeffs.items():
            c = v.evaluate(sqrt_x)
            if c:
                out[k] = c
        return out

    def __str__(self):
        W = self.system
        parts = []
        for k in sorted(self.coeffs, key=lambda i: (W._length[i], W._words[i])):
            parts.append(f"({self.coeffs[k]})*T[{W.word(W.elements[k])}]")
        return " + ".join(parts) or "0"

    __repr__ = lambda self: f"HeckeElt({self})"


def T(w: WeylElt) -> HeckeElt:
    return HeckeElt(w.system, {w.id: 1})


def t_bar(w: WeylElt) -> HeckeElt:
    W = w.system
    return HeckeElt(W, {v: 1 for v in W.bruhat_interval(w)})


def _times_gen(a: HeckeElt, s: int) -> HeckeElt:
    W = a.system
    r: dict[int, LaurentPoly] = {}
    for w, c in a.coeffs.items():
        ws = W._rmul[w][s]
        if W._length[ws] > W._length[w]:
            r[ws] = r.get(ws, LaurentPoly()) + c
        else:
            r[w] = r.get(w, LaurentPoly()) + c * (X - 1)
            r[ws] = r.get(ws, LaurentPoly()) + c * X
    return HeckeElt(W, r)


def hecke_mult(a: HeckeElt, b: HeckeElt) -> HeckeElt:
    W = a.system
    out = HeckeElt(W)
    for v, cv in b.coeffs.items():
        cur = a
        for s in W._words[v]:
            cur = _times_gen(cur, s)
        out = out + cur * cv
    return out


def eval_completed(c: CompletedBraidElt) -> HeckeElt:
    W = c.system
    out = HeckeElt(W, {0: 1})
    for under, w in c.tokens:
        el = W.elements[w]
        out = hecke_mult(out, t_bar(el) if under else T(el))
    return out


# ---------------------------------------------------------------- KL polynomials

def _padd(a: list[int], b: list[int], shift: int = 0, scale: int = 1) -> list[int]:
    n = max(len(a), len(b) + shift)
    r = list(a) + [0] * (n - len(a))
    for i, v in enumerate(b):
        r[i + shift] += scale * v
    while r and r[-1] == 0:
        r.pop()
    return r


class KLTable:
    """All P_{y,w} of a finite Coxeter system, as integer coefficient lists."""

    def __init__(self, W: CoxeterSystem):
        self.system = W
        L = W._length
        order = sorted(range(W.size), key=lambda i: L[i])
        P: dict[tuple[int, int], list[int]] = {}
        mu_cache: dict[int, list[tuple[int, int]]] = {}

        def get(y, w):
            return P.get((y, w), [])

        for w in order:
            P[(w, w)] = [1]
            if w == 0:
                mu_cache[w] = []
                continue
            s = W.left_descent_ids(w)[0]
            v = W._lmul[w][s]
            mus = [(z, m) for z, m in mu_cache[v] if W._length[W._lmul[z][s]] < L[z]]
            for y in W.bruhat_interval(W.elements[w]):
                if y == w:
                    continue
                sy = W._lmul[y][s]
                c = 1 if L[sy] < L[y] else 0
                acc = _padd([], get(sy, v), 1 - c)
                acc = _padd(acc, get(y, v), c)
                for z, m in mus:
                    if (y, z) in P:
                        acc = _padd(acc, P[(y, z)], (L[w] - L[z]) // 2, -m)
                P[(y, w)] = acc
            mu_cache[w] = [(y, self._mu_of(P[(y, w)], L[w] - L[y]))
                           for y in W.bruhat_interval(W.elements[w]) if y != w]
            mu_cache[w] = [(y, m) for y, m in mu_cache[w] if m]
        self._P = P

    @staticmethod
    def _mu_of(p: list[int], gap: int) -> int:
        if gap % 2 == 0:
            return 0
        k = (gap - 1) // 2
        return p[k] if k < len(p) else 0

    def coefficients(self, y: WeylElt, w: WeylElt) -> list[int]:
        return list(self._P.get((y.id, w.id), []))

    def P(self, y: WeylElt, w: WeylElt) -> LaurentPoly:
        return LaurentPoly({2 * i: c for i, c in enumerate(self._P.get((y.id, w.id), []))})

    def mu(self, y: WeylElt, w: WeylElt) -> int:
        if (y.id, w.id) not in self._P or y == w:
            return 0
        return self._mu_of(self._P[(y.id, w.id)], w.length - y.length)

    def pairs(self):
        W = self.system
        for (y, w), p in sorted(self._P.items(), key=lambda kv: (W._length[kv[0][1]], kv[0][1], kv[0][0])):
            yield W.elements[y], W.elements[w], LaurentPoly({2 * i: c for i, c in enumerate(p)})

    def to_csv(self) -> str:
        rows = ["y,w,P"]
        for y, w, p in self.pairs():
            rows.append(f"{y.word},{w.word},{p}")
        return "\n".join(rows) + "\n"


def kl_polynomials(W: CoxeterSystem) -> KLTable:
    tab = W.__dict__.get("_kl_table")
    if tab is None:
        tab = KLTable(W)
        W._kl_table = tab
    return tab


def kl_basis_D(w: WeylElt) -> HeckeElt:
    tab = kl_polynomials(w.system)
    W = w.system
    return HeckeElt(W, {y: tab.P(W.elements[y], w) for y in W.bruhat_interval(w)})


def is_rationally_smooth(w: WeylElt) -> bool:
    return kl_polynomials(w.system).coefficients(w.system.identity, w) == [1]


# ---------------------------------------------------------------- closure products

@dataclass
class LemmaT:
    case: str                      # "i" | "ii" | "iii" | "iv"
    w: WeylElt
    s: WeylElt
    y: WeylElt | None
    lhs: HeckeElt
    rhs: HeckeElt
    claims: dict[str, bool] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs and all(self.claims.values())

    def statement(self) -> str:
        w, s = self.w.word or "1", self.s.word
        ws = (self.w * self.s).word
        if self.case == "i":
            return f"T_{w}bar T_{s}bar = (x+1) T_{w}bar"
        if self.case == "ii":
            return f"T_{w}bar T_{s}bar = T_{ws}bar"
        if self.case == "iii":
            return f"T_{w}bar T_{s}bar = T_{ws}bar + x T_{self.y.word}bar"
        return f"T_{w}bar T_{s}bar = T_{ws}bar + x sum(T_v + T_vs); {ws} not smooth"


def lemma_T_case(w: WeylElt, s: str | int | WeylElt) -> LemmaT:
    W = w.system
    sg = s if isinstance(s, WeylElt) else W.gen(s)
    if sg.length != 1:
        raise ValueError("s must be a simple reflection")
    if not is_rationally_smooth(w):
        raise NotSmooth(f"{w!r} is not rationally smooth")
    lhs = hecke_mult(t_bar(w), t_bar(sg))
    ws = w * sg
    if ws.length < w.length:
        return LemmaT("i", w, sg, None, lhs, t_bar(w) * (X + 1))
    if not W.bruhat_leq(sg, w):
        return LemmaT("ii", w, sg, None, lhs, t_bar(ws), {"ws smooth": is_rationally_smooth(ws)})
    below = [W.elements[v] for v in W.bruhat_interval(w) if v != w.id]
    desc = [v for v in below if (v * sg).length < v.length]
    tops = [v for v in desc if v.length == w.length - 1]
    if tops:
        y = tops[0]
        claims = {
            "y unique": len(tops) == 1,
            "y maximum": all(W.bruhat_leq(v, y) for v in desc),
            "ws smooth": is_rationally_smooth(ws),
            "y smooth": is_rationally_smooth(y),
        }
        return LemmaT("iii", w, sg, y, lhs, t_bar(ws) + t_bar(y) * X, claims)
    rhs = t_bar(ws)
    for v in desc:
        rhs = rhs + (T(v) + T(v * sg)) * X
    return LemmaT("iv", w, sg, None, lhs, rhs, {"ws not smooth": not is_rationally_smooth(ws)})


# ---------------------------------------------------------------- characters

@dataclass
class CharSpec:
    """Matrix representation of H_x(W) semidirect <F> on a small space."""

    name: str
    system: CoxeterSystem
    gens: tuple[Matrix, ...]
    F: Matrix
    automorphism: DiagramAutomorphism
    twisted: bool = False

    def __post_init__(self):
        self.degree = self.F.dim
        self._cache: dict[int, Matrix] = {}
        self.validate()

    def validate(self):
        W, n = self.system, self.F.dim
        I = Matrix.identity(n)
        if len(self.gens) != W.rank or any(m.dim != n for m in self.gens):
            raise DimensionMismatch(f"{self.name}: wrong number or size of matrices")
        for M in self.gens:
            if (M + I) * (M - I * X) != Matrix.scalar(n, 0):
                raise ValueError(f"{self.name}: quadratic relation fails")
        for i in range(W.rank):
            for j in range(i + 1, W.rank):
                m = W.coxeter_matrix[i][j]
                a, b = I, I
                for k in range(m):
                    a = a * self.gens[i if k % 2 == 0 else j]
                    b = b * self.gens[j if k % 2 == 0 else i]
                if a != b:
                    raise ValueError(f"{self.name}: braid relation fails")
        if self.F * self.F != I:
            raise ValueError(f"{self.name}: F must be an involution")
        for i in range(W.rank):
            if self.F * self.gens[i] * self.F != self.gens[self.automorphism.gen_image(i)]:
                raise ValueError(f"{self.name}: F does not intertwine the generators")

    def matrix(self, w: WeylElt | int) -> Matrix:
        i = w.id if isinstance(w, WeylElt) else w
        got = self._cache.get(i)
        if got is None:
            got = Matrix.identity(self.degree)
            for s in self.system._words[i]:
                got = got * self.gens[s]
            self._cache[i] = got
        return got


def rep_matrix(spec: CharSpec, h: HeckeElt, with_F: bool | None = None) -> Matrix:
    if with_F is None:
        with_F = spec.twisted
    out = Matrix.scalar(spec.degree, 0)
    for w, c in h.coeffs.items():
        out = out + spec.matrix(w) * c
    return out * spec.F if with_F else out


def char_trace(spec: CharSpec, h: HeckeElt, with_F: bool | None = None) -> LaurentPoly:
    """sum_w c_w Tr(rho(T_w) [rho(F)]); the F factor defaults to the representation's twist."""
    if with_F is None:
        with_F = spec.twisted
    total = LaurentPoly()
    for w, c in h.coeffs.items():
        M = spec.matrix(w) * spec.F if with_F else spec.matrix(w)
        total = total + c * M.trace()
    return total


def central_char_w0(spec: CharSpec) -> Matrix:
    return spec.matrix(spec.system.longest_element())


def central_char_pi(spec: CharSpec) -> LaurentPoly:
    M = central_char_w0(spec)
    P = M * M
    if not P.is_scalar():
        raise NotScalar(f"T_pi is not scalar on {spec.name}")
    return P.rows[0][0]


def invert_Ts(W: CoxeterSystem, s: str | int) -> HeckeElt:
    xi = LaurentPoly.x(-1)
    return HeckeElt(W, {W.gen(s).id: xi, 0: xi - 1})


def invert_T(w: WeylElt) -> HeckeElt:
    W = w.system
    out = HeckeElt(W, {0: 1})
    for s in reversed(W._words[w.id]):
        out = hecke_mult(out, invert_Ts(W, s))
    return out


def _two_dim(c: AlgebraicNumber) -> tuple[Matrix, Matrix]:
    r = LaurentPoly.sqrt_x() * c
    return (Matrix([[-1, 0], [r, X]]), Matrix([[X, r], [0, -1]]))


def _one_dim(values: list) -> tuple[Matrix, ...]:
    return tuple(Matrix([[v]]) for v in values)


@lru_cache(maxsize=None)
def char_specs(type_name: str, twisted: bool = False) -> dict[str, CharSpec]:
    """Shipped representations of H_x(W) (with F) for a preset type.

    Two-dimensional ones have T_s = [[-1,0],[c*sqrt(x), x]], T_t = [[x, c*sqrt(x)],[0,-1]]
    with c = 1 (A2, and B for G2), sqrt2 (B2), sqrt3 (A for G2). In the twisted
    case F swaps the two generators and acts by [[0,1],[1,0]].
    """
    W = preset(type_name)
    r = W.rank
    if twisted:
        if r != 2:
            raise ValueError("twisted specs exist only in rank 2")
        F = W.diagram_automorphism(W.generator_names[::-1])
    else:
        F = W.diagram_automorphism()
    one = Matrix.identity(1)
    swap = Matrix([[0, 1], [1, 0]]) if twisted else Matrix.identity(2)
    out: dict[str, CharSpec] = {}

    def add(name, gens, Fm):
        out[name] = CharSpec(name, W, tuple(gens), Fm, F, twisted)

    add("Id", _one_dim([X] * r), one)
    add("sign", _one_dim([-1] * r), one)
    if type_name == "A2":
        add("rho", _two_dim(AlgebraicNumber(1)), swap)
    elif type_name == "B2":
        add("rho", _two_dim(AlgebraicNumber(0, 1)), swap)
        if not twisted:
            add("sigma", _one_dim([X, -1]), one)
            add("tau", _one_dim([-1, X]), one)
    elif type_name == "G2":
        add("A", _two_dim(AlgebraicNumber(0, 0, 1)), swap)
        add("B", _two_dim(AlgebraicNumber(1)), swap)
        if not twisted:
            add("sigma", _one_dim([-1, X]), one)
            add("tau", _one_dim([X, -1]), one)
    elif twisted:
        raise ValueError(f"no twisted specs for {type_name}")
    return out
