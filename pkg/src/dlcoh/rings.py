"""Exact coefficient rings.

AlgebraicNumber is an element a + b*sqrt2 + c*sqrt3 + d*sqrt6 of Z[sqrt2, sqrt3].
LaurentPoly is a Laurent polynomial in x whose exponents are multiples of 1/2,
stored doubled as integers. BiPoly lives in Z[t^(1/2), h], optionally linear in
a formal parameter eps. Matrix is a small square matrix over LaurentPoly.

Both polynomial types parse and print the same small expression language:
sums, products, integer powers and parentheses, with `x^(p/2)`, `t^(p/2)`,
`h^q`, `eps`, `sqrt2`, `sqrt3`, `sqrt6` as atoms.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable

from .errors import (DimensionMismatch, HalfPowerResidue,
                     NonIntegralCoefficient, ParseError)

__all__ = ["AlgebraicNumber", "LaurentPoly", "BiPoly", "Matrix",
           "parse_laurent", "parse_bipoly", "format_half_power"]


class AlgebraicNumber:
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int = 0, b: int = 0, c: int = 0, d: int = 0):
        self.a, self.b, self.c, self.d = int(a), int(b), int(c), int(d)

    @staticmethod
    def coerce(v) -> "AlgebraicNumber":
        if isinstance(v, AlgebraicNumber):
            return v
        if isinstance(v, int):
            return AlgebraicNumber(v)
        return NotImplemented

    @staticmethod
    def sqrt(m: int) -> "AlgebraicNumber":
        return {1: AlgebraicNumber(1), 2: AlgebraicNumber(0, 1),
                3: AlgebraicNumber(0, 0, 1), 6: AlgebraicNumber(0, 0, 0, 1)}[m]

    def parts(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __add__(self, o):
        o = AlgebraicNumber.coerce(o)
        if o is NotImplemented:
            return o
        return AlgebraicNumber(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, o):
        o = AlgebraicNumber.coerce(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = AlgebraicNumber.coerce(o)
        if o is NotImplemented:
            return o
        a1, b1, c1, d1 = self.parts()
        a2, b2, c2, d2 = o.parts()
        return AlgebraicNumber(
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def __pow__(self, n: int):
        r = AlgebraicNumber(1)
        for _ in range(n):
            r = r * self
        return r

    def __eq__(self, o):
        o = AlgebraicNumber.coerce(o)
        if o is NotImplemented:
            return False
        return self.parts() == o.parts()

    def __hash__(self):
        return hash(("alg",) + self.parts())

    def __bool__(self):
        return any(self.parts())

    def is_rational(self) -> bool:
        return self.b == 0 and self.c == 0 and self.d == 0

    def conj2(self) -> "AlgebraicNumber":
        """sqrt2 -> -sqrt2 (so sqrt6 -> -sqrt6)."""
        return AlgebraicNumber(self.a, -self.b, self.c, -self.d)

    def conj3(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self.a, self.b, -self.c, -self.d)

    def norm(self) -> int:
        p = self * self.conj2() * self.conj3() * self.conj2().conj3()
        assert p.is_rational()
        return p.a

    def div_int(self, k: int) -> "AlgebraicNumber":
        if any(v % k for v in self.parts()):
            raise NonIntegralCoefficient(f"{self} is not divisible by {k}")
        return AlgebraicNumber(*(v // k for v in self.parts()))

    def __repr__(self):
        return f"AlgebraicNumber({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self):
        out = []
        for v, name in zip(self.parts(), ("", "sqrt2", "sqrt3", "sqrt6")):
            if v:
                out.append(_term(v, [name] if name else []))
        return _join(out)


def format_half_power(var: str, halves: int) -> str:
    if halves == 0:
        return ""
    if halves % 2 == 0:
        e = halves // 2
        return var if e == 1 else f"{var}^{e}" if e > 0 else f"{var}^({e})"
    return f"{var}^({halves}/2)"


def _term(coeff: int, factors: list[str]) -> str:
    factors = [f for f in factors if f]
    if not factors:
        return str(coeff)
    body = "*".join(factors)
    if coeff == 1:
        return body
    if coeff == -1:
        return "-" + body
    return f"{coeff}*{body}"


def _join(terms: list[str]) -> str:
    if not terms:
        return "0"
    s = terms[0]
    for t in terms[1:]:
        s += t if t.startswith("-") else "+" + t
    return s


class LaurentPoly:
    """Laurent polynomial in x with half-integer exponents."""

    __slots__ = ("_t",)

    def __init__(self, terms: dict[int, AlgebraicNumber] | None = None):
        self._t: dict[int, AlgebraicNumber] = {}
        if terms:
            for k, v in terms.items():
                v = AlgebraicNumber.coerce(v)
                if v:
                    self._t[int(k)] = v

    @staticmethod
    def coerce(v) -> "LaurentPoly":
        if isinstance(v, LaurentPoly):
            return v
        if isinstance(v, (int, AlgebraicNumber)):
            return LaurentPoly({0: v})
        return NotImplemented

    @staticmethod
    def monomial(halves: int, coeff=1) -> "LaurentPoly":
        return LaurentPoly({halves: coeff})

    @staticmethod
    def x(power: int = 1) -> "LaurentPoly":
        return LaurentPoly({2 * power: 1})

    @staticmethod
    def sqrt_x() -> "LaurentPoly":
        return LaurentPoly({1: 1})

    def terms(self) -> dict[int, AlgebraicNumber]:
        return dict(self._t)

    def coefficient(self, halves: int) -> AlgebraicNumber:
        return self._t.get(halves, AlgebraicNumber())

    def is_zero(self) -> bool:
        return not self._t

    __bool__ = lambda self: bool(self._t)

    def __add__(self, o):
        o = LaurentPoly.coerce(o)
        if o is NotImplemented:
            return o
        r = dict(self._t)
        for k, v in o._t.items():
            r[k] = r.get(k, AlgebraicNumber()) + v
        return LaurentPoly(r)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self._t.items()})

    def __sub__(self, o):
        o = LaurentPoly.coerce(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = LaurentPoly.coerce(o)
        if o is NotImplemented:
            return o
        r: dict[int, AlgebraicNumber] = {}
        for k1, v1 in self._t.items():
            for k2, v2 in o._t.items():
                k = k1 + k2
                r[k] = r.get(k, AlgebraicNumber()) + v1 * v2
        return LaurentPoly(r)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._t) == 1:
                (k, v), = self._t.items()
                if v == 1 or v == -1:
                    return LaurentPoly({-k * -n: v ** -n})
            raise ValueError("negative power of a non-monomial")
        r = LaurentPoly({0: 1})
        base = self
        while n:
            if n & 1:
                r = r * base
            base = base * base
            n >>= 1
        return r

    def __eq__(self, o):
        o = LaurentPoly.coerce(o)
        if o is NotImplemented:
            return False
        return self._t == o._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def bar(self) -> "LaurentPoly":
        """x^(1/2) -> x^(-1/2)."""
        return LaurentPoly({-k: v for k, v in self._t.items()})

    def mul_sqrt(self, m: int) -> "LaurentPoly":
        s = AlgebraicNumber.sqrt(m)
        return LaurentPoly({k: v * s for k, v in self._t.items()})

    def div_int(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e: v.div_int(k) for e, v in self._t.items()})

    def has_integer_exponents(self) -> bool:
        return all(k % 2 == 0 for k in self._t)

    def is_rational(self) -> bool:
        return all(v.is_rational() for v in self._t.values())

    def min_halves(self) -> int:
        return min(self._t) if self._t else 0

    def max_halves(self) -> int:
        return max(self._t) if self._t else 0

    def negate_x(self) -> "LaurentPoly":
        """x -> -x; defined only when every exponent is an integer."""
        if not self.has_integer_exponents():
            raise HalfPowerResidue(f"half power of x in {self}")
        return LaurentPoly({k: (v if (k // 2) % 2 == 0 else -v) for k, v in self._t.items()})

    def evaluate(self, sqrt_x: int) -> AlgebraicNumber:
        """Value at x^(1/2) = sqrt_x (negative exponents need sqrt_x = +-1)."""
        total = AlgebraicNumber()
        for k, v in self._t.items():
            if k < 0 and sqrt_x not in (1, -1):
                raise ValueError("negative exponent at a non-unit value")
            total = total + v * (sqrt_x ** abs(k) if k >= 0 else sqrt_x ** (-k))
        return total

    def _rational_terms(self) -> dict[int, int]:
        out = {}
        for k, v in self._t.items():
            if not v.is_rational():
                raise NonIntegralCoefficient(f"irrational coefficient survives in {self}")
            out[k] = v.a
        return out

    def subst_h2t(self) -> "BiPoly":
        """x^(k/2) -> h^k t^(k/2)."""
        out = {}
        for k, v in self._rational_terms().items():
            if k < 0:
                raise ValueError(f"negative power of x in {self}")
            out[(k, k, 0)] = v
        return BiPoly(out)

    def subst_minus_ht(self) -> "BiPoly":
        """x -> -h t, for integer exponents only."""
        if not self.has_integer_exponents():
            raise HalfPowerResidue(f"half power of x in {self}")
        out = {}
        for k, v in self._rational_terms().items():
            j = k // 2
            if j < 0:
                raise ValueError(f"negative power of x in {self}")
            out[(2 * j, j, 0)] = v if j % 2 == 0 else -v
        return BiPoly(out)

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"

    def __str__(self):
        out = []
        for k in sorted(self._t):
            v = self._t[k]
            xp = format_half_power("x", k)
            for c, name in zip(v.parts(), ("", "sqrt2", "sqrt3", "sqrt6")):
                if c:
                    out.append(_term(c, [name, xp]))
        return _join(out)


class BiPoly:
    """Element of Z[t^(1/2), h] (+ eps * same), keyed by (t_halves, h, eps)."""

    __slots__ = ("_t",)

    def __init__(self, terms: dict[tuple[int, int, int], int] | None = None):
        self._t: dict[tuple[int, int, int], int] = {}
        if terms:
            for key, v in terms.items():
                if v:
                    t, h, e = key
                    if t < 0 or h < 0 or e not in (0, 1):
                        raise ValueError(f"bad monomial {key}")
                    self._t[(int(t), int(h), int(e))] = int(v)

    @staticmethod
    def coerce(v) -> "BiPoly":
        if isinstance(v, BiPoly):
            return v
        if isinstance(v, int):
            return BiPoly({(0, 0, 0): v})
        return NotImplemented

    @staticmethod
    def monomial(t_halves: int = 0, h: int = 0, eps: int = 0, coeff: int = 1) -> "BiPoly":
        return BiPoly({(t_halves, h, eps): coeff})

    def terms(self) -> dict[tuple[int, int, int], int]:
        return dict(self._t)

    def coefficient(self, t_halves: int, h: int, eps: int = 0) -> int:
        return self._t.get((t_halves, h, eps), 0)

    def is_zero(self) -> bool:
        return not self._t

    __bool__ = lambda self: bool(self._t)

    def __add__(self, o):
        o = BiPoly.coerce(o)
        if o is NotImplemented:
            return o
        r = dict(self._t)
        for k, v in o._t.items():
            r[k] = r.get(k, 0) + v
        return BiPoly(r)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly({k: -v for k, v in self._t.items()})

    def __sub__(self, o):
        o = BiPoly.coerce(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = BiPoly.coerce(o)
        if o is NotImplemented:
            return o
        r: dict[tuple[int, int, int], int] = {}
        for (t1, h1, e1), v1 in self._t.items():
            for (t2, h2, e2), v2 in o._t.items():
                if e1 + e2 > 1:
                    raise ValueError("eps is kept linear; eps^2 is not representable")
                k = (t1 + t2, h1 + h2, e1 + e2)
                r[k] = r.get(k, 0) + v1 * v2
        return BiPoly(r)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        r = BiPoly({(0, 0, 0): 1})
        for _ in range(n):
            r = r * self
        return r

    def __eq__(self, o):
        o = BiPoly.coerce(o)
        if o is NotImplemented:
            return False
        return self._t == o._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def specialize_h(self, value: int) -> "BiPoly":
        r: dict[tuple[int, int, int], int] = {}
        for (t, h, e), v in self._t.items():
            r[(t, 0, e)] = r.get((t, 0, e), 0) + v * value ** h
        return BiPoly(r)

    def specialize_eps(self, value: int) -> "BiPoly":
        r: dict[tuple[int, int, int], int] = {}
        for (t, h, e), v in self._t.items():
            c = v * (value if e else 1)
            r[(t, h, 0)] = r.get((t, h, 0), 0) + c
        return BiPoly(r)

    def has_eps(self) -> bool:
        return any(e for (_, _, e) in self._t)

    def coefficients(self) -> list[int]:
        return list(self._t.values())

    def __repr__(self):
        return f"BiPoly({str(self)!r})"

    def __str__(self):
        keys = sorted(self._t, key=lambda k: (k[2], -k[1], -k[0]))
        out = []
        for t, h, e in keys:
            hp = "h" if h == 1 else f"h^{h}" if h else ""
            out.append(_term(self._t[(t, h, e)], [hp, format_half_power("t", t), "eps" if e else ""]))
        return _join(out)


class Matrix:
    """Square matrix over LaurentPoly."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(LaurentPoly.coerce(v) for v in r) for r in rows)
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise DimensionMismatch("matrix must be square")

    @property
    def dim(self) -> int:
        return len(self.rows)

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def scalar(n: int, v) -> "Matrix":
        return Matrix([[v if i == j else 0 for j in range(n)] for i in range(n)])

    def _check(self, o: "Matrix"):
        if self.dim != o.dim:
            raise DimensionMismatch(f"{self.dim} vs {o.dim}")

    def __add__(self, o: "Matrix") -> "Matrix":
        self._check(o)
        return Matrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, o.rows)])

    def __sub__(self, o: "Matrix") -> "Matrix":
        self._check(o)
        return Matrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, o.rows)])

    def __mul__(self, o):
        if isinstance(o, Matrix):
            self._check(o)
            n = self.dim
            return Matrix([[sum((self.rows[i][k] * o.rows[k][j] for k in range(n)), LaurentPoly())
                            for j in range(n)] for i in range(n)])
        o = LaurentPoly.coerce(o)
        if o is NotImplemented:
            return o
        return Matrix([[v * o for v in r] for r in self.rows])

    __rmul__ = lambda self, o: self * o

    def __pow__(self, n: int) -> "Matrix":
        r = Matrix.identity(self.dim)
        base = self
        while n:
            if n & 1:
                r = r * base
            base = base * base
            n >>= 1
        return r

    def __eq__(self, o):
        return isinstance(o, Matrix) and self.rows == o.rows

    def __hash__(self):
        return hash(self.rows)

    def trace(self) -> LaurentPoly:
        return sum((self.rows[i][i] for i in range(self.dim)), LaurentPoly())

    def is_scalar(self) -> bool:
        n = self.dim
        return all((self.rows[i][j] == 0) if i != j else self.rows[i][i] == self.rows[0][0]
                   for i in range(n) for j in range(n))

    def __repr__(self):
        return "Matrix([" + ", ".join("[" + ", ".join(str(v) for v in r) + "]" for r in self.rows) + "])"


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        pos = m.end()
        if m.group(1):
            toks.append(("num", m.group(1)))
        elif m.group(2):
            toks.append(("name", m.group(2)))
        else:
            toks.append(("op", m.group(3)))
    return toks


class _Parser:
    """Recursive descent: expr := [+-] term ([+-] term)*, term := factor (* factor)*."""

    def __init__(self, text: str, num: Callable, var: Callable):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.num = num
        self.var = var

    def fail(self, msg: str):
        raise ParseError(f"{msg} in {self.text!r}")

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, op=None):
        tok = self.peek()
        if tok[0] is None or (op is not None and tok != ("op", op)):
            self.fail(f"expected {op or 'token'}")
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            self.fail("empty expression")
        v = self.expr()
        if self.i != len(self.toks):
            self.fail(f"unexpected {self.peek()[1]!r}")
        return v

    def expr(self):
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        v = self.term()
        if sign < 0:
            v = -v
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            v = v * self.factor()
        return v

    def exponent(self) -> Fraction:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return Fraction(int(val))
        if (kind, val) == ("op", "-"):
            self.take()
            return -Fraction(int(self.take_num()))
        self.take("(")
        neg = False
        if self.peek() == ("op", "-"):
            self.take()
            neg = True
        p = Fraction(int(self.take_num()))
        if self.peek() == ("op", "/"):
            self.take()
            p /= int(self.take_num())
        self.take(")")
        return -p if neg else p

    def take_num(self) -> str:
        kind, val = self.take()
        if kind != "num":
            self.fail("expected integer")
        return val

    def factor(self):
        kind, val = self.take()
        if kind == "num":
            v = self.num(int(val))
            if self.peek() == ("op", "^"):
                self.take()
                e = self.exponent()
                if e.denominator != 1 or e < 0:
                    self.fail("bad exponent on a number")
                v = self.num(int(val) ** int(e))
            return v
        if kind == "name":
            e = Fraction(1)
            if self.peek() == ("op", "^"):
                self.take()
                e = self.exponent()
            try:
                return self.var(val, e)
            except ParseError:
                raise
            except (ValueError, KeyError) as exc:
                self.fail(str(exc))
        if (kind, val) == ("op", "("):
            v = self.expr()
            self.take(")")
            if self.peek() == ("op", "^"):
                self.take()
                e = self.exponent()
                if e.denominator != 1 or e < 0:
                    self.fail("bad exponent on a group")
                v = v ** int(e)
            return v
        self.fail(f"unexpected {val!r}")


def _halves(e: Fraction, var: str) -> int:
    if (2 * e).denominator != 1:
        raise ValueError(f"exponent of {var} must be a multiple of 1/2")
    return int(2 * e)


def _laurent_var(name: str, e: Fraction) -> LaurentPoly:
    if name == "x":
        return LaurentPoly.monomial(_halves(e, "x"))
    if name in ("sqrt2", "sqrt3", "sqrt6"):
        if e.denominator != 1 or e < 0:
            raise ValueError("only nonnegative integer powers of square roots")
        return LaurentPoly({0: AlgebraicNumber.sqrt(int(name[4:])) ** int(e)})
    raise ValueError(f"unknown symbol {name!r}")


def _bipoly_var(name: str, e: Fraction) -> BiPoly:
    if name == "t":
        k = _halves(e, "t")
        if k < 0:
            raise ValueError("negative power of t")
        return BiPoly.monomial(t_halves=k)
    if name == "h":
        if e.denominator != 1 or e < 0:
            raise ValueError("h takes nonnegative integer powers")
        return BiPoly.monomial(h=int(e))
    if name == "eps":
        if e not in (0, 1):
            raise ValueError("eps enters linearly")
        return BiPoly.monomial(eps=int(e))
    raise ValueError(f"unknown symbol {name!r}")


def parse_laurent(text: str) -> LaurentPoly:
    return _Parser(text, lambda n: LaurentPoly.coerce(n), _laurent_var).parse()


def parse_bipoly(text: str) -> BiPoly:
    return _Parser(text, lambda n: BiPoly.coerce(n), _bipoly_var).parse()
