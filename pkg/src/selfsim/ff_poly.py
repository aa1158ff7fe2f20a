"""Exact arithmetic over the rational function field F_p(t).

Polynomials are stored as coefficient tuples (lowest degree first) reduced
mod a prime p. Rational functions are kept in lowest terms with a monic
denominator, so structural equality is mathematical equality.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

INF = math.inf


class FieldError(ArithmeticError):
    pass


class NotAUnit(FieldError):
    pass


class ZeroInput(FieldError):
    pass


class ParseError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class FieldElement:
    """A residue mod a prime p."""

    __slots__ = ("residue", "p")

    def __init__(self, residue: int, p: int):
        self.residue = residue % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise FieldError("characteristic mismatch")
            return other.residue
        return other % self.p

    def __add__(self, other):
        return FieldElement(self.residue + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.residue - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FieldElement(self._coerce(other) - self.residue, self.p)

    def __mul__(self, other):
        return FieldElement(self.residue * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.residue, self.p)

    def inverse(self) -> FieldElement:
        if self.residue == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return FieldElement(pow(self.residue, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldElement(self._coerce(other), self.p).inverse()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return (self.residue, self.p) == (other.residue, other.p)
        if isinstance(other, int):
            return self.residue == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.p))

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"FieldElement({self.residue}, {self.p})"


class Poly:
    """Polynomial over F_p with coefficients ``c[0] + c[1] t + ...``."""

    __slots__ = ("c", "p", "_hash")

    def __init__(self, coeffs, p: int):
        c = [int(x) % p for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)
        self.p = p
        self._hash = None

    @classmethod
    def _raw(cls, c: tuple, p: int) -> Poly:
        # c already reduced and trimmed
        obj = cls.__new__(cls)
        obj.c = c
        obj.p = p
        obj._hash = None
        return obj

    @classmethod
    def const(cls, a: int, p: int) -> Poly:
        return cls((a,), p)

    @classmethod
    def t(cls, p: int) -> Poly:
        return cls((0, 1), p)

    @classmethod
    def monomial(cls, n: int, p: int, a: int = 1) -> Poly:
        return cls((0,) * n + (a,), p)

    @property
    def deg(self) -> int:
        return len(self.c) - 1  # -1 for the zero polynomial

    @property
    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == (1,)

    def coefficients(self) -> list[FieldElement]:
        return [FieldElement(a, self.p) for a in self.c]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.p == other.p and self.c == other.c
        if isinstance(other, int):
            return self.c == Poly((other,), self.p).c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.c, self.p))
        return self._hash

    def __lt__(self, other: Poly):
        return (len(self.c), self.c[::-1]) < (len(other.c), other.c[::-1])

    def __add__(self, other: Poly) -> Poly:
        p = self.p
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = (out[i] + x) % p
        while out and out[-1] == 0:
            out.pop()
        return Poly._raw(tuple(out), p)

    def __neg__(self) -> Poly:
        p = self.p
        return Poly._raw(tuple((-x) % p for x in self.c), p)

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        p = self.p
        if isinstance(other, int):
            other = Poly((other,), p)
        a, b = self.c, other.c
        if not a or not b:
            return Poly._raw((), p)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out, p)

    __rmul__ = __mul__

    def scale(self, a: int) -> Poly:
        return Poly([a * x for x in self.c], self.p)

    def shift(self, n: int) -> Poly:
        """Multiply by t^n (n >= 0)."""
        if not self.c:
            return self
        return Poly._raw((0,) * n + self.c, self.p)

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly._raw((1,), self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        r = list(self.c)
        db = other.deg
        inv = pow(other.lc, -1, p)
        q = [0] * max(len(r) - db, 0)
        b = other.c
        for i in range(len(r) - 1, db - 1, -1):
            coef = r[i] * inv % p
            if coef:
                q[i - db] = coef
                for j in range(db + 1):
                    r[i - db + j] = (r[i - db + j] - coef * b[j]) % p
        return Poly(q, p), Poly(r[:db] if db > 0 else [], p)

    def __floordiv__(self, other: Poly) -> Poly:
        return self.divmod(other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return self.divmod(other)[1]

    def monic(self) -> Poly:
        if not self.c:
            return self
        return self.scale(pow(self.lc, -1, self.p))

    def __call__(self, x: int) -> int:
        acc = 0
        for a in reversed(self.c):
            acc = (acc * x + a) % self.p
        return acc

    def derivative(self) -> Poly:
        return Poly([i * a for i, a in enumerate(self.c)][1:], self.p)

    def __repr__(self):
        return f"Poly({self}, p={self.p})"

    def __str__(self):
        return format_poly(self)


def format_poly(f: Poly, var: str = "t") -> str:
    if f.is_zero():
        return "0"
    terms = []
    for i, a in enumerate(f.c):
        if a == 0:
            continue
        if i == 0:
            terms.append(str(a))
            continue
        mono = var if i == 1 else f"{var}^{i}"
        terms.append(mono if a == 1 else f"{a}*{mono}")
    return "+".join(terms)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_powmod(base: Poly, n: int, mod: Poly) -> Poly:
    result = Poly((1,), base.p) % mod
    base = base % mod
    while n:
        if n & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        n >>= 1
    return result


# -- factorization -----------------------------------------------------------

def _pth_root(f: Poly) -> Poly:
    # f' == 0, so f(t) = g(t^p); over F_p the coefficients are their own p-th roots
    p = f.p
    return Poly(f.c[::p], p)


def _squarefree(f: Poly) -> list[tuple[Poly, int]]:
    """Squarefree decomposition of a monic polynomial: [(g, multiplicity)]."""
    p = f.p
    out: list[tuple[Poly, int]] = []
    if f.deg <= 0:
        return out
    df = f.derivative()
    if df.is_zero():
        return [(g, m * p) for g, m in _squarefree(_pth_root(f))]
    c = poly_gcd(f, df)
    w = f // c
    i = 1
    while not w.is_one():
        y = poly_gcd(w, c)
        z = w // y
        if not z.is_one():
            out.append((z.monic(), i))
        w, c = y, c // y
        i += 1
    if not c.is_one():
        out.extend((g, m * p) for g, m in _squarefree(_pth_root(c).monic()))
    return out


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    p = f.p
    out = []
    t = Poly.t(p)
    h = t % f
    i = 0
    while f.deg >= 2 * (i + 1):
        i += 1
        h = poly_powmod(h, p, f)
        g = poly_gcd(f, h - t)
        if not g.is_one():
            out.append((g, i))
            f = f // g
            h = h % f
    if f.deg > 0:
        out.append((f.monic(), f.deg))
    return out


def _equal_degree(f: Poly, r: int, rng: random.Random) -> list[Poly]:
    p = f.p
    n = f.deg
    if n == r:
        return [f]
    while True:
        a = Poly([rng.randrange(p) for _ in range(n)], p)
        if a.deg < 1:
            continue
        if p == 2:
            # trace map a + a^2 + ... + a^(2^(r-1))
            b = a % f
            acc = b
            for _ in range(r - 1):
                b = (b * b) % f
                acc = acc + b
        else:
            acc = poly_powmod(a, (p ** r - 1) // 2, f) - Poly((1,), p)
        g = poly_gcd(f, acc)
        if 0 < g.deg < n:
            return _equal_degree(g, r, rng) + _equal_degree(f // g, r, rng)


@lru_cache(maxsize=65536)
def factor(f: Poly) -> tuple[int, tuple[tuple[Poly, int], ...]]:
    """Factor f into (leading coefficient, ((monic irreducible, exponent), ...))."""
    if f.is_zero():
        raise ZeroInput("cannot factor 0")
    lc = f.lc
    counts: dict[Poly, int] = {}
    rng = random.Random(0x5EED ^ hash(f.c))
    for g, m in _squarefree(f.monic()):
        for h, r in _distinct_degree(g):
            for q in _equal_degree(h, r, rng):
                q = q.monic()
                counts[q] = counts.get(q, 0) + m
    return lc, tuple(sorted(counts.items(), key=lambda kv: kv[0]))


def is_irreducible(f: Poly) -> bool:
    if f.deg < 1:
        return False
    _, fs = factor(f)
    return len(fs) == 1 and fs[0][1] == 1


def irreducibles(p: int, degree: int):
    """All monic irreducible polynomials of the given degree (small degrees only)."""
    for tail in range(p ** degree):
        coeffs = []
        x = tail
        for _ in range(degree):
            coeffs.append(x % p)
            x //= p
        f = Poly(coeffs + [1], p)
        if is_irreducible(f):
            yield f


# -- rational functions ------------------------------------------------------

class RationalFunction:
    """An element of F_p(t) in lowest terms with monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly | None = None):
        p = num.p
        if den is None:
            den = Poly._raw((1,), p)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = num, Poly._raw((1,), p)
        elif den.deg > 0:
            g = poly_gcd(num, den)
            if not g.is_one():
                num, den = num // g, den // g
        if den.lc != 1:
            inv = pow(den.lc, -1, p)
            num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den
        self._hash = None

    @property
    def p(self) -> int:
        return self.num.p

    @classmethod
    def const(cls, a: int, p: int) -> RationalFunction:
        return cls(Poly((a,), p))

    @classmethod
    def t(cls, p: int) -> RationalFunction:
        return cls(Poly.t(p))

    @classmethod
    def coerce(cls, x, p: int) -> RationalFunction:
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, Poly):
            return cls(x)
        if isinstance(x, int):
            return cls.const(x, p)
        if isinstance(x, str):
            return parse_rational(x, p)
        raise TypeError(f"cannot coerce {x!r} to a rational function")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Poly)):
            return self == RationalFunction.coerce(other, self.p)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __add__(self, other):
        other = RationalFunction.coerce(other, self.p)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other, self.p))

    def __rsub__(self, other):
        return RationalFunction.coerce(other, self.p) - self

    def __mul__(self, other):
        other = RationalFunction.coerce(other, self.p)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0 in F_p(t)")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * RationalFunction.coerce(other, self.p).inverse()

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other, self.p) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def __repr__(self):
        return f"RationalFunction({self}, p={self.p})"

    def __str__(self):
        return format_rational(self)


def format_rational(f: RationalFunction) -> str:
    num = format_poly(f.num)
    if f.den.is_one():
        return num
    den = format_poly(f.den)
    if len(f.num.c) - sum(1 for a in f.num.c if a == 0) > 1:
        num = f"({num})"
    return f"{num}/({den})"


# -- places ------------------------------------------------------------------

@dataclass(frozen=True)
class Place:
    """A place of F_p(t): ``poly is None`` means the place at infinity."""

    poly: Poly | None = None

    def __post_init__(self):
        if self.poly is not None:
            f = self.poly
            if f.lc != 1 or not is_irreducible(f):
                raise FieldError(f"place polynomial {f} must be monic irreducible")

    @classmethod
    def infinity(cls) -> Place:
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.deg

    def __lt__(self, other):
        if self.poly is None:
            return other.poly is not None
        if other.poly is None:
            return False
        return self.poly < other.poly

    def __str__(self):
        return "inf" if self.poly is None else format_poly(self.poly)


def place_from_text(text: str, p: int) -> Place:
    text = text.strip()
    if text in ("inf", "infinity", "oo"):
        return Place.infinity()
    f = parse_rational(text, p)
    if not f.den.is_one():
        raise ParseError(f"place {text!r} is not a polynomial")
    return Place(f.num.monic())


class PlaceSet(frozenset):
    """A finite non-empty set of places (the set S defining O_S)."""

    def __new__(cls, places=()):
        obj = super().__new__(cls, places)
        if not obj:
            raise FieldError("a place set must be non-empty")
        return obj

    @property
    def finite(self) -> list[Place]:
        return sorted(v for v in self if not v.is_infinite)

    def __str__(self):
        return "{" + ", ".join(str(v) for v in sorted(self)) + "}"


def _multiplicity(f: Poly, q: Poly) -> int:
    m = 0
    while True:
        quo, rem = f.divmod(q)
        if not rem.is_zero():
            return m
        f = quo
        m += 1


def valuation(f: RationalFunction, v: Place):
    """Valuation of f at the place v; ``INF`` exactly when f == 0."""
    if f.is_zero():
        return INF
    if v.is_infinite:
        return f.den.deg - f.num.deg
    return _multiplicity(f.num, v.poly) - _multiplicity(f.den, v.poly)


def poles_and_zeros(f: RationalFunction) -> dict[Place, int]:
    """All places where f has nonzero valuation (finite ones from factorization, plus infinity)."""
    out: dict[Place, int] = {}
    for q, m in factor(f.num)[1]:
        out[Place(q)] = out.get(Place(q), 0) + m
    for q, m in factor(f.den)[1]:
        out[Place(q)] = out.get(Place(q), 0) - m
    vinf = f.den.deg - f.num.deg
    if vinf:
        out[Place.infinity()] = vinf
    return {k: m for k, m in out.items() if m}


def is_s_integer(f: RationalFunction, S: PlaceSet) -> bool:
    """True iff f has no poles at places outside S."""
    if f.is_zero():
        return True
    if Place.infinity() not in S and f.num.deg > f.den.deg:
        return False
    if f.den.is_one():
        return True
    return all(Place(q) in S for q, _ in factor(f.den)[1])


def unit_factorization(f: RationalFunction, S: PlaceSet) -> tuple[int, dict[Place, int]]:
    """Write a unit of O_S as ``c * prod(place ** m)`` over the finite places of S."""
    if f.is_zero():
        raise ZeroInput("0 is not a unit")
    exps = {v: 0 for v in S.finite}
    for q, m in factor(f.num)[1]:
        if Place(q) not in exps:
            raise NotAUnit(f"{f} vanishes at {q}, which is not in S")
        exps[Place(q)] += m
    for q, m in factor(f.den)[1]:
        if Place(q) not in exps:
            raise NotAUnit(f"{f} has a pole at {q}, which is not in S")
        exps[Place(q)] -= m
    if Place.infinity() not in S and f.num.deg != f.den.deg:
        raise NotAUnit(f"{f} has a zero or pole at infinity, which is not in S")
    c = f.num.lc
    return c, exps


# -- text syntax -------------------------------------------------------------

def _tokenize(text: str):
    i = 0
    out = []
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(("int", int(text[i:j])))
            i = j
        elif ch in "+-*/^()":
            out.append((ch, ch))
            i += 1
        elif ch == "t":
            out.append(("t", "t"))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r} in {text!r}")
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, text: str, p: int):
        self.toks = _tokenize(text)
        self.i = 0
        self.p = p
        self.text = text

    def peek(self):
        return self.toks[self.i][0]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r} in {self.text!r}")
        self.i += 1
        return tok

    def expr(self):
        val = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while True:
            kind = self.peek()
            if kind in ("*", "/"):
                self.take()
                rhs = self.unary()
                val = val * rhs if kind == "*" else val / rhs
            elif kind in ("int", "t", "("):
                val = val * self.unary()  # juxtaposition, e.g. 2t
            else:
                return val

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            n = self.take("int")[1]
            base = base ** (sign * n)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "int":
            return RationalFunction.const(val, self.p)
        if kind == "t":
            return RationalFunction.t(self.p)
        if kind == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected token {kind!r} in {self.text!r}")


def parse_rational(text: str, p: int) -> RationalFunction:
    """Parse e.g. ``(1+t+t^2)^-1 * t`` over F_p."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    parser = _Parser(text, p)
    try:
        val = parser.expr()
    except ZeroDivisionError as exc:
        raise ParseError(f"division by zero in {text!r}") from exc
    if parser.peek() != "end":
        raise ParseError(f"trailing input in {text!r}")
    return val
