"""Eventually periodic Laurent series in a uniformizer pi over F_p.

An :class:`EpSeries` stores ``sum c_i pi^i`` as a valuation offset, a
preperiod and a repeating period. Series arithmetic is done in the formal
variable X = pi (fractions N(X)/D(X) over F_p), so it never touches the
function field; :func:`expand` and :func:`to_rational` are the bridge to
F_p(t) at a degree-1 place.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ff_poly import (
    FieldError, ParseError, Place, PlaceSet, Poly, RationalFunction,
    is_s_integer, valuation,
)


class SeriesError(ArithmeticError):
    pass


class DivisionByZero(SeriesError, ZeroDivisionError):
    pass


class BudgetExceeded(SeriesError):
    pass


@dataclass(frozen=True)
class CompletionContext:
    """Completion of F_p(t) at a degree-1 place ``s`` with uniformizer ``pi``."""

    p: int
    s: Place
    S: PlaceSet
    pi: RationalFunction

    def __post_init__(self):
        if self.s.degree != 1:
            raise FieldError("the completion place must have degree 1")
        if self.s in self.S:
            raise FieldError("the completion place may not lie in S")
        if self.pi.p != self.p:
            raise FieldError("uniformizer has the wrong characteristic")
        if valuation(self.pi, self.s) != 1:
            raise FieldError(f"{self.pi} is not a uniformizer at {self.s}")
        if not is_s_integer(self.pi, self.S):
            raise FieldError(f"{self.pi} is not an S-integer")
        # digits in pi must be eventually periodic for every element of F_p(t),
        # which needs F_p(pi) = F_p(t)
        if max(self.pi.num.deg, self.pi.den.deg) != 1:
            raise FieldError("the uniformizer must have degree 1 in t")

    def rational(self, x) -> RationalFunction:
        return RationalFunction.coerce(x, self.p)

    def __str__(self):
        return f"p={self.p}, s={self.s}, pi={self.pi}, S={self.S}"


def residue(f: RationalFunction, s: Place) -> int:
    """Image of f (with valuation >= 0 at s) in the residue field F_p."""
    if s.is_infinite:
        if f.num.deg < f.den.deg:
            return 0
        return f.num.lc * pow(f.den.lc, -1, f.p) % f.p
    a = -s.poly.c[0] % f.p  # s = t - a
    return f.num(a) * pow(f.den(a), -1, f.p) % f.p


def _minimal_period(period: tuple) -> tuple:
    n = len(period)
    for ell in range(1, n + 1):
        if n % ell == 0 and period[:ell] * (n // ell) == period:
            return period[:ell]
    return period


class EpSeries:
    """Eventually periodic series ``pi^offset * (pre | period period ...)``.

    Always held in canonical form: the digit at ``offset`` is nonzero, and
    both the preperiod and the period are as short as possible. Zero is
    ``offset 0, pre (), period (0,)``.
    """

    __slots__ = ("p", "offset", "pre", "period")

    def __init__(self, p: int, offset: int, pre, period):
        pre = tuple(int(x) % p for x in pre)
        period = tuple(int(x) % p for x in period)
        if not period:
            raise SeriesError("period must be non-empty")
        period = _minimal_period(period)
        pre = list(pre)
        while pre and pre[-1] == period[-1]:
            pre.pop()
            period = period[-1:] + period[:-1]
        k = 0
        while k < len(pre) and pre[k] == 0:
            k += 1
        offset += k
        pre = pre[k:]
        if not pre:
            if not any(period):
                offset, period = 0, (0,)
            else:
                while period[0] == 0:
                    period = period[1:] + period[:1]
                    offset += 1
        self.p = p
        self.offset = offset
        self.pre = tuple(pre)
        self.period = period

    @classmethod
    def zero(cls, p: int) -> EpSeries:
        return cls(p, 0, (), (0,))

    @classmethod
    def one(cls, p: int) -> EpSeries:
        return cls(p, 0, (1,), (0,))

    @classmethod
    def from_digits(cls, p: int, digits, offset: int = 0) -> EpSeries:
        """Finite series with the given digits starting at ``offset``."""
        return cls(p, offset, tuple(digits), (0,))

    def is_zero(self) -> bool:
        return self.period == (0,) and not self.pre

    def is_finite(self) -> bool:
        return self.period == (0,)

    @property
    def key(self):
        return (self.p, self.offset, self.pre, self.period)

    def __eq__(self, other):
        return isinstance(other, EpSeries) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def digit(self, i: int) -> int:
        j = i - self.offset
        if j < 0:
            return 0
        if j < len(self.pre):
            return self.pre[j]
        return self.period[(j - len(self.pre)) % len(self.period)]

    def digits(self, lo: int, hi: int) -> list[int]:
        return [self.digit(i) for i in range(lo, hi)]

    def canonical(self) -> EpSeries:
        return EpSeries(self.p, self.offset, self.pre, self.period)

    # arithmetic through N(X)/D(X)
    def _fraction(self) -> tuple[int, Poly, Poly]:
        p = self.p
        ell = len(self.period)
        m = len(self.pre)
        one_minus = Poly((1,) + (0,) * (ell - 1) + (p - 1,), p)  # 1 - X^ell
        num = Poly(self.pre, p) * one_minus + Poly(self.period, p).shift(m)
        return self.offset, num, one_minus

    def __add__(self, other: EpSeries) -> EpSeries:
        _check_p(self, other)
        o1, n1, d1 = self._fraction()
        o2, n2, d2 = other._fraction()
        o = min(o1, o2)
        num = n1.shift(o1 - o) * d2 + n2.shift(o2 - o) * d1
        return from_fraction(num, d1 * d2, o)

    def __neg__(self) -> EpSeries:
        p = self.p
        return EpSeries(p, self.offset, [-x for x in self.pre], [-x for x in self.period])

    def __sub__(self, other: EpSeries) -> EpSeries:
        return self + (-other)

    def __mul__(self, other) -> EpSeries:
        if isinstance(other, int):
            other = EpSeries.from_digits(self.p, [other])
        _check_p(self, other)
        if self.is_zero() or other.is_zero():
            return EpSeries.zero(self.p)
        o1, n1, d1 = self._fraction()
        o2, n2, d2 = other._fraction()
        return from_fraction(n1 * n2, d1 * d2, o1 + o2)

    __rmul__ = __mul__

    def unit_inverse(self) -> EpSeries:
        if self.is_zero():
            raise DivisionByZero("inverse of the zero series")
        o, num, den = self._fraction()
        return from_fraction(den, num, -o)

    def __repr__(self):
        return f"EpSeries({self})"

    def __str__(self):
        return format_series(self)


def _check_p(a: EpSeries, b: EpSeries):
    if a.p != b.p:
        raise SeriesError("characteristic mismatch")


def from_fraction(num: Poly, den: Poly, offset: int = 0, budget: int = 1 << 20) -> EpSeries:
    """Expand ``X^offset * num(X)/den(X)`` as a power series in X."""
    p = num.p
    if num.is_zero():
        return EpSeries.zero(p)
    while den.c[0] == 0:
        den = Poly(den.c[1:], p)
        offset -= 1
    while num.c[0] == 0:
        num = Poly(num.c[1:], p)
        offset += 1
    inv0 = pow(den.c[0], -1, p)
    seen: dict[tuple, int] = {}
    digits: list[int] = []
    r = num
    while r.c not in seen:
        if len(digits) > budget:
            raise BudgetExceeded("series expansion did not become periodic")
        seen[r.c] = len(digits)
        c = r.c[0] * inv0 % p if r.c else 0
        digits.append(c)
        r = r - den.scale(c)
        r = Poly(r.c[1:], p)
    start = seen[r.c]
    return EpSeries(p, offset, digits[:start], digits[start:])


def expand(f, ctx: CompletionContext, budget: int = 1 << 20) -> EpSeries:
    """The pi-adic expansion of f at ``ctx.s``.

    Iterates ``g -> (g - residue(g)) / pi``; the remainders are exactly the
    tails ``pi^-i [f]_i``, so the first repeated remainder marks the start
    of the (minimal) period.
    """
    f = ctx.rational(f)
    p = ctx.p
    if f.is_zero():
        return EpSeries.zero(p)
    v = valuation(f, ctx.s)
    g = f / ctx.pi ** v
    seen: dict[RationalFunction, int] = {}
    digits: list[int] = []
    while g not in seen:
        if len(digits) > budget:
            raise BudgetExceeded("expansion did not become periodic")
        seen[g] = len(digits)
        c = residue(g, ctx.s)
        digits.append(c)
        g = (g - c) / ctx.pi
    start = seen[g]
    return EpSeries(p, v, digits[:start], digits[start:])


def _poly_in_pi(digits, ctx: CompletionContext) -> RationalFunction:
    acc = RationalFunction.const(0, ctx.p)
    for c in reversed(digits):
        acc = acc * ctx.pi + c
    return acc


def to_rational(a: EpSeries, ctx: CompletionContext) -> RationalFunction:
    """The element of F_p(t) whose expansion is ``a``."""
    if a.p != ctx.p:
        raise SeriesError("characteristic mismatch")
    if a.is_zero():
        return RationalFunction.const(0, ctx.p)
    pi = ctx.pi
    head = _poly_in_pi(a.pre, ctx)
    ell = len(a.period)
    tail = _poly_in_pi(a.period, ctx) / (1 - pi ** ell)
    return (head + pi ** len(a.pre) * tail) * pi ** a.offset


def truncate(a: EpSeries, lo: int | None = None, hi: int | None = None) -> EpSeries:
    """``[a]_lo^hi``: keep the digits with index in ``[lo, hi)``; None drops that bound."""
    p = a.p
    if a.is_zero():
        return a
    if hi is not None:
        start = a.offset if lo is None else max(lo, a.offset)
        if hi <= start:
            return EpSeries.zero(p)
        return EpSeries(p, start, a.digits(start, hi), (0,))
    if lo is None or lo <= a.offset:
        return a
    tail_start = a.offset + len(a.pre)
    pre = a.digits(lo, max(lo, tail_start))
    first = max(lo, tail_start)
    ell = len(a.period)
    rot = (first - tail_start) % ell
    period = a.period[rot:] + a.period[:rot]
    return EpSeries(p, lo, pre, period)


def shift(a: EpSeries, e: int) -> EpSeries:
    """Multiply by pi^-e."""
    if a.is_zero():
        return a
    return EpSeries(a.p, a.offset - e, a.pre, a.period)


def add(a: EpSeries, b: EpSeries) -> EpSeries:
    return a + b


def mul(a: EpSeries, b: EpSeries) -> EpSeries:
    return a * b


def unit_inverse(a: EpSeries) -> EpSeries:
    return a.unit_inverse()


def period_bound(f: RationalFunction, ctx: CompletionContext) -> int:
    """An upper bound for preperiod + period of ``expand(f)``.

    Writing f in terms of pi, the tails are N(pi)/D(pi) with a fixed
    denominator of degree at most ``m = max(deg num, deg den)`` and numerators
    of degree below m once the preperiod has been consumed.
    """
    m = max(f.num.deg, f.den.deg, 0)
    return ctx.p ** m + m + 1


def format_series(a: EpSeries) -> str:
    pre = " ".join(str(x) for x in a.pre)
    per = " ".join(str(x) for x in a.period)
    body = f"({pre} | {per})" if pre else f"(| {per})"
    return f"pi^{a.offset} * {body}"


_SERIES_RE = re.compile(r"^\s*pi\^(-?\d+)\s*\*\s*\(([^|]*)\|([^)]*)\)\s*$")


def parse_series(text: str, p: int) -> EpSeries:
    m = _SERIES_RE.match(text)
    if not m:
        raise ParseError(f"bad series syntax: {text!r}")
    offset = int(m.group(1))
    pre = [int(x) for x in m.group(2).split()]
    period = [int(x) for x in m.group(3).split()]
    if any(not 0 <= x < p for x in pre + period):
        raise ParseError(f"digits must lie in 0..{p - 1}")
    if not period:
        raise ParseError("empty period")
    return EpSeries(p, offset, pre, period)
