"""The affine groups AGL_1(O_S) acting on the tree of the completed ring O.

An element ``(alpha, beta)`` acts on O by ``gamma -> alpha*gamma + beta``.
Writing gamma by its pi-adic digits identifies O with the boundary of the
p-ary tree, and the action is finite-state. The state at a vertex
``gamma mod m^e`` is ``(alpha, delta)`` with

    delta = pi^-e * (alpha*gamma + beta - [alpha*gamma + beta]^e)

where ``[x]^e`` keeps the digits below e. One step at a time this is
``delta = (alpha*r + beta - c) / pi`` with c the residue of ``alpha*r + beta``,
which is how :func:`compile` builds transitions without touching series.
Residue r is letter r+1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ff_poly import (
    FieldError, NotAUnit, ParseError, Place, PlaceSet, Poly, RationalFunction,
    format_rational, is_s_integer, parse_rational, unit_factorization,
)
from .mealy import Automaton, BudgetExceeded, Element, act_periodic
from .series import CompletionContext, EpSeries, expand, residue, to_rational


class WrongContext(FieldError):
    pass


@dataclass(frozen=True)
class Agl1Element:
    alpha: RationalFunction
    beta: RationalFunction
    ctx: CompletionContext

    def __post_init__(self):
        ctx = self.ctx
        try:
            unit_factorization(self.alpha, ctx.S)
        except FieldError as exc:
            raise NotAUnit(f"alpha = {self.alpha} is not a unit of O_S") from exc
        if not is_s_integer(self.beta, ctx.S):
            raise FieldError(f"beta = {self.beta} is not an S-integer")

    @classmethod
    def make(cls, alpha, beta, ctx: CompletionContext) -> Agl1Element:
        return cls(ctx.rational(alpha), ctx.rational(beta), ctx)

    @property
    def key(self):
        return (self.alpha, self.beta)

    def __mul__(self, other: Agl1Element) -> Agl1Element:
        # x -> a(a'x + b') + b
        return Agl1Element(self.alpha * other.alpha, self.alpha * other.beta + self.beta, self.ctx)

    def inverse(self) -> Agl1Element:
        ai = self.alpha.inverse()
        return Agl1Element(ai, -(ai * self.beta), self.ctx)

    def __invert__(self):
        return self.inverse()

    def __pow__(self, n: int) -> Agl1Element:
        g = self if n >= 0 else self.inverse()
        out = identity(self.ctx)
        for _ in range(abs(n)):
            out = out * g
        return out

    def is_identity(self) -> bool:
        return self.alpha.is_one() and self.beta.is_zero()

    def __str__(self):
        return f"({format_rational(self.alpha)}; {format_rational(self.beta)})"


def identity(ctx: CompletionContext) -> Agl1Element:
    return Agl1Element.make(1, 0, ctx)


@dataclass(frozen=True)
class TreeVertex:
    """The vertex ``gamma mod m^e`` given by the first e digits of gamma."""

    gamma_prefix: tuple

    @property
    def e(self) -> int:
        return len(self.gamma_prefix)

    @classmethod
    def of(cls, digits) -> TreeVertex:
        return cls(tuple(int(x) for x in digits))

    def word(self) -> tuple:
        return tuple(r + 1 for r in self.gamma_prefix)


def _digits_as_rational(digits, ctx: CompletionContext) -> RationalFunction:
    acc = RationalFunction.const(0, ctx.p)
    for c in reversed(digits):
        acc = acc * ctx.pi + c
    return acc


def act_affine(g: Agl1Element, gamma: EpSeries) -> EpSeries:
    if gamma.offset < 0 and not gamma.is_zero():
        raise FieldError("gamma must lie in O")
    return expand(g.alpha, g.ctx) * gamma + expand(g.beta, g.ctx)


def act_on_digits(g: Agl1Element, digits) -> tuple:
    """The first len(digits) digits of alpha*gamma + beta, gamma the finite series with these digits."""
    gamma = EpSeries.from_digits(g.ctx.p, digits)
    return tuple(act_affine(g, gamma).digits(0, len(digits)))


def _child(alpha, beta, r: int, ctx: CompletionContext):
    x = alpha * r + beta
    c = residue(x, ctx.s)
    return c, (x - c) / ctx.pi


def state_of(g: Agl1Element, v: TreeVertex) -> Agl1Element:
    ctx = g.ctx
    beta = g.beta
    for r in v.gamma_prefix:
        _, beta = _child(g.alpha, beta, r, ctx)
    return Agl1Element(g.alpha, beta, ctx)


def delta(g: Agl1Element, v: TreeVertex) -> RationalFunction:
    """``pi^-e (alpha*gamma + beta - [alpha*gamma + beta]^e)`` straight from the definition."""
    ctx = g.ctx
    gamma = _digits_as_rational(v.gamma_prefix, ctx)
    x = g.alpha * gamma + g.beta
    head = expand(x, ctx).digits(0, v.e)
    return (x - _digits_as_rational(head, ctx)) / ctx.pi ** v.e


def root_permutation(g: Agl1Element) -> tuple:
    """1-based images of the letters under ``r -> alpha_0 r + beta_0``."""
    ctx = g.ctx
    a0 = residue(g.alpha, ctx.s)
    b0 = residue(g.beta, ctx.s)
    return tuple((a0 * r + b0) % ctx.p + 1 for r in range(ctx.p))


def compile(gens, max_states: int = 10_000, names=None) -> Automaton:
    """Finite automaton for the action of the given elements (and their inverses) on the tree.

    States are keyed by the reduced pair (alpha, beta); ``aut.payload`` maps
    each state index to its :class:`Agl1Element` and ``aut.context`` holds
    the completion context.
    """
    gens = list(gens)
    if not gens:
        raise FieldError("no generators")
    ctx = gens[0].ctx
    for g in gens:
        if g.ctx != ctx:
            raise WrongContext("generators use different contexts")
    p = ctx.p
    aut = Automaton(p)
    roots = gens + [g.inverse() for g in gens]
    ident = (RationalFunction.const(1, p), RationalFunction.const(0, p))
    base = len(aut)
    pid: dict[tuple, int] = {ident: 0}
    order: list[tuple] = []

    def node(key):
        if key not in pid:
            if len(order) + 1 > max_states:
                raise BudgetExceeded(f"more than {max_states} states")
            pid[key] = base + len(order)
            order.append(key)
        return pid[key]

    for g in roots:
        node(g.key)
    perms, kids = [], []
    i = 0
    while i < len(order):
        alpha, beta = order[i]
        perm, ch = [], []
        for r in range(p):
            c, b = _child(alpha, beta, r, ctx)
            perm.append(c)
            ch.append(node((alpha, b)))
        perms.append(tuple(perm))
        kids.append(tuple(ch))
        i += 1
    final = aut.commit(perms, kids)
    for key, idx in zip(order, final):
        aut.payload[idx] = Agl1Element(key[0], key[1], ctx)
    aut.payload[0] = identity(ctx)
    aut.context = ctx
    if names:
        for g, name in zip(gens, names):
            aut.set_name(final[order.index(g.key)], name)
    return aut


def element_in(aut: Automaton, g: Agl1Element) -> Element:
    """The automaton element for g, which must be a state of the compiled automaton."""
    for idx, h in aut.payload.items():
        if h.key == g.key:
            return Element(aut, idx)
    raise KeyError(f"{g} is not a state of this automaton")


def decode(x: Element) -> Agl1Element:
    """Recover (alpha, beta) from the boundary action: beta = x(0...), alpha = x(10...) - beta."""
    ctx = x.aut.context
    if ctx is None:
        raise WrongContext("automaton was not compiled from an affine group")
    p = ctx.p

    def image(pre):
        out_pre, out_per = act_periodic(x, pre, (1,))
        return to_rational(EpSeries(p, 0, [y - 1 for y in out_pre], [y - 1 for y in out_per]), ctx)

    beta = image(())
    alpha = image((2,)) - beta
    return Agl1Element(alpha, beta, ctx)


# -- the three characters of the p = 2 example ----------------------------------

def example_context() -> CompletionContext:
    p = 2
    t = Poly.t(p)
    S = PlaceSet([Place.infinity(), Place(t), Place(Poly((1, 1, 1), p))])
    return CompletionContext(p, Place(Poly((1, 1), p)), S, parse_rational("1+t", p))


def example_generators(ctx: CompletionContext | None = None) -> dict[str, Agl1Element]:
    ctx = ctx or example_context()
    return {
        "a": Agl1Element.make(1, 1, ctx),
        "b": Agl1Element.make("t", 0, ctx),
        "c": Agl1Element.make("1+t+t^2", 0, ctx),
    }


def _exponents(g: Agl1Element) -> tuple[int, int]:
    if g.ctx != example_context():
        raise WrongContext("characters are defined only for the p = 2 example context")
    _, exps = unit_factorization(g.alpha, g.ctx.S)
    return exps[Place(Poly.t(2))], exps[Place(Poly((1, 1, 1), 2))]


def chi(g: Agl1Element) -> int:
    m, n = _exponents(g)
    return (m + n + 2 * residue(g.beta, g.ctx.s)) % 4


def chi_b(g: Agl1Element) -> int:
    return _exponents(g)[0] % 2


def chi_c(g: Agl1Element) -> int:
    return _exponents(g)[1] % 2


def parse_element(text: str, ctx: CompletionContext) -> Agl1Element:
    """Parse ``(alpha; beta)``."""
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")) or body.count(";") != 1:
        raise ParseError(f"expected '(alpha; beta)', got {text!r}")
    a, b = body[1:-1].split(";")
    return Agl1Element(parse_rational(a, ctx.p), parse_rational(b, ctx.p), ctx)

