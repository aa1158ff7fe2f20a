"""Named groups used by the demos, the command line suite and the tests."""

from __future__ import annotations

from . import agl, mealy
from .ff_poly import Place, PlaceSet, Poly, parse_rational
from .series import CompletionContext

GRIGORCHUK = """\
a = (1 2)(e, e)
b = (a, c)
c = (a, d)
d = (e, b)
"""

# the same group made 3-persistent, as printed in the literature
GRIGORCHUK_T3 = """\
a = (1 2)(e, e, a)
b = (a, c, b)
c = (a, d, c)
d = (e, b, d)
"""

ORDER_TWO = "a = (1 2)(e, e)\n"
ORDER_TWO_T3 = "a = (1 2)(e, e, e)\n"

# the recursions of the p = 2 example (residue r is letter r+1)
EXAMPLE_RECURSIONS = {
    "a": ((1, 0), ("e", "e")),
    "b": ((0, 1), ("b", "a*b")),
    "c": ((0, 1), ("c", "b*a*b^-1*c")),
}
EXAMPLE_STATE_SETS = {
    "a": ["e", "a"],
    "b": ["b", "a*b"],
    "c": ["c", "b*a*b^-1*c", "a*c", "a^-1*b*a*b^-1*c"],
}


def grigorchuk() -> mealy.Automaton:
    return mealy.parse_automaton(GRIGORCHUK)


def grigorchuk_t3() -> mealy.Automaton:
    return mealy.persist_extend(grigorchuk())


def order_two(d: int = 2) -> mealy.Automaton:
    return mealy.parse_automaton(ORDER_TWO if d == 2 else "a = (1 2)(" + ", ".join(["e"] * d) + ")")


def example_context() -> CompletionContext:
    return agl.example_context()


def example_generators() -> dict[str, agl.Agl1Element]:
    return agl.example_generators()


def example_automaton() -> mealy.Automaton:
    gens = example_generators()
    return agl.compile(list(gens.values()), names=list(gens))


def example_automaton_t3() -> mealy.Automaton:
    return mealy.persist_extend(example_automaton())


def ternary_context() -> CompletionContext:
    """p = 3, S = {inf, t, t+1}, completed at t = 1 with pi = t - 1."""
    p = 3
    S = PlaceSet([Place.infinity(), Place(Poly.t(p)), Place(Poly((1, 1), p))])
    return CompletionContext(p, Place(Poly((2, 1), p)), S, parse_rational("t+2", p))


def ternary_generators() -> dict[str, agl.Agl1Element]:
    ctx = ternary_context()
    return {
        "a": agl.Agl1Element.make(1, 1, ctx),
        "b": agl.Agl1Element.make("t", 0, ctx),
        "c": agl.Agl1Element.make("t+1", 0, ctx),
        "m": agl.Agl1Element.make(2, 0, ctx),
    }


def ternary_automaton() -> mealy.Automaton:
    gens = ternary_generators()
    return agl.compile(list(gens.values()), names=list(gens))


def word_in(aut: mealy.Automaton, expr: str) -> mealy.Element:
    """Evaluate a product like ``b*a*b^-1*c`` of state names."""
    out = aut.identity
    for factor in expr.replace(" ", "").split("*"):
        name, _, power = factor.partition("^")
        g = aut[name]
        out = out * (g ** int(power) if power else g)
    return out
