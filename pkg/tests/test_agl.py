import itertools

import pytest
from hypothesis import given, strategies as st

from selfsim import agl
from selfsim.agl import (
    Agl1Element, TreeVertex, WrongContext, act_affine, act_on_digits, chi, chi_b, chi_c,
    decode, delta, element_in, parse_element, root_permutation, state_of,
)
from selfsim.ff_poly import Poly, RationalFunction, is_s_integer, parse_rational, valuation
from selfsim.fixtures import (
    EXAMPLE_RECURSIONS, EXAMPLE_STATE_SETS, example_automaton, ternary_automaton,
    ternary_context, word_in,
)
from selfsim.mealy import BudgetExceeded, Element, act, is_identity, product, inverse, states_of
from selfsim.series import EpSeries, expand, shift, to_rational, truncate

EX = agl.example_context()
TER = ternary_context()
GENS = agl.example_generators()


def elements(ctx):
    """Random affine maps over O_S, built from the finite places of S."""
    p = ctx.p
    finite = [v.poly for v in ctx.S.finite]
    poly = st.lists(st.integers(0, p - 1), max_size=5).map(lambda c: Poly(c, p) if c else Poly((), p))

    @st.composite
    def build(draw):
        alpha = RationalFunction.const(draw(st.integers(1, p - 1)), p)
        den = RationalFunction.const(1, p)
        for q in finite:
            alpha = alpha * RationalFunction(q) ** draw(st.integers(-3, 3))
            den = den * RationalFunction(q) ** draw(st.integers(0, 2))
        beta = RationalFunction(draw(poly)) / den
        return Agl1Element(alpha, beta, ctx)
    return build()


def either():
    return st.sampled_from([EX, TER]).flatmap(lambda c: st.tuples(elements(c), st.lists(st.integers(0, c.p - 1), max_size=10)))


class TestAction:
    def test_examples(self):
        one = agl.identity(EX)
        gamma = expand("t", EX)
        assert act_affine(one, gamma) == gamma
        assert act_affine(GENS["a"], EpSeries.zero(2)) == EpSeries.one(2)

    @given(either())
    def test_digits_match_rational_arithmetic(self, gw):
        g, w = gw
        ctx = g.ctx
        gamma = sum((RationalFunction.const(c, ctx.p) * ctx.pi ** i for i, c in enumerate(w)),
                    RationalFunction.const(0, ctx.p))
        image = expand(g.alpha * gamma + g.beta, ctx)
        assert act_on_digits(g, w) == tuple(image.digits(0, len(w)))

    def test_root_permutation(self):
        assert root_permutation(agl.identity(EX)) == (1, 2)
        assert root_permutation(GENS["a"]) == (2, 1)
        g = Agl1Element.make(2, 0, TER)
        assert root_permutation(g) == (1, 3, 2)


class TestStates:
    def test_trivial(self):
        one = agl.identity(TER)
        assert state_of(one, TreeVertex.of([2, 1, 0])).is_identity()

    @given(st.lists(st.integers(0, 2), max_size=6), st.lists(st.integers(0, 2), min_size=1, max_size=6))
    def test_translation_state(self, v, bdigits):
        beta = sum((RationalFunction.const(c, 3) * TER.pi ** i for i, c in enumerate(bdigits)),
                   RationalFunction.const(0, 3))
        beta = beta / Poly.t(3)  # keep it a genuine series
        g = Agl1Element(RationalFunction.const(1, 3), beta, TER)
        st_ = state_of(g, TreeVertex.of(v))
        e = len(v)
        gamma_head = sum((RationalFunction.const(c, 3) * TER.pi ** i for i, c in enumerate(v)),
                         RationalFunction.const(0, 3))
        # for a translation the state is pi^-e [gamma + beta]_e, with gamma cut at e digits
        want = to_rational(shift(truncate(expand(gamma_head + beta, TER), e, None), e), TER)
        assert st_.alpha.is_one() and st_.beta == want

    @given(either())
    def test_state_matches_delta_definition(self, gw):
        g, w = gw
        v = TreeVertex.of(w)
        s = state_of(g, v)
        assert s.alpha == g.alpha
        gamma = agl._digits_as_rational(w, g.ctx)
        dl = delta(g, v)
        assert valuation(dl, g.ctx.s) >= 0
        # beta' = delta + alpha * (digits-free part) is exactly the state offset
        assert s.beta == dl

    @given(either())
    def test_states_are_affine_over_o_s(self, gw):
        g, w = gw
        s = state_of(g, TreeVertex.of(w))
        assert is_s_integer(s.beta, g.ctx.S)

    def test_example_recursion(self):
        b = GENS["b"]
        assert state_of(b, TreeVertex.of([1])) == GENS["a"] * b
        assert state_of(b, TreeVertex.of([0])) == b


class TestCompile:
    def test_identity(self):
        aut = agl.compile([agl.identity(EX)])
        assert len(aut) == 1

    def test_example_recursions(self):
        aut = example_automaton()
        for name, (perm, kids) in EXAMPLE_RECURSIONS.items():
            g = aut[name]
            assert g.perm == tuple(x + 1 for x in perm)
            assert list(g.children) == [word_in(aut, k) if k != "e" else aut.identity for k in kids]
        sizes = {n: len(states_of(aut[n])) for n in "abc"}
        assert sizes == {"a": 2, "b": 2, "c": 4}
        assert {n: len(v) for n, v in EXAMPLE_STATE_SETS.items()} == sizes

    @pytest.mark.parametrize("build", [example_automaton, ternary_automaton])
    def test_soundness_and_self_similarity(self, build):
        aut = build()
        p = aut.context.p
        for idx, g in list(aut.payload.items()):
            assert is_s_integer(g.beta, g.ctx.S)
            for n in range(0, 7):
                for w in itertools.product(range(p), repeat=n):
                    assert act(_el(aut, idx), tuple(x + 1 for x in w)) == \
                        tuple(x + 1 for x in act_on_digits(g, w))

    @pytest.mark.parametrize("build", [example_automaton, ternary_automaton])
    def test_coarse_diagonality(self, build):
        aut = build()
        p = aut.context.p
        for idx in list(aut.payload):
            g = _el(aut, idx)
            for gp in states_of(g):
                assert is_identity(product(inverse(gp), g) ** p)

    def test_decode(self):
        aut = ternary_automaton()
        for idx, g in list(aut.payload.items()):
            assert decode(_el(aut, idx)).key == g.key
            assert element_in(aut, g).idx == idx

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            agl.compile(list(GENS.values()), max_states=3)


def _el(aut, idx):
    return Element(aut, idx)


class TestCharacters:
    def test_table(self):
        a, b, c = GENS["a"], GENS["b"], GENS["c"]
        assert (chi(a), chi(b), chi(c)) == (2, 1, 1)
        assert (chi_b(a), chi_b(b), chi_b(c)) == (0, 1, 0)
        assert (chi_c(a), chi_c(b), chi_c(c)) == (0, 0, 1)
        assert chi(agl.identity(EX)) == 0

    @given(st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from([1, -1])), max_size=12))
    def test_homomorphism(self, word):
        g = agl.identity(EX)
        want = [0, 0, 0]
        for name, e in word:
            g = g * GENS[name] ** e
            want[0] += e * chi(GENS[name])
            want[1] += e * chi_b(GENS[name])
            want[2] += e * chi_c(GENS[name])
        assert (chi(g), chi_b(g), chi_c(g)) == (want[0] % 4, want[1] % 2, want[2] % 2)

    def test_wrong_context(self):
        with pytest.raises(WrongContext):
            chi(Agl1Element.make(1, 1, TER))


def test_parse_element():
    g = parse_element("(t; 1/(t+1))", TER)
    assert g.alpha == parse_rational("t", 3) and g.beta == parse_rational("1/(t+1)", 3)
    with pytest.raises(Exception):
        parse_element("(t+2; 0)", TER)  # not a unit of O_S
