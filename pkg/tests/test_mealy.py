import itertools

import pytest
from hypothesis import given, strategies as st

from selfsim import mealy
from selfsim.ff_poly import ParseError
from selfsim.fixtures import (
    EXAMPLE_STATE_SETS, GRIGORCHUK, GRIGORCHUK_T3, example_automaton, grigorchuk,
    grigorchuk_t3, word_in,
)
from selfsim.mealy import (
    Automaton, act, conjugate_by_transposition, distinguishing_word, equals,
    format_automaton, has_finite_order_upto, inverse, is_coarsely_diagonal_upto,
    is_i_persistent, is_identity, is_persistent_group, parse_automaton, persist_extend,
    product, state_at, state_closure, states_of, words,
)

# independent interpreter for the Grigorchuk recursions: name -> (images of 1,2; children)
GRIG = {
    "e": ((1, 2), ("e", "e")),
    "a": ((2, 1), ("e", "e")),
    "b": ((1, 2), ("a", "c")),
    "c": ((1, 2), ("a", "d")),
    "d": ((1, 2), ("e", "b")),
}


def oracle_act(name, w):
    if not w:
        return ()
    perm, kids = GRIG[name]
    return (perm[w[0] - 1],) + oracle_act(kids[w[0] - 1], w[1:])


def all_words(d, n):
    for k in range(n + 1):
        yield from itertools.product(range(1, d + 1), repeat=k)


G = grigorchuk()
NAMES = "abcd"


class TestAction:
    def test_examples(self):
        assert act(G.identity, (1, 2, 1)) == (1, 2, 1)
        assert act(G["a"], (1, 2, 2)) == (2, 2, 2)
        assert act(G["b"], (1, 1, 1, 1)) == (1, 2, 1, 1)

    def test_matches_interpreter(self):
        for n in NAMES:
            for w in all_words(2, 7):
                assert act(G[n], w) == oracle_act(n, w)

    def test_state_at(self):
        b = G["b"]
        assert state_at(b, ()) == b
        assert state_at(b, (2,)) == G["c"]
        for n in NAMES:
            for u in all_words(2, 3):
                for v in all_words(2, 2):
                    assert state_at(G[n], u + v) == state_at(state_at(G[n], u), v)

    def test_bad_letter(self):
        with pytest.raises(mealy.MealyError):
            act(G["a"], (3,))


class TestGroupOperations:
    def test_examples(self):
        a, b, c, d = (G[n] for n in NAMES)
        assert product(G.identity, b) == b
        assert is_identity(product(a, a))
        assert inverse(a) == a and inverse(G.identity) == G.identity
        assert equals(product(b, c), d)
        assert not equals(a, b)
        assert distinguishing_word(a, b) == (1,)

    def test_example_level_one(self):
        aut = example_automaton()
        ba = word_in(aut, "b*a")
        # (ba)_x = b_{rho a(x)} a_x, read off the recursions
        assert ba.child(1) == word_in(aut, "a*b") and ba.child(2) == aut["b"]
        assert ba.perm == (2, 1)

    def test_homomorphism_and_cocycle(self):
        states = [G.identity] + [G[n] for n in NAMES]
        for f, g in itertools.product(states, repeat=2):
            fg = f * g
            for w in all_words(2, 6):
                assert act(fg, w) == act(f, act(g, w))
            for w in all_words(2, 4):
                assert state_at(fg, w) == product(state_at(f, act(g, w)), state_at(g, w))

    def test_level_bijection(self):
        for n in NAMES:
            for ell in range(7):
                ws = list(words(2, ell))
                assert sorted(act(G[n], w) for w in ws) == sorted(ws)

    @given(st.lists(st.sampled_from(NAMES), min_size=1, max_size=12),
           st.lists(st.integers(1, 2), max_size=10))
    def test_inverse_on_random_products(self, word, w):
        g = word_in(G, "*".join(word))
        assert act(inverse(g), act(g, tuple(w))) == tuple(w)
        assert is_identity(g * ~g) and is_identity(~g * g)

    @given(st.lists(st.sampled_from(NAMES), max_size=8), st.lists(st.sampled_from(NAMES), max_size=8))
    def test_equality_matches_action(self, u, v):
        f = word_in(G, "*".join(u)) if u else G.identity
        g = word_in(G, "*".join(v)) if v else G.identity
        same_action = all(act(f, w) == act(g, w) for w in all_words(2, 8))
        assert equals(f, g) == same_action
        if not equals(f, g):
            w = distinguishing_word(f, g)
            assert act(f, w) != act(g, w)


class TestClosure:
    def test_identity(self):
        aut = Automaton(3)
        assert len(state_closure([aut.identity])) == 1

    def test_grigorchuk(self):
        closed = state_closure([G[n] for n in NAMES])
        assert len(closed) == 5

    def test_example_state_sets(self):
        aut = example_automaton()
        for name, want in EXAMPLE_STATE_SETS.items():
            got = {s.idx for s in states_of(aut[name])}
            assert got == {word_in(aut, w).idx for w in want}


class TestPersistence:
    def test_examples(self):
        assert all(is_i_persistent(G.identity, i) for i in (1, 2))
        assert is_persistent_group(G) is None
        T3 = grigorchuk_t3()
        assert is_persistent_group(T3) == 3
        assert all(is_i_persistent(T3[n], 3) for n in NAMES)

    def test_extension_prints_as_expected(self):
        T3 = grigorchuk_t3()
        assert format_automaton(T3, [T3[n] for n in NAMES]) == GRIGORCHUK_T3.rstrip("\n")
        assert len(state_closure([T3[n] for n in NAMES])) == 5

    def test_extension_of_identity(self):
        ext = persist_extend(Automaton(2))
        assert ext.d == 3 and len(ext) == 1

    def test_faithful_on_old_words(self):
        T3 = grigorchuk_t3()
        for n in NAMES:
            for w in all_words(2, 6):
                assert act(T3[n], w) == act(G[n], w)

    def test_conjugation(self):
        T3 = grigorchuk_t3()
        C = conjugate_by_transposition(T3, 1, 3)
        assert is_persistent_group(C) == 1
        back = conjugate_by_transposition(C, 1, 3)
        assert format_automaton(back, [back[n] for n in NAMES]) == format_automaton(T3, [T3[n] for n in NAMES])
        same = conjugate_by_transposition(T3, 2, 2)
        assert format_automaton(same, [same[n] for n in NAMES]) == format_automaton(T3, [T3[n] for n in NAMES])


class TestOrders:
    def test_examples(self):
        assert has_finite_order_upto(G.identity, 3) == 1
        assert has_finite_order_upto(G["a"], 3) == 2
        assert has_finite_order_upto(example_automaton()["b"], 16) is None

    def test_coarse_diagonality(self):
        assert is_coarsely_diagonal_upto(Automaton(2), 1)
        assert is_coarsely_diagonal_upto(grigorchuk(), 32)
        assert is_coarsely_diagonal_upto(example_automaton(), 2)


class TestText:
    def test_round_trip(self):
        fresh = grigorchuk()
        assert format_automaton(fresh) == GRIGORCHUK.rstrip("\n")
        again = parse_automaton(format_automaton(fresh))
        for n in NAMES:
            for w in all_words(2, 5):
                assert act(again[n], w) == act(G[n], w)

    def test_rejects_bad_input(self):
        with pytest.raises(ParseError):
            parse_automaton("a = (1 2)(e, x)\n")
        with pytest.raises((ParseError, mealy.MealyError)):
            parse_automaton("a = (1 3)(e, e)\n")
