import itertools

import pytest
from hypothesis import given, strategies as st

from selfsim.ff_poly import (
    INF, NotAUnit, ParseError, Place, PlaceSet, Poly, RationalFunction, ZeroInput,
    factor, format_rational, irreducibles, is_irreducible, is_s_integer, parse_rational,
    poles_and_zeros, unit_factorization, valuation,
)

P2 = 2
T2 = Poly.t(P2)
Q = Poly((1, 1, 1), P2)  # 1+t+t^2
S72 = PlaceSet([Place.infinity(), Place(T2), Place(Q)])


def rf(text, p=2):
    return parse_rational(text, p)


def polys(p, max_deg=6, nonzero=False):
    coeffs = st.lists(st.integers(0, p - 1), min_size=1, max_size=max_deg + 1)
    s = coeffs.map(lambda c: Poly(c, p))
    return s.filter(lambda f: not f.is_zero()) if nonzero else s


def rationals(p, max_deg=5, nonzero=False):
    s = st.builds(RationalFunction, polys(p, max_deg, nonzero), polys(p, max_deg, nonzero=True))
    return s


# oracle: brute-force trial division by every monic polynomial
def trial_factor(f: Poly):
    p = f.p
    out = {}
    f = f.monic()
    deg = 1
    while f.deg >= 2 * deg:
        for tail in itertools.product(range(p), repeat=deg):
            q = Poly(list(tail) + [1], p)
            while True:
                quo, rem = f.divmod(q)
                if not rem.is_zero():
                    break
                out[q] = out.get(q, 0) + 1
                f = quo
        deg += 1
    if f.deg >= 1:
        out[f] = out.get(f, 0) + 1
    return out


def mobius(n):
    res, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            res = -res
        k += 1
    return -res if n > 1 else res


class TestPoly:
    def test_basic_arithmetic(self):
        f = Poly((1, 1), 2)
        assert f * f == Poly((1, 0, 1), 2)
        assert (f + f).is_zero()
        assert str(Q) == "1+t+t^2"

    def test_divmod(self):
        a = Poly((1, 2, 0, 1), 3)
        b = Poly((2, 1), 3)
        q, r = a.divmod(b)
        assert q * b + r == a and r.deg < b.deg

    @pytest.mark.parametrize("p", [2, 3, 5])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_irreducible_counts(self, p, n):
        want = sum(mobius(n // d) * p ** d for d in range(1, n + 1) if n % d == 0) // n
        assert len(list(irreducibles(p, n))) == want

    @given(polys(2, 10, nonzero=True))
    def test_factor_matches_trial_division_p2(self, f):
        if f.deg < 1:
            return
        lc, fs = factor(f)
        assert dict(fs) == trial_factor(f)

    @given(polys(3, 8, nonzero=True))
    def test_factor_reassembles_p3(self, f):
        lc, fs = factor(f)
        prod = Poly.const(lc, 3)
        for q, m in fs:
            assert is_irreducible(q) and q.lc == 1
            prod = prod * q ** m
        assert prod == f

    def test_zero_cannot_factor(self):
        with pytest.raises(ZeroInput):
            factor(Poly((), 2))


class TestRational:
    def test_normal_form(self):
        f = RationalFunction(Poly((0, 1, 1), 2), Poly((0, 1), 2))
        assert f.den.is_one() and f.num == Poly((1, 1), 2)

    def test_parse(self):
        assert rf("(1+t+t^2)^-1 * t") == RationalFunction(T2, Q)
        assert rf("2t - 1", 3) == RationalFunction(Poly((2, 2), 3))
        assert rf("t(t+1)") == RationalFunction(Poly((0, 1, 1), 2))
        with pytest.raises(ParseError):
            rf("t + ")
        with pytest.raises(ParseError):
            rf("1/0")

    @given(rationals(3))
    def test_format_parse_round_trip(self, f):
        assert parse_rational(format_rational(f), 3) == f

    @given(rationals(3), rationals(3), rationals(3))
    def test_field_axioms(self, a, b, c):
        assert (a + b) * c == a * c + b * c
        assert a * (b * c) == (a * b) * c
        if not a.is_zero():
            assert a * a.inverse() == RationalFunction.const(1, 3)


class TestValuation:
    def test_examples(self):
        assert valuation(rf("1/t"), Place.infinity()) == 1
        assert valuation(rf("1"), Place(Q)) == 0
        assert valuation(rf("t^2/(1+t+t^2)"), Place(Q)) == -1
        assert valuation(rf("0"), Place(T2)) == INF

    @given(rationals(2, nonzero=True), rationals(2, nonzero=True))
    def test_additive(self, f, g):
        for v in [Place.infinity(), Place(T2), Place(Q), Place(Poly((1, 1), 2))]:
            assert valuation(f * g, v) == valuation(f, v) + valuation(g, v)

    @given(rationals(3, nonzero=True))
    def test_sum_formula(self, f):
        total = valuation(f, Place.infinity())
        total += sum(v.degree * m for v, m in poles_and_zeros(f).items() if not v.is_infinite)
        assert total == 0

    @given(rationals(2, nonzero=True))
    def test_valuation_by_repeated_division(self, f):
        for q in (T2, Q):
            def mult(g):
                n = 0
                while not g.is_zero() and (g % q).is_zero():
                    g, n = g // q, n + 1
                return n
            assert valuation(f, Place(q)) == mult(f.num) - mult(f.den)


class TestSIntegers:
    def test_examples(self):
        assert is_s_integer(rf("t^-1"), S72)
        assert is_s_integer(rf("0"), S72)
        assert not is_s_integer(rf("1/(1+t)"), S72)
        assert not is_s_integer(rf("t"), PlaceSet([Place(T2)]))

    @given(rationals(2), rationals(2))
    def test_closed_under_ring_operations(self, f, g):
        if is_s_integer(f, S72) and is_s_integer(g, S72):
            assert is_s_integer(f + g, S72) and is_s_integer(f * g, S72)

    def test_unit_factorization_examples(self):
        assert unit_factorization(rf("t"), S72) == (1, {Place(T2): 1, Place(Q): 0})
        assert unit_factorization(rf("t^-1 (1+t+t^2)^2"), S72) == (1, {Place(T2): -1, Place(Q): 2})
        with pytest.raises(NotAUnit):
            unit_factorization(rf("1+t"), S72)
        with pytest.raises(ZeroInput):
            unit_factorization(rf("0"), S72)

    @given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
    def test_unit_exponents_add(self, a, b, c, d):
        t, q = RationalFunction(T2), RationalFunction(Q)
        f, g = t ** a * q ** b, t ** c * q ** d
        _, ef = unit_factorization(f, S72)
        _, eg = unit_factorization(g, S72)
        _, efg = unit_factorization(f * g, S72)
        assert efg == {v: ef[v] + eg[v] for v in ef}


def test_place_checks():
    with pytest.raises(Exception):
        Place(Poly((1, 0, 1), 2))  # (1+t)^2 is not irreducible
    assert Place(Q).degree == 2 and Place.infinity().degree == 1
