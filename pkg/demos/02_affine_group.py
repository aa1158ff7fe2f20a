# # An affine group over F_2(t) acting on a binary tree
#
# Complete F_2(t) at the place t = 1, with uniformizer pi = 1 + t. Elements of
# the ring O_S = F_2[t, 1/t, 1/(1+t+t^2)] have eventually periodic expansions
# in pi, and the affine maps x -> alpha*x + beta with alpha a unit act on the
# digit sequences. That action is finite state.

from selfsim import agl, mealy, series
from selfsim.ff_poly import parse_rational
from selfsim.fixtures import word_in

ctx = agl.example_context()
print(ctx)

# ## Expansions
#
# t = 1 + pi has digits 1 1 0 0 ...; its inverse is periodic.

for text in ["t", "1/t", "1/(1+t+t^2)", "t^3/(1+t)"]:
    f = parse_rational(text, 2)
    a = series.expand(f, ctx)
    print(f"{text:>12}  {series.format_series(a)}")
    assert series.to_rational(a, ctx) == f

# ## Compiling the generators
#
# a = (1; 1) adds one, b and c multiply by t and by 1 + t + t^2.

gens = agl.example_generators(ctx)
aut = agl.compile(list(gens.values()), names=list(gens))
for name, expr in [("ab", "a*b"), ("bab'c", "b*a*b^-1*c"), ("ac", "a*c"), ("a'bab'c", "a^-1*b*a*b^-1*c")]:
    aut.set_name(word_in(aut, expr).idx, name)
print(mealy.format_automaton(aut, [aut[x] for x in "abc"]))

# Reading off the children: b = (b, ab) and c = (c, b a b^-1 c).

b, c = aut["b"], aut["c"]
print("b_2 == a*b:", b.child(2) == word_in(aut, "a*b"))
print("c_2 == b*a*b^-1*c:", c.child(2) == word_in(aut, "b*a*b^-1*c"))
for x in "abc":
    print(x, "has", len(mealy.states_of(aut[x])), "states")

# ## The automaton agrees with the arithmetic
#
# Feed the digits of gamma to the automaton and compare with alpha*gamma + beta.

w = (1, 0, 1, 1, 0, 0, 1)
g = gens["c"]
print("affine   ", agl.act_on_digits(g, w))
print("automaton", tuple(x - 1 for x in mealy.act(c, [r + 1 for r in w])))

# ## Characters
#
# Writing alpha = t^m (1+t+t^2)^n, the maps to Z/4, Z/2, Z/2 are
# m + n + 2 beta(1), m and n.

for x, h in gens.items():
    print(x, agl.chi(h), agl.chi_b(h), agl.chi_c(h))
