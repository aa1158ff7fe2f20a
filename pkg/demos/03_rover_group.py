# # Almost-automorphisms: the group V_3(G)
#
# An element is a pair of complete ternary trees, a bijection of their
# leaves and a state of G under each leaf. We use the ternary Grigorchuk
# group, which is 3-persistent, so the last state is a well defined
# "retraction" back to G.

from selfsim import mealy, rover
from selfsim.fixtures import example_automaton_t3, grigorchuk_t3

G = grigorchuk_t3()
a, b, c, d = (G[x] for x in "abcd")

gens = rover.generators([a, b, c, d])
print(len(gens), "generators:", ", ".join(gens))

# ## Products and expansions
#
# Expanding a leaf replaces its state by the state's children; the element
# does not change.

x = rover.multiply(gens["x0"], rover.multiply(gens["iota1(b)"], gens["q(2 3)"]))
x = rover.multiply(x, rover.iota((3, 3), c))
print(rover.format_element(x))
y = rover.expand_leaf(rover.expand_leaf(x, 2), 1)
print(rover.format_element(y))
print("same element:", rover.equals(x, y))

w = (1, 2, 3, 3, 1, 2, 2, 1)
print(w, "->", rover.act_long_word(x, w))

# ## The retraction
#
# r keeps the last state. It ignores expansions, inverts iota at the root,
# and moves by at most one generator of G when x is multiplied by a generator.

print("r(x) =", rover.quasi_retract(x).name, " r(y) =", rover.quasi_retract(y).name)
print("r(iota(b)) =", rover.quasi_retract(rover.iota((), b)).name)
for name in ["x0", "x1", "c(2 3)", "iota1(b)"]:
    h = rover.lipschitz_probe(x, gens[name])
    print(f"r({name} x) = {h.name} r(x)")

# ## The abelianization for the affine example
#
# For the ternary copy of the affine group the images of iota_1 of the
# generators are (2,0,0), (1,1,0), (1,0,1).

E = example_automaton_t3()
for name in "abc":
    print(name, rover.abelianization_image(rover.iota((1,), E[name])))
z = rover.multiply(rover.iota((2,), E["b"]), rover.iota((1, 3), E["c"]))
print("b then c in other cones:", rover.abelianization_image(z))
