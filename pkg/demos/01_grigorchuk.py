# # The Grigorchuk group as an automaton
#
# Four states on the binary tree, each given by a root permutation and two
# children. We load the recursions, act on a few words, and then move the
# group onto the ternary tree so that every state becomes its own last child.

from selfsim import mealy
from selfsim.fixtures import GRIGORCHUK, grigorchuk

G = grigorchuk()
print(GRIGORCHUK)

# ## Acting on words
#
# `a` swaps the first letter and stops; `b` leaves the first letter alone
# and hands the rest of the word to one of its children.

a, b, c, d = (G[x] for x in "abcd")
for g, w in [(a, (1, 2, 2)), (b, (1, 1, 1, 1)), (b, (2, 2, 1, 1))]:
    print(g.name, w, "->", mealy.act(g, w))

# The table never holds two copies of one automorphism, so products come out
# already identified with existing states.

print("b*c is d:", (b * c) == d)
print("a^2 trivial:", mealy.is_identity(a * a))
print("order of a*b:", mealy.has_finite_order_upto(a * b, 32))

# ## Torsion makes the group coarsely diagonal
#
# Every state differs from each of its children by an element of finite order.

print("coarsely diagonal (bound 32):", mealy.is_coarsely_diagonal_upto(grigorchuk(), 32))

# ## Persistence
#
# On two letters no state is its own child. Adding a third letter on which
# each state recurses to itself fixes that without changing the action on
# the old words.

print("persistent on T2:", mealy.is_persistent_group(G))
G3 = mealy.persist_extend(grigorchuk())
print(mealy.format_automaton(G3, [G3[x] for x in "abcd"]))
print("persistent letter:", mealy.is_persistent_group(G3))

# Conjugating by the transposition (1 3) moves the persistent letter to the front.

C = mealy.conjugate_by_transposition(G3, 1, 3)
print(mealy.format_automaton(C, [C[x] for x in "abcd"]))
print("persistent letter after conjugation:", mealy.is_persistent_group(C))
