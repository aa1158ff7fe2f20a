# # The complexes X_k
#
# Vertices are ways of merging d of the k roots under one caret, up to the
# invertible morphisms; they span a simplex when their supports are disjoint.

from selfsim import flagcomplex
from selfsim.fixtures import order_two

# ## Trivial group
#
# There are k!/(k-d)! vertices, a ground simplex of dimension floor(k/d) - 1,
# and the complex is connected as soon as the connectivity bound is 0.

print(" d  k  vertices  edges  comps  predicted")
for d, k in [(2, 3), (2, 4), (2, 6), (2, 8), (3, 6), (3, 12)]:
    r = flagcomplex.report(flagcomplex.FlagComplex(k, d))
    print(f"{d:2} {k:2} {r['vertices']:9} {r['edges']:6} {r['components']:6} {r['predicted_connectivity']:10}")

# ## A group of order two
#
# Now the decorations matter: a caret carries a pair of group elements, up to
# the action of the group on the caret.

X = flagcomplex.FlagComplex(4, 2, order_two())
print(len(X.vertices), "vertices for k = 4")
for v in X.vertices[:6]:
    print("  ", v.support_tuple, v.decoration)

# ## Checking the model
#
# Simplices built as cliques should be exactly the classes of morphisms with
# n carets, enumerated by brute force.

for n in (1, 2):
    print(flagcomplex.morphism_cross_check(X, n))
