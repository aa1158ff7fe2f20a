"""The simplicial complexes X_k for a finite self-similar group G.

A vertex of X_k is a class of elementary morphisms C_{k-(d-1)} <- C_k
that merge d of the k roots under one caret. Up to invertible morphisms
on the left, such a morphism is recorded by its support tuple (which
root feeds letter m of the caret) and its decoration (the element of G
applied to that root first). An element h of G acting on the caret
moves position m to rho(h)(m) and multiplies the decoration there by the
state h_m on the left; a vertex is an orbit of this action, stored by
its least representative. Vertices span a simplex iff their supports
are pairwise disjoint, so X_k is the clique complex of that graph.

:func:`morphism_cross_check` rebuilds the simplices from the morphisms
themselves, as a check on this model.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations, permutations, product

from . import mealy
from .mealy import Automaton, BudgetExceeded


@dataclass(frozen=True, order=True)
class VertexClass:
    support_tuple: tuple
    decoration: tuple

    @property
    def support(self) -> frozenset:
        return frozenset(self.support_tuple)


def group_elements(aut: Automaton, max_order: int = 1000) -> list[int]:
    """Indices of all elements of the (finite) group generated by the automaton's states."""
    gens = list(range(1, len(aut)))
    gens += [aut.inv(g) for g in gens]
    gens = sorted(set(gens))
    seen = {0}
    order = [0]
    todo = deque([0])
    while todo:
        x = todo.popleft()
        for g in gens:
            y = aut.mul(g, x)
            if y not in seen:
                seen.add(y)
                order.append(y)
                if len(order) > max_order:
                    raise BudgetExceeded(f"group has more than {max_order} elements")
                todo.append(y)
    return sorted(order)


class FlagComplex:
    """X_k for the group generated by ``aut`` (trivial group when ``aut`` is None)."""

    def __init__(self, k: int, d: int, aut: Automaton | None = None, max_order: int = 1000):
        if k <= d:
            raise ValueError("need k > d")
        if aut is None:
            aut = Automaton(d)
        if aut.d != d:
            raise mealy.AlphabetMismatch(f"group acts on {aut.d} letters, not {d}")
        self.k = k
        self.d = d
        self.aut = aut
        self.group = group_elements(aut, max_order)
        self.vertices = enumerate_vertices(k, d, aut, self.group)
        self.index = {v: i for i, v in enumerate(self.vertices)}

    def canonical(self, support_tuple, decoration) -> VertexClass:
        return canonical_vertex(self.aut, self.group, support_tuple, decoration)

    def neighbours(self, i: int) -> list[int]:
        s = self.vertices[i].support
        return [j for j, v in enumerate(self.vertices) if not (s & v.support)]

    def edge_count(self) -> int:
        by_support: dict[frozenset, int] = {}
        for v in self.vertices:
            by_support[v.support] = by_support.get(v.support, 0) + 1
        total = 0
        items = list(by_support.items())
        for (s, a), (t, b) in combinations(items, 2):
            if not (s & t):
                total += a * b
        return total

    def cliques(self, n: int) -> set[frozenset]:
        """All n-element sets of pairwise adjacent vertices."""
        out = set()
        verts = self.vertices

        def grow(chosen, used, start):
            if len(chosen) == n:
                out.add(frozenset(chosen))
                return
            for j in range(start, len(verts)):
                if not (verts[j].support & used):
                    grow(chosen + [verts[j]], used | verts[j].support, j + 1)

        grow([], frozenset(), 0)
        return out

    def components(self) -> int:
        """Number of connected components.

        Vertices with equal support have the same neighbours, so this is a
        search over supports; a support with no disjoint partner leaves each
        of its vertices isolated.
        """
        count: dict[frozenset, int] = {}
        for v in self.vertices:
            count[v.support] = count.get(v.support, 0) + 1
        supports = list(count)
        seen = set()
        total = 0
        for s in supports:
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            todo = deque([s])
            while todo:
                u = todo.popleft()
                for t in supports:
                    if t not in seen and not (u & t):
                        seen.add(t)
                        comp.append(t)
                        todo.append(t)
            total += count[s] if len(comp) == 1 else 1
        return total

    def ground_simplex(self) -> list[VertexClass]:
        d = self.d
        return [self.canonical(tuple(range(i * d + 1, i * d + d + 1)), (0,) * d)
                for i in range(self.k // d)]


def act_on_vertex(aut: Automaton, h: int, support_tuple, decoration):
    rho = aut.perm(h)
    kids = aut.children(h)
    d = aut.d
    sup = [0] * d
    dec = [0] * d
    for m in range(d):
        sup[rho[m]] = support_tuple[m]
        dec[rho[m]] = aut.mul(kids[m], decoration[m])
    return tuple(sup), tuple(dec)


def canonical_vertex(aut: Automaton, group, support_tuple, decoration) -> VertexClass:
    best = None
    for h in group:
        cand = act_on_vertex(aut, h, support_tuple, decoration)
        if best is None or cand < best:
            best = cand
    return VertexClass(*best)


def enumerate_vertices(k: int, d: int, aut: Automaton | None = None, group=None) -> list[VertexClass]:
    if aut is None:
        aut = Automaton(d)
    if group is None:
        group = group_elements(aut)
    out = set()
    for sup in permutations(range(1, k + 1), d):
        for dec in product(group, repeat=d):
            out.add(canonical_vertex(aut, group, sup, dec))
    return sorted(out)


def adjacent(u: VertexClass, v: VertexClass) -> bool:
    return not (u.support & v.support)


def grounding(X: FlagComplex) -> dict:
    ground = X.ground_simplex()
    pairwise = all(adjacent(u, v) for u, v in combinations(ground, 2))
    worst = max(sum(1 for g in ground if not adjacent(v, g)) for v in X.vertices)
    return {
        "dimension": len(ground) - 1,
        "predicted_dimension": X.k // X.d - 1,
        "is_simplex": pairwise,
        "max_non_adjacent": worst,
        "is_ground": pairwise and worst <= X.d,
    }


def predicted_connectivity(k: int, d: int) -> int:
    return (k - d) // (d * d) - 1


def connectivity_report(X: FlagComplex) -> dict:
    comps = X.components()
    pred = predicted_connectivity(X.k, X.d)
    return {
        "components": comps,
        "predicted_connectivity": pred,
        "consistent": comps == 1 if pred >= 0 else True,
    }


def report(X: FlagComplex) -> dict:
    g = grounding(X)
    c = connectivity_report(X)
    return {
        "k": X.k,
        "d": X.d,
        "group_order": len(X.group),
        "vertices": len(X.vertices),
        "edges": X.edge_count(),
        "ground_simplex_found": g["is_ground"],
        "ground_dimension": g["dimension"],
        "max_non_adjacent": g["max_non_adjacent"],
        "components": c["components"],
        "predicted_connectivity": c["predicted_connectivity"],
        "ok": g["is_ground"] and c["consistent"],
    }


def falling_factorial(k: int, d: int) -> int:
    return math.perm(k, d)


# -- direct enumeration of morphism classes ------------------------------------------

def _morphisms(k: int, d: int, n: int, group):
    """All h in E(C_m, C_k) with n carets, m = k - n(d-1).

    A morphism is a k-tuple: root j goes to (target root, letter or 0, g_j).
    """
    m = k - n * (d - 1)
    for carets in combinations(range(m), n):
        slots = []
        for r in range(m):
            if r in carets:
                slots.extend((r, x) for x in range(1, d + 1))
            else:
                slots.append((r, 0))
        for arrangement in permutations(slots):
            for decs in product(group, repeat=k):
                yield tuple((r, x, g) for (r, x), g in zip(arrangement, decs))


def _left_moves(aut: Automaton, group, m: int):
    """Generators of S_m wr G acting on morphisms from the left."""
    gens = [g for g in group if g != 0]

    def swap(a, b):
        def f(h):
            out = []
            for r, x, g in h:
                r2 = b if r == a else a if r == b else r
                out.append((r2, x, g))
            return tuple(out)
        return f

    def at_root(root, g):
        rho = aut.perm(g)
        kids = aut.children(g)

        def f(h):
            out = []
            for r, x, s in h:
                if r != root:
                    out.append((r, x, s))
                elif x == 0:
                    out.append((r, 0, aut.mul(g, s)))
                else:
                    out.append((r, rho[x - 1] + 1, aut.mul(kids[x - 1], s)))
            return tuple(out)
        return f

    moves = [swap(a, a + 1) for a in range(m - 1)]
    moves += [at_root(r, g) for r in range(m) for g in gens]
    return moves


def morphism_classes(k: int, d: int, n: int, aut: Automaton, group) -> list[frozenset]:
    """Orbits of E(C_m, C_k) under left multiplication by invertibles."""
    m = k - n * (d - 1)
    moves = _left_moves(aut, group, m)
    seen = set()
    classes = []
    for h in _morphisms(k, d, n, group):
        if h in seen:
            continue
        orbit = {h}
        todo = [h]
        while todo:
            x = todo.pop()
            for mv in moves:
                y = mv(x)
                if y not in orbit:
                    orbit.add(y)
                    todo.append(y)
        seen |= orbit
        classes.append(frozenset(orbit))
    return classes


def _vertices_of_morphism(X: FlagComplex, h) -> frozenset:
    d = X.d
    carets: dict[int, list] = {}
    for j, (r, x, g) in enumerate(h, start=1):
        if x:
            carets.setdefault(r, [None] * d)[x - 1] = (j, g)
    out = []
    for slots in carets.values():
        sup = tuple(j for j, _ in slots)
        dec = tuple(g for _, g in slots)
        out.append(X.canonical(sup, dec))
    return frozenset(out)


def morphism_cross_check(X: FlagComplex, n: int) -> dict:
    """Compare (n-1)-simplices of X with classes of morphisms E(C_{k-n(d-1)}, C_k)."""
    classes = morphism_classes(X.k, X.d, n, X.aut, X.group)
    images = []
    well_defined = True
    for orbit in classes:
        imgs = {_vertices_of_morphism(X, h) for h in orbit}
        if len(imgs) != 1:
            well_defined = False
        images.append(next(iter(imgs)))
    cliques = X.cliques(n)
    injective = len(set(images)) == len(images)
    onto = set(images) == cliques
    return {
        "n": n,
        "classes": len(classes),
        "cliques": len(cliques),
        "well_defined": well_defined,
        "injective": injective,
        "surjective": onto,
        "ok": well_defined and injective and onto,
    }
