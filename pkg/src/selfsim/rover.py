"""Röver-Nekrashevych groups V_d(G) as tree-pair triples.

A triple ``[T-, sigma(g_1, ..., g_n), T+]`` sends ``v_i w`` to
``u_sigma(i) g_i(w)``, where ``v_i`` and ``u_j`` are the leaves of the
domain tree T+ and the range tree T- in lexicographic order. Internally
sigma is 0-based; the text form is 1-based.

Equality goes through a common expansion of the domain trees, which is
always decisive. :func:`reduce` only shrinks triples cosmetically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import mealy
from .mealy import Automaton, Element, MealyError, act_periodic, canonical_periodic
from .ff_poly import ParseError


class RoverError(Exception):
    pass


class WordTooShort(RoverError):
    pass


class IndexOutOfRange(RoverError, IndexError):
    pass


class NotARefinement(RoverError):
    pass


class NotPersistent(RoverError):
    pass


class WrongContext(RoverError):
    pass


# -- complete trees ---------------------------------------------------------------

class CompleteTree:
    """Leaves of a finite complete rooted subtree of the d-ary tree, in lexicographic order."""

    __slots__ = ("d", "leaves")

    def __init__(self, d: int, leaves):
        leaves = tuple(sorted(tuple(w) for w in leaves))
        self.d = d
        self.leaves = leaves
        self._check()

    @classmethod
    def _trusted(cls, d: int, leaves: tuple) -> CompleteTree:
        obj = object.__new__(cls)
        obj.d = d
        obj.leaves = leaves
        return obj

    def _check(self):
        d = self.d
        if not self.leaves:
            raise RoverError("a tree has at least one leaf")
        for w in self.leaves:
            if any(not 1 <= x <= d for x in w):
                raise RoverError(f"letter outside 1..{d} in {w}")
        inner = self.internal()
        leafset = set(self.leaves)
        if len(leafset) != len(self.leaves) or leafset & inner:
            raise RoverError("leaves are not prefix-free")
        for u in inner:
            for x in range(1, d + 1):
                if u + (x,) not in inner and u + (x,) not in leafset:
                    raise RoverError(f"vertex {u} is missing child {x}")

    @classmethod
    def root(cls, d: int) -> CompleteTree:
        return cls._trusted(d, ((),))

    @classmethod
    def caret(cls, d: int) -> CompleteTree:
        return cls._trusted(d, tuple((x,) for x in range(1, d + 1)))

    @classmethod
    def from_internal(cls, d: int, internal) -> CompleteTree:
        internal = set(internal)
        if not internal:
            return cls.root(d)
        leaves = [u + (x,) for u in internal for x in range(1, d + 1) if u + (x,) not in internal]
        return cls(d, leaves)

    @classmethod
    def spine(cls, d: int, u) -> CompleteTree:
        """Smallest complete tree having u as a leaf."""
        u = tuple(u)
        return cls.from_internal(d, [u[:k] for k in range(len(u))])

    def internal(self) -> set:
        return {w[:k] for w in self.leaves for k in range(len(w))}

    def vertices(self) -> set:
        return self.internal() | set(self.leaves)

    def __len__(self):
        return len(self.leaves)

    @property
    def depth(self) -> int:
        return max(len(w) for w in self.leaves)

    def expand(self, i: int) -> CompleteTree:
        """Replace leaf i (0-based) by its d children; they take its place in the order."""
        v = self.leaves[i]
        kids = tuple(v + (x,) for x in range(1, self.d + 1))
        return CompleteTree._trusted(self.d, self.leaves[:i] + kids + self.leaves[i + 1:])

    def refines(self, other: CompleteTree) -> bool:
        """True if every leaf of ``other`` is a vertex of self."""
        verts = self.vertices()
        return all(w in verts for w in other.leaves)

    def union(self, other: CompleteTree) -> CompleteTree:
        return CompleteTree.from_internal(self.d, self.internal() | other.internal())

    def leaf_prefixing(self, word) -> int | None:
        for i, v in enumerate(self.leaves):
            if tuple(word[:len(v)]) == v:
                return i
        return None

    def __eq__(self, other):
        return isinstance(other, CompleteTree) and self.d == other.d and self.leaves == other.leaves

    def __hash__(self):
        return hash((self.d, self.leaves))

    def __repr__(self):
        return f"CompleteTree({format_tree(self)})"


# -- elements -----------------------------------------------------------------------

@dataclass(frozen=True)
class RoverElement:
    range_tree: CompleteTree
    domain_tree: CompleteTree
    sigma: tuple
    states: tuple

    def __post_init__(self):
        n = len(self.domain_tree)
        if len(self.range_tree) != n or len(self.sigma) != n or len(self.states) != n:
            raise RoverError("tree sizes, sigma and states must agree")
        if sorted(self.sigma) != list(range(n)):
            raise RoverError("sigma is not a permutation")
        if self.range_tree.d != self.domain_tree.d:
            raise RoverError("trees have different arity")
        aut = self.states[0].aut
        if aut.d != self.d:
            raise mealy.AlphabetMismatch("automaton and trees have different arity")
        if any(g.aut is not aut for g in self.states):
            raise RoverError("states belong to different automata")

    @property
    def d(self) -> int:
        return self.domain_tree.d

    @property
    def aut(self) -> Automaton:
        return self.states[0].aut

    @property
    def n(self) -> int:
        return len(self.sigma)

    def is_pure(self) -> bool:
        return all(g.idx == 0 for g in self.states)

    def __mul__(self, other):
        return multiply(self, other)

    def __invert__(self):
        return invert(self)

    def __call__(self, word):
        return act_long_word(self, word)

    def __str__(self):
        return format_element(self)


def identity(aut: Automaton) -> RoverElement:
    t = CompleteTree.root(aut.d)
    return RoverElement(t, t, (0,), (aut.identity,))


def make(range_tree, sigma, states, domain_tree, aut: Automaton | None = None) -> RoverElement:
    """Build from 1-based sigma; states may be Elements, names, or None (identity)."""
    n = len(sigma)
    if aut is None:
        aut = next(g.aut for g in states if isinstance(g, Element))
    d = aut.d
    if not isinstance(range_tree, CompleteTree):
        range_tree = CompleteTree(d, range_tree)
    if not isinstance(domain_tree, CompleteTree):
        domain_tree = CompleteTree(d, domain_tree)
    if states is None:
        states = [None] * n
    els = []
    for g in states:
        if g is None:
            els.append(aut.identity)
        elif isinstance(g, str):
            els.append(aut[g])
        else:
            els.append(g)
    return RoverElement(range_tree, domain_tree, tuple(x - 1 for x in sigma), tuple(els))


def pure(aut: Automaton, range_tree, sigma, domain_tree) -> RoverElement:
    return make(range_tree, sigma, None, domain_tree, aut)


def act_long_word(f: RoverElement, word) -> tuple:
    word = tuple(word)
    i = f.domain_tree.leaf_prefixing(word)
    if i is None:
        raise WordTooShort(f"word of length {len(word)} does not reach a leaf")
    v = f.domain_tree.leaves[i]
    u = f.range_tree.leaves[f.sigma[i]]
    return u + mealy.act(f.states[i], word[len(v):])


def act_boundary(f: RoverElement, pre, period) -> tuple[tuple, tuple]:
    """Image of the point ``pre period period ...`` as a canonical (preperiod, period) pair."""
    pre, period = tuple(pre), tuple(period)
    if not period:
        raise RoverError("period must be non-empty")
    need = f.domain_tree.depth
    word = pre
    while len(word) < need:
        word += period
    i = f.domain_tree.leaf_prefixing(word)
    v = f.domain_tree.leaves[i]
    u = f.range_tree.leaves[f.sigma[i]]
    tail = word[len(v):]
    out_pre, out_per = act_periodic(f.states[i], tail, period)
    return canonical_periodic(u + out_pre, out_per)


def expand_leaf(f: RoverElement, k: int) -> RoverElement:
    """Add a caret below domain leaf k (1-based) without changing the homeomorphism."""
    n = f.n
    if not 1 <= k <= n:
        raise IndexOutOfRange(f"leaf {k} not in 1..{n}")
    return _expand(f, k - 1)


def _expand(f: RoverElement, i: int) -> RoverElement:
    d = f.d
    g = f.states[i]
    sk = f.sigma[i]
    rho = g.aut.perm(g.idx)

    def shift(s):
        return s + d - 1 if s > sk else s

    sigma = (tuple(shift(s) for s in f.sigma[:i])
             + tuple(sk + rho[m] for m in range(d))
             + tuple(shift(s) for s in f.sigma[i + 1:]))
    states = f.states[:i] + g.children + f.states[i + 1:]
    return RoverElement(f.range_tree.expand(sk), f.domain_tree.expand(i), sigma, states)


def expand_to(f: RoverElement, tree: CompleteTree) -> RoverElement:
    if not tree.refines(f.domain_tree):
        raise NotARefinement("target tree does not contain the domain tree")
    target = set(tree.leaves)
    i = 0
    while i < len(f.domain_tree):
        if f.domain_tree.leaves[i] in target:
            i += 1
        else:
            f = _expand(f, i)
    return f


def invert(f: RoverElement) -> RoverElement:
    n = f.n
    sinv = [0] * n
    for i, s in enumerate(f.sigma):
        sinv[s] = i
    states = tuple(mealy.inverse(f.states[sinv[j]]) for j in range(n))
    return RoverElement(f.domain_tree, f.range_tree, tuple(sinv), states)


def expand_range_to(f: RoverElement, tree: CompleteTree) -> RoverElement:
    return invert(expand_to(invert(f), tree))


def _check_compatible(f: RoverElement, g: RoverElement):
    if f.d != g.d:
        raise mealy.AlphabetMismatch(f"arity {f.d} vs {g.d}")
    if f.aut is not g.aut:
        raise RoverError("elements use different automata")


def multiply(f: RoverElement, g: RoverElement) -> RoverElement:
    """The composite f o g (g acts first)."""
    _check_compatible(f, g)
    u = f.domain_tree.union(g.range_tree)
    F = expand_to(f, u)
    G = expand_range_to(g, u)
    sigma = tuple(F.sigma[G.sigma[i]] for i in range(G.n))
    states = tuple(mealy.product(F.states[G.sigma[i]], G.states[i]) for i in range(G.n))
    return RoverElement(F.range_tree, G.domain_tree, sigma, states)


def power(f: RoverElement, n: int) -> RoverElement:
    if n < 0:
        return power(invert(f), -n)
    out = identity(f.aut)
    for _ in range(n):
        out = multiply(out, f)
    return out


def equals(f: RoverElement, g: RoverElement) -> bool:
    _check_compatible(f, g)
    u = f.domain_tree.union(g.domain_tree)
    F, G = expand_to(f, u), expand_to(g, u)
    return (F.range_tree == G.range_tree and F.sigma == G.sigma
            and all(mealy.equals(a, b) for a, b in zip(F.states, G.states)))


def is_identity(f: RoverElement) -> bool:
    return equals(f, identity(f.aut))


def reduce(f: RoverElement) -> RoverElement:
    """Greedily contract carets whose merged state already exists in the table."""
    d = f.d
    aut = f.aut
    changed = True
    while changed:
        changed = False
        dom = f.domain_tree.leaves
        for i in range(len(dom) - d + 1):
            block = dom[i:i + d]
            parent = block[0][:-1]
            if not block[0] or any(block[m] != parent + (m + 1,) for m in range(d)):
                continue
            images = f.sigma[i:i + d]
            s0 = min(images)
            if sorted(images) != list(range(s0, s0 + d)):
                continue
            rng = f.range_tree.leaves
            rparent = rng[s0][:-1]
            if not rng[s0] or any(rng[s0 + m] != rparent + (m + 1,) for m in range(d)):
                continue
            rho = tuple(s - s0 for s in images)
            merged = aut.lookup(rho, tuple(g.idx for g in f.states[i:i + d]))
            if merged is None:
                continue

            def shrink(s):
                return s - (d - 1) if s > s0 else s

            sigma = (tuple(shrink(s) for s in f.sigma[:i]) + (s0,)
                     + tuple(shrink(s) for s in f.sigma[i + d:]))
            states = f.states[:i] + (Element(aut, merged),) + f.states[i + d:]
            f = RoverElement(CompleteTree._trusted(d, rng[:s0] + (rparent,) + rng[s0 + d:]),
                             CompleteTree._trusted(d, dom[:i] + (parent,) + dom[i + d:]),
                             sigma, states)
            changed = True
            break
    return f


def iota(u, g: Element) -> RoverElement:
    """Apply g inside the cone below u and the identity elsewhere."""
    u = tuple(u)
    tree = CompleteTree.spine(g.d, u)
    k = tree.leaves.index(u)
    states = tuple(g if i == k else g.aut.identity for i in range(len(tree)))
    return RoverElement(tree, tree, tuple(range(len(tree))), states)


def _require_persistent(aut: Automaton):
    if aut.d not in mealy.persistent_letters(aut):
        raise NotPersistent(f"the group is not {aut.d}-persistent")


def quasi_retract(f: RoverElement) -> Element:
    """The state at the last domain leaf; well defined for d-persistent groups."""
    _require_persistent(f.aut)
    return f.states[-1]


def lipschitz_probe(x: RoverElement, s: RoverElement) -> Element:
    """The factor h with r(s x) = h r(x)."""
    _require_persistent(x.aut)
    return mealy.product(quasi_retract(multiply(s, x)), mealy.inverse(quasi_retract(x)))


def self_similar_closure(gens) -> set[Element]:
    """All states of the generators and their inverses (a finite self-similar symmetric set)."""
    gens = list(gens)
    if not gens:
        return set()
    aut = gens[0].aut
    roots = [g.idx for g in gens] + [aut.inv(g.idx) for g in gens]
    return {Element(aut, q) for q in aut.reachable(roots)}


# -- generating sets -------------------------------------------------------------------

def vd_generators(aut: Automaton) -> dict[str, RoverElement]:
    """A finite symmetric generating set of the Higman-Thompson group V_d, as pure triples.

    With C the root caret, P and Q the trees obtained from C by expanding its
    first and last leaf, and R, R' the trees obtained from Q by expanding the
    leaves dd and d1:

    * ``x0 = [P, id, Q]`` and ``x1 = [R', id, R]`` with their inverses,
    * the transpositions of adjacent leaves of Q,
    * the transpositions of adjacent leaves of C.
    """
    d = aut.d
    C = CompleteTree.caret(d)
    P = C.expand(0)
    Q = C.expand(d - 1)
    R = Q.expand(len(Q) - 1)
    R1 = Q.expand(d - 1)
    ident = aut.identity
    out = {}

    def triple(rng, sigma, dom):
        return RoverElement(rng, dom, tuple(sigma), (ident,) * len(dom))

    x0 = triple(P, range(len(Q)), Q)
    x1 = triple(R1, range(len(R)), R)
    out["x0"], out["x0^-1"] = x0, invert(x0)
    out["x1"], out["x1^-1"] = x1, invert(x1)
    for tree, tag in ((Q, "q"), (C, "c")):
        n = len(tree)
        for i in range(n - 1):
            sigma = list(range(n))
            sigma[i], sigma[i + 1] = i + 1, i
            out[f"{tag}({i + 1} {i + 2})"] = triple(tree, sigma, tree)
    return out


def generators(G_gens, d: int | None = None) -> dict[str, RoverElement]:
    """iota_1 of each group generator and its inverse, together with :func:`vd_generators`."""
    G_gens = list(G_gens)
    aut = G_gens[0].aut
    if d is not None and d != aut.d:
        raise mealy.AlphabetMismatch(f"group acts on {aut.d} letters, not {d}")
    out = {}
    for g in G_gens:
        out[f"iota1({g.name})"] = iota((1,), g)
        gi = mealy.inverse(g)
        if gi != g:
            out[f"iota1({g.name}^-1)"] = iota((1,), gi)
    out.update(vd_generators(aut))
    return out


# -- the abelianization map of the p = 2 example ----------------------------------------

def _agl_payload(g: Element):
    from . import agl
    aut = g.aut
    if aut.context is None:
        raise WrongContext("states carry no affine data")
    hit = aut.payload.get(g.idx)
    if hit is None:
        hit = agl.decode(g)
        aut.payload[g.idx] = hit
    return hit


def abelianization_image(f: RoverElement) -> tuple[int, int, int]:
    """(chi, chi_b, chi_c) of the product g_1 ... g_n of the states."""
    from . import agl
    ctx = f.aut.context
    if ctx is None or ctx != agl.example_context():
        raise WrongContext("abelianization is only available for the p = 2 example")
    total = agl.identity(ctx)
    for g in f.states:
        total = total * _agl_payload(g)
    return agl.chi(total), agl.chi_b(total), agl.chi_c(total)


# -- text and JSON -----------------------------------------------------------------------

def format_word(w, d: int) -> str:
    if not w:
        return "-"
    sep = "." if d > 9 else ""
    return sep.join(str(x) for x in w)


def parse_word(text: str, d: int) -> tuple:
    text = text.strip()
    if text in ("-", ""):
        return ()
    parts = text.split(".") if "." in text or d > 9 else list(text)
    try:
        w = tuple(int(x) for x in parts)
    except ValueError as exc:
        raise ParseError(f"bad word {text!r}") from exc
    if any(not 1 <= x <= d for x in w):
        raise ParseError(f"letter outside 1..{d} in {text!r}")
    return w


def format_tree(t: CompleteTree) -> str:
    return ",".join(format_word(w, t.d) for w in t.leaves)


def parse_tree(text: str, d: int) -> CompleteTree:
    leaves = [parse_word(x, d) for x in text.split(",")]
    if [tuple(w) for w in leaves] != sorted(leaves):
        raise ParseError("tree leaves must be listed in lexicographic order")
    try:
        return CompleteTree(d, leaves)
    except RoverError as exc:
        raise ParseError(str(exc)) from exc


def format_element(f: RoverElement) -> str:
    sigma = " ".join(str(s + 1) for s in f.sigma)
    states = ",".join(g.name for g in f.states)
    return f"[{format_tree(f.range_tree)} ; {sigma} ; {states} ; {format_tree(f.domain_tree)}]"


def parse_element(text: str, aut: Automaton) -> RoverElement:
    """Inverse of :func:`format_element`; states are state names of ``aut``."""
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ParseError("expected '[T- ; sigma ; states ; T+]'")
    parts = [x.strip() for x in body[1:-1].split(";")]
    if len(parts) != 4:
        raise ParseError("expected four ';'-separated fields")
    d = aut.d
    rng, dom = parse_tree(parts[0], d), parse_tree(parts[3], d)
    try:
        sigma = tuple(int(x) - 1 for x in parts[1].split())
    except ValueError as exc:
        raise ParseError(f"bad sigma {parts[1]!r}") from exc
    names = [x.strip() for x in parts[2].split(",")]
    try:
        states = tuple(aut[x] for x in names)
    except KeyError as exc:
        raise ParseError(f"unknown state {exc}") from exc
    try:
        return RoverElement(rng, dom, sigma, states)
    except (RoverError, MealyError) as exc:
        raise ParseError(str(exc)) from exc


def to_json(f: RoverElement) -> dict:
    return {
        "range_tree": [list(w) for w in f.range_tree.leaves],
        "sigma": [s + 1 for s in f.sigma],
        "states": [g.name for g in f.states],
        "domain_tree": [list(w) for w in f.domain_tree.leaves],
    }


def from_json(data, aut: Automaton) -> RoverElement:
    if isinstance(data, str):
        data = json.loads(data)
    d = aut.d
    return RoverElement(CompleteTree(d, data["range_tree"]), CompleteTree(d, data["domain_tree"]),
                        tuple(s - 1 for s in data["sigma"]), tuple(aut[x] for x in data["states"]))
