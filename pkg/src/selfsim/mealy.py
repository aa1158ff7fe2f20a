"""Finite-state automorphisms of the rooted d-ary tree.

An :class:`Automaton` is an append-only table of states. Each state has a
root permutation and d children (its level-1 states), and the action on
words is ``f(x w) = perm(x) f_x(w)``. Letters are ``1..d`` at the public
surface and ``0..d-1`` inside the table.

The table is kept free of duplicate automorphisms: whenever new states are
added they are compared against existing ones (a cheap action fingerprint
to find candidates, then an exact bisimulation check) and merged. Two
elements of the same automaton are therefore equal exactly when their
indices agree. :func:`equals` and :func:`is_identity` decide equality
independently of that bookkeeping.
"""

from __future__ import annotations

import random
import re
from collections import deque
from itertools import permutations

from .ff_poly import ParseError


class MealyError(Exception):
    pass


class AlphabetMismatch(MealyError):
    pass


class BudgetExceeded(MealyError):
    pass


Word = tuple


def _compose(a: tuple, b: tuple) -> tuple:
    """(a o b)(x) = a(b(x))."""
    return tuple(a[x] for x in b)


def _invert(a: tuple) -> tuple:
    out = [0] * len(a)
    for x, y in enumerate(a):
        out[y] = x
    return tuple(out)


class Automaton:
    """A growing, duplicate-free table of tree automorphisms; state 0 is the identity."""

    FINGERPRINT_WORDS = 6
    FINGERPRINT_LENGTH = 12

    def __init__(self, d: int):
        if d < 2:
            raise MealyError("alphabet size must be at least 2")
        self.d = d
        self._perm: list[tuple] = [tuple(range(d))]
        self._children: list[tuple] = [(0,) * d]
        self._struct: dict[tuple, int] = {(self._perm[0], self._children[0]): 0}
        rng = random.Random(7919 * d)
        self._probes = [tuple(rng.randrange(d) for _ in range(self.FINGERPRINT_LENGTH))
                        for _ in range(self.FINGERPRINT_WORDS)]
        self._fp_index: dict[tuple, list[int]] = {}
        self._fp_index.setdefault(self._fingerprint(0, self._perm.__getitem__,
                                                    self._children.__getitem__), []).append(0)
        self._products: dict[tuple[int, int], int] = {}
        self._inverses: dict[int, int] = {0: 0}
        self.names: dict[int, str] = {0: "e"}
        self.by_name: dict[str, int] = {"e": 0}
        self.payload: dict[int, object] = {}
        self.context = None  # set by agl.compile

    def __len__(self):
        return len(self._perm)

    def __getitem__(self, key) -> Element:
        if isinstance(key, str):
            if key in self.by_name:
                return Element(self, self.by_name[key])
            if re.fullmatch(r"s\d+", key) and int(key[1:]) < len(self._perm):
                return Element(self, int(key[1:]))
            raise KeyError(key)
        if not 0 <= key < len(self._perm):
            raise IndexError(key)
        return Element(self, key)

    @property
    def identity(self) -> Element:
        return Element(self, 0)

    def states(self) -> list[Element]:
        return [Element(self, i) for i in range(len(self._perm))]

    def perm(self, i: int) -> tuple:
        return self._perm[i]

    def children(self, i: int) -> tuple:
        return self._children[i]

    def lookup(self, perm: tuple, children: tuple) -> int | None:
        """Index of the state with exactly this (0-based) perm and children, if any."""
        return self._struct.get((tuple(perm), tuple(children)))

    def name_of(self, i: int) -> str:
        return self.names.get(i, f"s{i}")

    def set_name(self, i: int, name: str):
        if name in self.by_name and self.by_name[name] != i:
            raise MealyError(f"name {name!r} already used")
        self.names.setdefault(i, name)
        self.by_name[name] = i

    # -- insertion ------------------------------------------------------------

    def _fingerprint(self, x: int, perm_of, children_of) -> tuple:
        out = [perm_of(x)]
        for w in self._probes:
            q = x
            img = []
            for a in w:
                img.append(perm_of(q)[a])
                q = children_of(q)[a]
            out.append(tuple(img))
        return tuple(out)

    def commit(self, perms: list[tuple], children: list[tuple]) -> list[int]:
        """Add provisional states and return their final indices.

        Provisional state ``j`` has id ``len(self) + j``; children may refer to
        existing indices or to provisional ids. Provisional states equal to an
        existing state (or to each other) are merged.
        """
        base = len(self._perm)
        n = len(perms)

        def perm_of(x):
            return self._perm[x] if x < base else perms[x - base]

        def children_of(x):
            return self._children[x] if x < base else children[x - base]

        def bisimilar(x, y):
            seen = set()
            todo = [(x, y)]
            while todo:
                u, v = todo.pop()
                if u == v or (u, v) in seen:
                    continue
                if u < base and v < base:
                    return False
                if perm_of(u) != perm_of(v):
                    return False
                seen.add((u, v))
                todo.extend(zip(children_of(u), children_of(v)))
            return True

        rep: dict[int, int] = {}
        new_by_fp: dict[tuple, list[int]] = {}
        fps = {}
        for j in range(n):
            x = base + j
            fp = self._fingerprint(x, perm_of, children_of)
            fps[x] = fp
            match = None
            for cand in self._fp_index.get(fp, ()):
                if bisimilar(x, cand):
                    match = cand
                    break
            if match is None:
                for cand in new_by_fp.get(fp, ()):
                    if bisimilar(x, cand):
                        match = cand
                        break
            if match is None:
                new_by_fp.setdefault(fp, []).append(x)
                rep[x] = x
            else:
                rep[x] = match
        final: dict[int, int] = {}
        for j in range(n):
            x = base + j
            if rep[x] == x:
                final[x] = base + len(final)

        def resolve(y):
            if y < base:
                return y
            r = rep[y]
            return r if r < base else final[r]

        for x in sorted(final, key=final.get):
            p = perm_of(x)
            ch = tuple(resolve(c) for c in children_of(x))
            idx = len(self._perm)
            self._perm.append(p)
            self._children.append(ch)
            self._struct.setdefault((p, ch), idx)
            self._fp_index.setdefault(fps[x], []).append(idx)
        return [resolve(base + j) for j in range(n)]

    def add_state(self, perm, children) -> int:
        """Add one state whose children are existing states (0-based perm)."""
        return self.commit([tuple(perm)], [tuple(children)])[0]

    # -- group operations on indices --------------------------------------------

    def mul(self, f: int, g: int) -> int:
        """Index of f*g (g acts first)."""
        if f == 0:
            return g
        if g == 0:
            return f
        hit = self._products.get((f, g))
        if hit is not None:
            return hit
        base = len(self._perm)
        prov: dict[tuple[int, int], int] = {}
        order: list[tuple[int, int]] = []
        perms: list[tuple] = []
        kids: list[list] = []

        def node(a, b):
            if a == 0:
                return b
            if b == 0:
                return a
            hit = self._products.get((a, b))
            if hit is not None:
                return hit
            pid = prov.get((a, b))
            if pid is None:
                pid = base + len(order)
                prov[(a, b)] = pid
                order.append((a, b))
            return pid

        node(f, g)
        i = 0
        while i < len(order):
            a, b = order[i]
            pa, pb = self._perm[a], self._perm[b]
            ca, cb = self._children[a], self._children[b]
            perms.append(_compose(pa, pb))
            kids.append(tuple(node(ca[pb[x]], cb[x]) for x in range(self.d)))
            i += 1
        final = self.commit(perms, kids)
        for pair, idx in zip(order, final):
            self._products[pair] = idx
        return self._products[(f, g)]

    def inv(self, g: int) -> int:
        hit = self._inverses.get(g)
        if hit is not None:
            return hit
        base = len(self._perm)
        prov: dict[int, int] = {}
        order: list[int] = []

        def node(a):
            hit = self._inverses.get(a)
            if hit is not None:
                return hit
            pid = prov.get(a)
            if pid is None:
                pid = base + len(order)
                prov[a] = pid
                order.append(a)
            return pid

        node(g)
        perms, kids = [], []
        i = 0
        while i < len(order):
            a = order[i]
            pinv = _invert(self._perm[a])
            ca = self._children[a]
            perms.append(pinv)
            kids.append(tuple(node(ca[pinv[x]]) for x in range(self.d)))
            i += 1
        final = self.commit(perms, kids)
        for a, idx in zip(order, final):
            self._inverses[a] = idx
            self._inverses[idx] = a
        return self._inverses[g]

    def reachable(self, roots) -> list[int]:
        seen = []
        mark = set()
        todo = deque(roots)
        while todo:
            q = todo.popleft()
            if q in mark:
                continue
            mark.add(q)
            seen.append(q)
            todo.extend(self._children[q])
        return seen

    def __repr__(self):
        return f"Automaton(d={self.d}, states={len(self)})"


class Element:
    """An element of a finite-state group: a state of an :class:`Automaton`."""

    __slots__ = ("aut", "idx")

    def __init__(self, aut: Automaton, idx: int):
        self.aut = aut
        self.idx = idx

    @property
    def d(self) -> int:
        return self.aut.d

    @property
    def perm(self) -> tuple:
        """Root permutation as 1-based images: ``perm[x-1] = image of x``."""
        return tuple(y + 1 for y in self.aut._perm[self.idx])

    @property
    def children(self) -> tuple:
        return tuple(Element(self.aut, c) for c in self.aut._children[self.idx])

    def child(self, x: int) -> Element:
        return Element(self.aut, self.aut._children[self.idx][x - 1])

    @property
    def name(self) -> str:
        return self.aut.name_of(self.idx)

    def is_trivial_index(self) -> bool:
        return self.idx == 0

    def __eq__(self, other):
        return isinstance(other, Element) and self.aut is other.aut and self.idx == other.idx

    def __hash__(self):
        return hash((id(self.aut), self.idx))

    def __mul__(self, other: Element) -> Element:
        return product(self, other)

    def __invert__(self) -> Element:
        return inverse(self)

    def __pow__(self, n: int) -> Element:
        if n < 0:
            return inverse(self) ** (-n)
        result = self.aut.identity
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, word) -> Word:
        return act(self, word)

    def __repr__(self):
        return f"Element({self.name})"


# -- operations -----------------------------------------------------------------

def _check_word(d: int, word):
    for x in word:
        if not 1 <= x <= d:
            raise MealyError(f"letter {x} outside 1..{d}")


def act(g: Element, word) -> Word:
    """Image of a word (letters 1..d) under g."""
    _check_word(g.d, word)
    aut = g.aut
    q = g.idx
    out = []
    for x in word:
        out.append(aut._perm[q][x - 1] + 1)
        q = aut._children[q][x - 1]
    return tuple(out)


def state_at(g: Element, word) -> Element:
    """The state of g at the vertex ``word`` (children are indexed by input letters)."""
    _check_word(g.d, word)
    aut = g.aut
    q = g.idx
    for x in word:
        q = aut._children[q][x - 1]
    return Element(aut, q)


def act_periodic(g: Element, pre, period) -> tuple[Word, Word]:
    """Image of the infinite word ``pre period period ...`` as (preperiod, period)."""
    if not period:
        raise MealyError("period must be non-empty")
    _check_word(g.d, tuple(pre) + tuple(period))
    aut = g.aut
    q = g.idx
    out_pre = []
    for x in pre:
        out_pre.append(aut._perm[q][x - 1] + 1)
        q = aut._children[q][x - 1]
    seen: dict[int, int] = {}
    blocks: list[list[int]] = []
    while q not in seen:
        seen[q] = len(blocks)
        block = []
        for x in period:
            block.append(aut._perm[q][x - 1] + 1)
            q = aut._children[q][x - 1]
        blocks.append(block)
    start = seen[q]
    for b in blocks[:start]:
        out_pre.extend(b)
    out_period = [x for b in blocks[start:] for x in b]
    return canonical_periodic(out_pre, out_period)


def canonical_periodic(pre, period) -> tuple[Word, Word]:
    period = tuple(period)
    n = len(period)
    for ell in range(1, n + 1):
        if n % ell == 0 and period[:ell] * (n // ell) == period:
            period = period[:ell]
            break
    pre = list(pre)
    while pre and pre[-1] == period[-1]:
        pre.pop()
        period = period[-1:] + period[:-1]
    return tuple(pre), period


def _same_aut(f: Element, g: Element):
    if f.aut is not g.aut:
        if f.d != g.d:
            raise AlphabetMismatch(f"alphabets {f.d} and {g.d} differ")
        raise MealyError("elements live in different automata")


def product(f: Element, g: Element) -> Element:
    """The composite f o g (apply g first), via the wreath recursion of a product."""
    _same_aut(f, g)
    return Element(f.aut, f.aut.mul(f.idx, g.idx))


def inverse(g: Element) -> Element:
    return Element(g.aut, g.aut.inv(g.idx))


def is_identity(g: Element) -> bool:
    """g is trivial iff every state reachable from g has trivial root permutation."""
    aut = g.aut
    ident = tuple(range(aut.d))
    return all(aut._perm[q] == ident for q in aut.reachable([g.idx]))


def equals(f: Element, g: Element) -> bool:
    return is_identity(product(f, inverse(g)))


def distinguishing_word(f: Element, g: Element) -> Word | None:
    """A shortest word on which f and g act differently, or None if f == g."""
    _same_aut(f, g)
    aut = f.aut
    start = (f.idx, g.idx)
    back = {start: None}
    todo = deque([start])
    while todo:
        pair = todo.popleft()
        a, b = pair
        pa, pb = aut._perm[a], aut._perm[b]
        for x in range(aut.d):
            if pa[x] != pb[x]:
                word = [x + 1]
                while back[pair] is not None:
                    pair, y = back[pair]
                    word.append(y)
                return tuple(reversed(word))
            nxt = (aut._children[a][x], aut._children[b][x])
            if nxt not in back:
                back[nxt] = (pair, x + 1)
                todo.append(nxt)
    return None


def states_of(g: Element) -> list[Element]:
    return [Element(g.aut, q) for q in g.aut.reachable([g.idx])]


def state_closure(gens, max_states: int = 10_000) -> Automaton:
    """Fresh automaton with the generators, their inverses and all their states."""
    gens = list(gens)
    if not gens:
        return Automaton(2)
    aut = gens[0].aut
    for g in gens:
        _same_aut(gens[0], g)
    roots = [g.idx for g in gens]
    roots += [aut.inv(q) for q in roots]
    keep = aut.reachable(roots)
    if len(set(keep) | {0}) > max_states:
        raise BudgetExceeded(f"more than {max_states} states")
    return _copy_states(aut, keep, aut.d, lambda p: p, lambda q, ch: ch)


def _copy_states(src: Automaton, keep, d: int, map_perm, map_children) -> Automaton:
    """Copy states of ``src`` into a new automaton on d letters.

    ``map_perm`` transforms the 0-based perm; ``map_children(q, ch)`` returns
    the children tuple (as source indices) for source state q.
    """
    out = Automaton(d)
    keep = [q for q in keep]
    if 0 not in keep:
        keep = [0] + keep
    base = len(out)
    pid = {q: base + i for i, q in enumerate(keep)}
    perms = [tuple(map_perm(src._perm[q])) for q in keep]
    kids = [tuple(pid[c] for c in map_children(q, src._children[q])) for q in keep]
    final = out.commit(perms, kids)
    mapping = dict(zip(keep, final))
    for q in keep:
        if q in src.names and q != 0:
            out.set_name(mapping[q], src.names[q])
        if q in src.payload:
            out.payload[mapping[q]] = src.payload[q]
    out.context = src.context
    out.source_map = mapping
    return out


def is_i_persistent(g: Element, i: int) -> bool:
    if not 1 <= i <= g.d:
        raise MealyError(f"index {i} outside 1..{g.d}")
    return g.child(i) == g


def persistent_letters(aut: Automaton) -> set[int]:
    """All i such that every state in the table is i-persistent.

    The table only grows, so the answer is maintained incrementally.
    """
    done, letters = getattr(aut, "_persist_scan", (0, set(range(aut.d))))
    for q in range(done, len(aut)):
        if not letters:
            break
        ch = aut._children[q]
        letters = {x for x in letters if ch[x] == q}
    aut._persist_scan = (len(aut), letters)
    return {x + 1 for x in letters}


def is_persistent_group(aut: Automaton) -> int | None:
    """Some i such that every state of the automaton is i-persistent, else None.

    Prefers i = d, the convention used by the quasi-retraction.
    """
    letters = persistent_letters(aut)
    if not letters:
        return None
    return aut.d if aut.d in letters else min(letters)


def persist_extend(aut: Automaton) -> Automaton:
    """Same group acting on d+1 letters; every state becomes its own last child."""
    d = aut.d
    return _copy_states(aut, range(len(aut)), d + 1,
                        lambda p: tuple(p) + (d,),
                        lambda q, ch: tuple(ch) + (q,))


def conjugate_by_transposition(aut: Automaton, i: int, j: int) -> Automaton:
    """Conjugate every state by the automorphism applying the transposition (i j) at every vertex."""
    d = aut.d
    if not (1 <= i <= d and 1 <= j <= d):
        raise MealyError("transposition indices out of range")
    t = list(range(d))
    t[i - 1], t[j - 1] = j - 1, i - 1
    t = tuple(t)
    return _copy_states(aut, range(len(aut)), d,
                        lambda p: _compose(t, _compose(p, t)),
                        lambda q, ch: tuple(ch[t[x]] for x in range(d)))


def has_finite_order_upto(g: Element, n: int) -> int | None:
    """Least k <= n with g^k trivial, or None."""
    if n < 1:
        raise MealyError("bound must be positive")
    # powers can have exponentially many states, so only build g^k when it
    # already acts trivially on a finite level
    depth = 1
    while g.d ** (depth + 1) <= 256:
        depth += 1
    rng = random.Random(0)
    probe = list(words(g.d, depth))
    probe += [tuple(rng.randint(1, g.d) for _ in range(128)) for _ in range(8)]
    images = probe
    for k in range(1, n + 1):
        images = [act(g, w) for w in images]
        if images == probe and is_identity(g ** k):
            return k
    return None


def is_coarsely_diagonal_upto(aut: Automaton, n: int, states=None) -> bool:
    """Every state g and every state g' of g have (g')^-1 g of order <= n."""
    roots = range(len(aut)) if states is None else [s.idx for s in states]
    for q in list(roots):
        g = Element(aut, q)
        for gp in states_of(g):
            if has_finite_order_upto(product(inverse(gp), g), n) is None:
                return False
    return True


def level_permutation(g: Element, level: int) -> dict:
    """The permutation g induces on the words of the given length."""
    return {w: act(g, w) for w in words(g.d, level)}


def words(d: int, length: int):
    if length == 0:
        yield ()
        return
    for w in words(d, length - 1):
        for x in range(1, d + 1):
            yield w + (x,)


# -- text formats -----------------------------------------------------------------

_LINE_RE = re.compile(r"^\s*([A-Za-z_][\w']*)\s*=\s*(.*)$")


def parse_cycles(text: str, d: int) -> tuple:
    """0-based images of a permutation given in cycle notation (letters 1..d)."""
    img = list(range(d))
    for cyc in re.findall(r"\(([^()]*)\)", text):
        pts = [int(x) - 1 for x in cyc.replace(",", " ").split()]
        if any(not 0 <= x < d for x in pts) or len(set(pts)) != len(pts):
            raise ParseError(f"bad cycle ({cyc})")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return tuple(img)


def format_cycles(perm: tuple) -> str:
    """Cycle notation of a 0-based permutation; '' for the identity."""
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = []
        x = start
        while x not in seen:
            seen.add(x)
            cyc.append(str(x + 1))
            x = perm[x]
        out.append("(" + " ".join(cyc) + ")")
    return "".join(out)


def parse_automaton(text: str, d: int | None = None) -> Automaton:
    """Parse lines like ``a = (1 2)(e, e)`` and ``b = (a, c)``; ``e`` is the identity."""
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise ParseError(f"bad state line: {raw!r}")
        name, rhs = m.group(1), m.group(2)
        groups = re.findall(r"\(([^()]*)\)", rhs)
        if not groups or re.sub(r"\([^()]*\)", "", rhs).strip():
            raise ParseError(f"bad state definition: {raw!r}")
        kids = [c.strip() for c in groups[-1].split(",")]
        cycles = "".join(f"({g})" for g in groups[:-1])
        rows.append((name, cycles, kids))
    if not rows:
        raise ParseError("no states defined")
    if d is None:
        d = len(rows[0][2])
    names = [r[0] for r in rows]
    if "e" in names:
        raise ParseError("'e' is reserved for the identity")
    if len(set(names)) != len(names):
        raise ParseError("duplicate state name")
    aut = Automaton(d)
    base = len(aut)
    pid = {name: base + i for i, name in enumerate(names)}
    pid["e"] = 0
    perms, kids = [], []
    for name, cycles, ch in rows:
        if len(ch) != d:
            raise ParseError(f"state {name} has {len(ch)} children, expected {d}")
        for c in ch:
            if c not in pid:
                raise ParseError(f"unknown state {c!r}")
        perms.append(parse_cycles(cycles, d))
        kids.append(tuple(pid[c] for c in ch))
    final = aut.commit(perms, kids)
    for name, idx in zip(names, final):
        aut.set_name(idx, name)
    return aut


def format_state(aut: Automaton, i: int) -> str:
    cyc = format_cycles(aut._perm[i])
    kids = ", ".join(aut.name_of(c) for c in aut._children[i])
    return f"{aut.name_of(i)} = {cyc}({kids})"


def format_automaton(aut: Automaton, states=None) -> str:
    """One definition line per state (identity omitted)."""
    if states is None:
        idxs = [i for i in range(1, len(aut))]
    else:
        idxs = [s.idx if isinstance(s, Element) else s for s in states]
        idxs = [i for i in aut.reachable(idxs) if i != 0]
    return "\n".join(format_state(aut, i) for i in idxs)


def to_dot(aut: Automaton, states=None) -> str:
    if states is None:
        idxs = list(range(len(aut)))
    else:
        idxs = aut.reachable([s.idx if isinstance(s, Element) else s for s in states])
    lines = ["digraph automaton {"]
    for i in idxs:
        lines.append(f'  "{aut.name_of(i)}";')
    for i in idxs:
        for x, c in enumerate(aut._children[i]):
            lab = f"{x + 1}|{aut._perm[i][x] + 1}"
            lines.append(f'  "{aut.name_of(i)}" -> "{aut.name_of(c)}" [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines)


def all_permutations(d: int):
    return list(permutations(range(d)))
