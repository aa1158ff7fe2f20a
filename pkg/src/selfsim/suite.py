"""Seeded verification runs over the fixture groups.

Each ``check_*`` function returns a JSON-ready dict with a boolean
``pass`` entry. Nothing time- or address-dependent goes into the dicts,
so a fixed seed gives byte-identical reports.
"""

from __future__ import annotations

import json
import random
from itertools import product

from . import agl, fixtures, flagcomplex, mealy, rover, series
from .ff_poly import FieldError, Poly, RationalFunction, is_s_integer, unit_factorization
from .series import expand, shift, to_rational, truncate

# -- helpers ---------------------------------------------------------------------------


def random_poly(rng: random.Random, p: int, max_deg: int) -> Poly:
    return Poly([rng.randrange(p) for _ in range(rng.randint(0, max_deg) + 1)], p)


def random_rational(rng: random.Random, p: int, max_deg: int = 4) -> RationalFunction:
    while True:
        den = random_poly(rng, p, max_deg)
        if not den.is_zero():
            return RationalFunction(random_poly(rng, p, max_deg), den)


def random_integral(rng: random.Random, ctx, max_deg: int = 4) -> RationalFunction:
    """A random element of F_p(t) without a pole at the completion place."""
    while True:
        f = random_rational(rng, ctx.p, max_deg)
        if f.is_zero() or series.valuation(f, ctx.s) >= 0:
            return f


def random_rover(rng: random.Random, gens: list, length: int, expansions: int = 0):
    aut = gens[0].aut
    x = rover.identity(aut)
    for _ in range(rng.randint(1, length)):
        x = rover.multiply(rng.choice(gens), x)
    for _ in range(expansions):
        x = rover.expand_leaf(x, rng.randint(1, x.n))
    return x


def random_expansion(rng: random.Random, f, steps: int):
    for _ in range(steps):
        f = rover.expand_leaf(f, rng.randint(1, f.n))
    return f


def rover_witness(f, g):
    """A word on which f and g visibly disagree (common output prefix differs), or None."""
    u = f.domain_tree.union(g.domain_tree)
    F, G = rover.expand_to(f, u), rover.expand_to(g, u)
    d = f.d
    for i, v in enumerate(u.leaves):
        a, b = F.range_tree.leaves[F.sigma[i]], G.range_tree.leaves[G.sigma[i]]
        if a == b:
            w = mealy.distinguishing_word(F.states[i], G.states[i])
            if w is not None:
                return v + w
            continue
        for length in range(abs(len(a) - len(b)) + 2):
            for w in product(range(1, d + 1), repeat=length):
                if _disagree(f, g, v + w):
                    return v + w
    return None


def _disagree(f, g, word) -> bool:
    x, y = rover.act_long_word(f, word), rover.act_long_word(g, word)
    n = min(len(x), len(y))
    return x[:n] != y[:n]


def _agree_on(f, g, words) -> bool:
    return not any(_disagree(f, g, w) for w in words)


def _sample_words(rng, d, length, count):
    return [tuple(rng.randint(1, d) for _ in range(length)) for _ in range(count)]


def rover_groups():
    """The two 3-persistent fixture groups with their generators."""
    out = {}
    for name, aut, gnames in (("grigorchuk_t3", fixtures.grigorchuk_t3(), "abcd"),
                              ("example_t3", fixtures.example_automaton_t3(), "abc")):
        gens = [aut[x] for x in gnames]
        out[name] = (aut, gens)
    return out


# -- criterion checks ----------------------------------------------------------------


def check_example_compilation() -> dict:
    aut = fixtures.example_automaton()
    rec = {}
    ok = True
    for name, (perm, kids) in fixtures.EXAMPLE_RECURSIONS.items():
        g = aut[name]
        want_kids = tuple(fixtures.word_in(aut, k) for k in kids)
        match = aut.perm(g.idx) == perm and g.children == want_kids
        rec[name] = match
        ok &= match
    sets = {}
    for name, members in fixtures.EXAMPLE_STATE_SETS.items():
        got = {s.idx for s in mealy.states_of(aut[name])}
        want = {fixtures.word_in(aut, m).idx for m in members}
        sets[name] = {"size": len(got), "match": got == want}
        ok &= got == want
    return {"recursions": rec, "state_sets": sets,
            "text": mealy.format_automaton(aut, [aut[x] for x in "abc"]).splitlines(), "pass": ok}


def check_grigorchuk() -> dict:
    G = fixtures.grigorchuk()
    closure = mealy.state_closure([G[x] for x in "abcd"])
    diag = mealy.is_coarsely_diagonal_upto(G, 32)
    pers = mealy.is_persistent_group(G)
    G3 = mealy.persist_extend(G)
    text = mealy.format_automaton(G3, [G3[x] for x in "abcd"])
    verbatim = text == fixtures.GRIGORCHUK_T3.strip()
    p3 = mealy.is_persistent_group(G3) == 3 and all(
        mealy.is_i_persistent(G3[x], 3) for x in "abcd")
    ok = len(closure) == 5 and diag and pers is None and verbatim and p3
    return {"closure_states": len(closure), "coarsely_diagonal_32": diag,
            "persistent_t2": pers, "t3_verbatim": verbatim, "t3_persistent": p3, "pass": ok}


def check_quasi_retraction(seed: int = 0, samples: int = 500) -> dict:
    rng = random.Random(seed)
    out = {}
    ok = True
    for name, (aut, gens) in rover_groups().items():
        S = list(rover.generators(gens).values())
        SG = rover.self_similar_closure(gens) | {aut.identity}
        stable = 0
        for _ in range(samples):
            f = random_rover(rng, S, 6)
            r0 = rover.quasi_retract(f)
            e1 = random_expansion(rng, f, rng.randint(1, 4))
            e2 = random_expansion(rng, f, rng.randint(1, 4))
            if rover.quasi_retract(e1) == r0 == rover.quasi_retract(e2):
                stable += 1
        section = all(rover.quasi_retract(rover.iota((), g)) == g for g in sorted(SG, key=lambda e: e.idx))
        lip = 0
        for _ in range(samples):
            x = random_rover(rng, S, 6, rng.randint(0, 2))
            s = rng.choice(S)
            if rover.lipschitz_probe(x, s) in SG:
                lip += 1
        good = stable == samples and section and lip == samples
        ok &= good
        out[name] = {"expansion_invariant": f"{stable}/{samples}", "r_iota_identity": section,
                     "lipschitz": f"{lip}/{samples}", "closure_states": len(SG)}
    out["pass"] = ok
    return out


def check_group_axioms(seed: int = 0, samples: int = 100) -> dict:
    rng = random.Random(seed + 1)
    out = {}
    ok = True
    for name, (aut, gens) in rover_groups().items():
        S = list(rover.generators(gens).values())
        ident = rover.identity(aut)
        counts = {"identity": 0, "inverse": 0, "associative": 0, "cross_equal": 0, "cross_pair": 0}
        unequal = 0
        for _ in range(samples):
            f, g, h = (random_rover(rng, S, 5, rng.randint(0, 2)) for _ in range(3))
            if rover.equals(rover.multiply(ident, f), f) and rover.equals(rover.multiply(f, ident), f):
                counts["identity"] += 1
            if rover.is_identity(rover.multiply(f, rover.invert(f))) and \
                    rover.is_identity(rover.multiply(rover.invert(f), f)):
                counts["inverse"] += 1
            lhs = rover.multiply(rover.multiply(f, g), h)
            rhs = rover.multiply(f, rover.multiply(g, h))
            if rover.equals(lhs, rhs):
                counts["associative"] += 1
            depth = max(lhs.domain_tree.depth, rhs.domain_tree.depth) + 8
            if _agree_on(lhs, rhs, _sample_words(rng, aut.d, depth, 20)):
                counts["cross_equal"] += 1
            if rover.equals(f, g):
                counts["cross_pair"] += _agree_on(f, g, _sample_words(rng, aut.d, depth, 20))
            else:
                unequal += 1
                w = rover_witness(f, g)
                counts["cross_pair"] += w is not None and _disagree(f, g, w)
        good = all(v == samples for v in counts.values())
        ok &= good
        out[name] = {k: f"{v}/{samples}" for k, v in counts.items()}
        out[name]["unequal_pairs"] = unequal
    out["pass"] = ok
    return out


def check_abelianization(seed: int = 0, samples: int = 200) -> dict:
    rng = random.Random(seed + 2)
    aut = fixtures.example_automaton_t3()
    gens = [aut[x] for x in "abc"]
    images = {x: list(rover.abelianization_image(rover.iota((1,), aut[x]))) for x in "abc"}
    table = images == {"a": [2, 0, 0], "b": [1, 1, 0], "c": [1, 0, 1]}
    S = list(rover.generators(gens).values())
    invariant = additive = 0
    for _ in range(samples):
        f, g = random_rover(rng, S, 5), random_rover(rng, S, 5)
        a, b = rover.abelianization_image(f), rover.abelianization_image(g)
        if rover.abelianization_image(random_expansion(rng, f, rng.randint(1, 4))) == a:
            invariant += 1
        c = rover.abelianization_image(rover.multiply(f, g))
        if c == ((a[0] + b[0]) % 4, (a[1] + b[1]) % 2, (a[2] + b[2]) % 2):
            additive += 1
    ok = table and invariant == samples and additive == samples
    return {"iota1": images, "expansion_invariant": f"{invariant}/{samples}",
            "additive": f"{additive}/{samples}", "pass": ok}


def check_arithmetic(seed: int = 0, samples: int = 500, pole_samples: int = 200) -> dict:
    rng = random.Random(seed + 3)
    contexts = [fixtures.example_context(), fixtures.ternary_context()]
    round_trip = 0
    for i in range(samples):
        ctx = contexts[i % 2]
        f = random_rational(rng, ctx.p)
        if to_rational(expand(f, ctx), ctx) == f:
            round_trip += 1
    pole = 0
    for i in range(pole_samples):
        ctx = contexts[i % 2]
        f = random_integral(rng, ctx)
        j = rng.randint(0, 12)
        beta = to_rational(shift(truncate(expand(f, ctx), j, None), j), ctx)
        if is_s_integer(beta, ctx.S) == is_s_integer(f, ctx.S):
            pole += 1
    states = {}
    ok = round_trip == samples and pole == pole_samples
    for name, aut in (("example", fixtures.example_automaton()), ("ternary", fixtures.ternary_automaton())):
        ctx = aut.context
        members = diag = 0
        total = len(aut.payload)
        for idx in sorted(aut.payload):
            g = aut.payload[idx]
            try:
                unit_factorization(g.alpha, ctx.S)
                unit = True
            except FieldError:
                unit = False
            members += unit and is_s_integer(g.beta, ctx.S)
            x = mealy.Element(aut, idx)
            # both in the automaton and in the affine group
            diag += all(mealy.is_identity((mealy.inverse(child) * x) ** ctx.p)
                        and ((aut.payload[child.idx].inverse() * g) ** ctx.p).is_identity()
                        for child in x.children)
        states[name] = {"states": total, "in_O_S": f"{members}/{total}", "exponent_p": f"{diag}/{total}"}
        ok &= members == total and diag == total
    return {"round_trip": f"{round_trip}/{samples}", "tail_integrality": f"{pole}/{pole_samples}",
            "compiled": states, "pass": ok}


def _digit_oracle(alpha_digits, beta_digits, gamma, p):
    """Digit n of alpha*gamma + beta in F_p[[pi]] (no carries)."""
    n = len(gamma) - 1
    return (sum(alpha_digits[k] * gamma[n - k] for k in range(n + 1)) + beta_digits[n]) % p


def check_compilation_soundness(max_len: int = 10, seed: int = 0, spot_checks: int = 100) -> dict:
    rng = random.Random(seed + 4)
    out = {}
    ok = True
    for name, gens in (("example", fixtures.example_generators()), ("ternary", fixtures.ternary_generators())):
        aut = agl.compile(list(gens.values()), names=list(gens))
        ctx = aut.context
        p = ctx.p
        words = mismatches = 0
        for gname, g in gens.items():
            for h in (g, g.inverse()):
                x = agl.element_in(aut, h)
                ad = expand(h.alpha, ctx).digits(0, max_len)
                bd = expand(h.beta, ctx).digits(0, max_len)
                # depth-first over all digit words, carrying the automaton state
                stack = [((), x.idx)]
                while stack:
                    gamma, q = stack.pop()
                    words += 1
                    if len(gamma) == max_len:
                        continue
                    perm, kids = aut.perm(q), aut.children(q)
                    for r in range(p):
                        g2 = gamma + (r,)
                        digit = _digit_oracle(ad, bd, g2, p)
                        if perm[r] != digit:
                            mismatches += 1
                        stack.append((g2, kids[r]))
                # the oracle itself against the series arithmetic
                for _ in range(spot_checks):
                    gamma = [rng.randrange(p) for _ in range(max_len)]
                    auto = tuple(y - 1 for y in mealy.act(x, [r + 1 for r in gamma]))
                    if agl.act_on_digits(h, gamma) != auto:
                        mismatches += 1
        out[name] = {"words": words, "mismatches": mismatches}
        ok &= mismatches == 0
    out["pass"] = ok
    return out


def check_complexes() -> dict:
    rows = []
    ok = True
    for d, ks in ((2, range(3, 9)), (3, range(4, 13))):
        for k in ks:
            X = flagcomplex.FlagComplex(k, d)
            r = flagcomplex.report(X)
            count_ok = r["vertices"] == flagcomplex.falling_factorial(k, d)
            good = count_ok and r["ok"]
            ok &= good
            rows.append({"d": d, "k": k, "vertices": r["vertices"], "edges": r["edges"],
                         "components": r["components"], "predicted": r["predicted_connectivity"],
                         "ground": r["ground_simplex_found"], "pass": good})
    cross = []
    for group in ("trivial", "order_two"):
        for k in (3, 4, 5):
            aut = fixtures.order_two(2) if group == "order_two" else None
            X = flagcomplex.FlagComplex(k, 2, aut)
            for n in (1, 2):
                c = flagcomplex.morphism_cross_check(X, n)
                ok &= c["ok"]
                cross.append({"group": group, "k": k, "n": n, "classes": c["classes"],
                              "cliques": c["cliques"], "pass": c["ok"]})
    return {"complexes": rows, "cross_check": cross, "pass": ok}


CHECKS = [
    ("example_compilation", lambda seed, samples: check_example_compilation()),
    ("grigorchuk", lambda seed, samples: check_grigorchuk()),
    ("quasi_retraction", lambda seed, samples: check_quasi_retraction(seed, samples)),
    ("group_axioms", lambda seed, samples: check_group_axioms(seed, max(1, samples // 5))),
    ("abelianization", lambda seed, samples: check_abelianization(seed, max(1, samples * 2 // 5))),
    ("arithmetic", lambda seed, samples: check_arithmetic(seed, samples, max(1, samples * 2 // 5))),
    ("compilation_soundness", lambda seed, samples: check_compilation_soundness(seed=seed)),
    ("complexes", lambda seed, samples: check_complexes()),
]


def run_suite(seed: int = 0, samples: int = 500) -> dict:
    results = {"schema": 1, "seed": seed, "samples": samples, "checks": {}}
    for name, fn in CHECKS:
        results["checks"][name] = fn(seed, samples)
    results["pass"] = all(c["pass"] for c in results["checks"].values())
    return results


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
