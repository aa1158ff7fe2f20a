"""Command line front end.

Definitions live in a YAML file with any of these sections::

    automata:
      grig: |
        a = (1 2)(e, e)
        b = (a, c)
        c = (a, d)
        d = (e, b)
    contexts:
      ex: {p: 2, s: "1+t", pi: "1+t", S: [inf, t, "1+t+t^2"]}
    agl:
      ex_group:
        context: ex
        elements: {a: "(1; 1)", b: "(t; 0)", c: "(1+t+t^2; 0)"}
        persist: true          # optional: extend to d+1 letters
    rover:
      f: {group: ex_group, element: "[1,2 ; 2 1 ; a,e ; 1,2]"}

Names are global across sections. Exit codes: 0 ok, 1 property violated,
2 parse error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

import yaml

from . import agl, fixtures, flagcomplex, mealy, rover, series, suite
from .ff_poly import FieldError, ParseError, PlaceSet, parse_rational, place_from_text
from .series import CompletionContext

EXIT_OK, EXIT_VIOLATED, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3


class Violated(Exception):
    """A checked property does not hold; the payload is still printed."""

    def __init__(self, payload):
        super().__init__("property violated")
        self.payload = payload


class Definitions:
    def __init__(self, data: dict | None, max_states: int):
        data = data or {}
        if not isinstance(data, dict):
            raise ParseError("definitions file must be a mapping")
        self.max_states = max_states
        self.groups: dict[str, mealy.Automaton] = {}
        self.contexts: dict[str, CompletionContext] = {}
        self.agl_gens: dict[str, dict] = {}
        self.rover: dict[str, rover.RoverElement] = {}
        taken = set()

        def claim(name):
            if name in taken:
                raise ParseError(f"name {name!r} defined twice")
            taken.add(name)

        for name, text in (data.get("automata") or {}).items():
            claim(name)
            self.groups[name] = mealy.parse_automaton(str(text))
        for name, entry in (data.get("contexts") or {}).items():
            claim(name)
            self.contexts[name] = parse_context(entry)
        for name, entry in (data.get("agl") or {}).items():
            claim(name)
            if entry.get("context") not in self.contexts:
                raise ParseError(f"agl group {name!r} needs a known context")
            ctx = self.contexts[entry["context"]]
            gens = {g: agl.parse_element(str(t), ctx) for g, t in (entry.get("elements") or {}).items()}
            if not gens:
                raise ParseError(f"agl group {name!r} has no elements")
            self.agl_gens[name] = gens
            aut = agl.compile(list(gens.values()), max_states=max_states, names=list(gens))
            if entry.get("persist"):
                aut = mealy.persist_extend(aut)
            self.groups[name] = aut
        for name, entry in (data.get("rover") or {}).items():
            claim(name)
            self.rover[name] = rover.parse_element(str(entry["element"]), self.group(entry["group"]))

    @classmethod
    def load(cls, path: str | None, max_states: int) -> Definitions:
        if path is None:
            return cls(None, max_states)
        try:
            with open(path) as fh:
                data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ParseError(f"bad YAML: {exc}") from exc
        return cls(data, max_states)

    def group(self, name: str) -> mealy.Automaton:
        if name in self.groups:
            return self.groups[name]
        builtin = BUILTIN_GROUPS.get(name)
        if builtin is None:
            raise ParseError(f"unknown group {name!r}")
        self.groups[name] = builtin()
        return self.groups[name]

    def element(self, aut: mealy.Automaton, expr: str) -> mealy.Element:
        try:
            return fixtures.word_in(aut, expr)
        except (KeyError, ValueError) as exc:
            raise ParseError(f"bad element expression {expr!r}") from exc

    def rover_element(self, aut: mealy.Automaton, text: str) -> rover.RoverElement:
        text = text.strip()
        if text in self.rover:
            return self.rover[text]
        if text.startswith("iota(") and text.endswith(")"):
            word, _, g = text[5:-1].partition(",")
            return rover.iota(rover.parse_word(word, aut.d), self.element(aut, g.strip()))
        if text == "id":
            return rover.identity(aut)
        return rover.parse_element(text, aut)


BUILTIN_GROUPS = {
    "grigorchuk": fixtures.grigorchuk,
    "grigorchuk_t3": fixtures.grigorchuk_t3,
    "order_two": fixtures.order_two,
    "example": fixtures.example_automaton,
    "example_t3": fixtures.example_automaton_t3,
    "ternary": fixtures.ternary_automaton,
}


def parse_context(entry) -> CompletionContext:
    try:
        p = int(entry["p"])
        s = place_from_text(str(entry["s"]), p)
        pi = parse_rational(str(entry["pi"]), p)
        S = PlaceSet(place_from_text(str(x), p) for x in entry["S"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"context needs p, s, pi and S: {exc}") from exc
    return CompletionContext(p, s, S, pi)


def parse_letters(text: str, d: int) -> tuple:
    return rover.parse_word(text, d)


# -- commands ----------------------------------------------------------------------------

def cmd_states(defs: Definitions, args, opts):
    if not args:
        raise ParseError("usage: states GROUP [ELEMENT]")
    aut = defs.group(args[0])
    if len(args) > 1:
        roots = [defs.element(aut, args[1])]
    else:
        roots = [mealy.Element(aut, i) for i in range(1, len(aut))] or [aut.identity]
    closure = mealy.state_closure(roots, max_states=opts.max_states)
    states = mealy.states_of(roots[0]) if len(args) > 1 else closure.states()
    if opts.out == "dot":
        return mealy.to_dot(aut, roots)
    names = [s.name for s in states]
    payload = {"group": args[0], "count": len(states), "states": names,
               "definitions": mealy.format_automaton(aut, roots).splitlines()}
    if opts.out == "json":
        return payload
    return "\n".join([f"{len(states)} states: {', '.join(names)}"] + payload["definitions"])


def cmd_eval(defs: Definitions, args, opts):
    if len(args) != 3:
        raise ParseError("usage: eval GROUP ELEMENT WORD")
    aut = defs.group(args[0])
    g = defs.element(aut, args[1])
    word = parse_letters(args[2], aut.d)
    image = mealy.act(g, word)
    payload = {"input": "".join(map(str, word)), "output": "".join(map(str, image))}
    ctx = aut.context
    if ctx is not None and all(x <= ctx.p for x in word):
        h = aut.payload.get(g.idx) or agl.decode(g)
        digits = agl.act_on_digits(h, [x - 1 for x in word])
        payload["affine"] = "".join(str(x + 1) for x in digits)
        payload["element"] = str(h)
        if tuple(x + 1 for x in digits) != image:
            raise Violated(payload)
    if opts.out == "json":
        return payload
    return payload["output"]


CHECKABLE = ("self-similar", "finite-state", "persistent", "coarsely-diagonal")


def cmd_check(defs: Definitions, args, opts):
    if len(args) != 2 or args[1] not in CHECKABLE:
        raise ParseError(f"usage: check GROUP {{{'|'.join(CHECKABLE)}}}")
    aut = defs.group(args[0])
    prop = args[1]
    gens = [mealy.Element(aut, i) for i in range(1, len(aut))]
    detail = None
    if prop == "self-similar":
        names = set(range(len(aut)))
        verdict = all(c in names for i in names for c in aut.children(i))
    elif prop == "finite-state":
        closure = mealy.state_closure(gens, max_states=opts.max_states) if gens else aut
        verdict, detail = True, len(closure)
    elif prop == "persistent":
        detail = mealy.is_persistent_group(aut)
        verdict = detail is not None
    else:
        verdict = mealy.is_coarsely_diagonal_upto(aut, opts.max_order, gens)
        detail = opts.max_order
    payload = {"group": args[0], "property": prop, "holds": verdict, "detail": detail}
    text = ("yes" if verdict else "no") + (f" ({detail})" if detail is not None else "")
    out = payload if opts.out == "json" else text
    if not verdict:
        raise Violated(out)
    return out


def cmd_persist(defs: Definitions, args, opts):
    if not args:
        raise ParseError("usage: persist GROUP [i]")
    src = defs.group(args[0])
    named = [mealy.Element(src, i) for i in sorted(src.names) if i != 0]
    aut = mealy.persist_extend(src)
    target = int(args[1]) if len(args) > 1 else aut.d
    if not 1 <= target <= aut.d:
        raise ParseError(f"target letter must be in 1..{aut.d}")
    if target != aut.d:
        aut = mealy.conjugate_by_transposition(aut, target, aut.d)
    roots = [aut[x.name] for x in named] or aut.states()
    return _automaton_output(aut, roots, opts, {"persistent_at": mealy.is_persistent_group(aut)})


def cmd_compile_agl(defs: Definitions, args, opts):
    if len(args) != 1 or args[0] not in defs.agl_gens:
        raise ParseError("usage: compile-agl AGL_GROUP")
    gens = defs.agl_gens[args[0]]
    aut = agl.compile(list(gens.values()), max_states=opts.max_states, names=list(gens))
    roots = [aut[x] for x in gens]
    extra = {"pairs": {mealy.Element(aut, i).name: str(aut.payload[i])
                       for i in aut.reachable([r.idx for r in roots])}}
    return _automaton_output(aut, roots, opts, extra)


def _automaton_output(aut, roots, opts, extra):
    if opts.out == "dot":
        return mealy.to_dot(aut, roots)
    text = mealy.format_automaton(aut, roots)
    if opts.out == "json":
        return {"d": aut.d, "definitions": text.splitlines(), **extra}
    return text


def cmd_rover(defs: Definitions, args, opts):
    ops = {"mul": 2, "inv": 1, "eq": 2, "retract": 1, "abelianize": 1}
    if len(args) < 2 or args[1] not in ops or len(args) != 2 + ops[args[1]]:
        raise ParseError("usage: rover GROUP {mul F G | inv F | eq F G | retract F | abelianize F}")
    aut = defs.group(args[0])
    op = args[1]
    els = [defs.rover_element(aut, x) for x in args[2:]]
    if op == "mul":
        result = rover.format_element(rover.reduce(rover.multiply(*els)))
    elif op == "inv":
        result = rover.format_element(rover.reduce(rover.invert(els[0])))
    elif op == "eq":
        result = rover.equals(*els)
    elif op == "retract":
        result = rover.quasi_retract(els[0]).name
    else:
        result = list(rover.abelianization_image(els[0]))
    if opts.out == "json":
        return {"op": op, "result": result}
    if isinstance(result, list):
        return " ".join(map(str, result))
    if isinstance(result, bool):
        return "true" if result else "false"
    return result


def cmd_complex(defs: Definitions, args, opts):
    if len(args) not in (2, 3):
        raise ParseError("usage: complex K D [GROUP]")
    try:
        k, d = int(args[0]), int(args[1])
    except ValueError as exc:
        raise ParseError("K and D must be integers") from exc
    aut = defs.group(args[2]) if len(args) == 3 else None
    X = flagcomplex.FlagComplex(k, d, aut, max_order=opts.max_order)
    rep = flagcomplex.report(X)
    out = rep if opts.out == "json" else "\n".join(f"{key}: {val}" for key, val in rep.items())
    if not rep["ok"]:
        raise Violated(out)
    return out


def cmd_suite(defs: Definitions, args, opts):
    rep = suite.run_suite(seed=opts.seed, samples=opts.samples)
    out = rep if opts.out == "json" else "\n".join(
        f"{'PASS' if c['pass'] else 'FAIL'} {name}" for name, c in rep["checks"].items())
    if not rep["pass"]:
        raise Violated(out)
    return out


COMMANDS = {
    "states": cmd_states,
    "eval": cmd_eval,
    "check": cmd_check,
    "persist": cmd_persist,
    "compile-agl": cmd_compile_agl,
    "rover": cmd_rover,
    "complex": cmd_complex,
    "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="selfsim", description="Self-similar groups and their Röver-Nekrashevych groups.")
    ap.add_argument("--defs", help="YAML definitions file")
    ap.add_argument("--cmd", required=True, choices=sorted(COMMANDS))
    ap.add_argument("--out", default="text", choices=("text", "json", "dot"))
    ap.add_argument("--max-states", type=int, default=10_000)
    ap.add_argument("--max-order", type=int, default=32)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("args", nargs="*")
    return ap


def _emit(result, opts, stream):
    if opts.out == "json":
        if not isinstance(result, dict):
            result = {"result": result}
        result = {"schema": 1, **result}
        stream.write(json.dumps(result, indent=2, sort_keys=True) + "\n")
    else:
        stream.write(str(result).rstrip("\n") + "\n")


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        opts = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    for flag in ("max_states", "max_order", "samples"):
        if getattr(opts, flag) < 1:
            stderr.write(f"error: --{flag.replace('_', '-')} must be positive\n")
            return EXIT_PARSE
    try:
        defs = Definitions.load(opts.defs, opts.max_states)
        result = COMMANDS[opts.cmd](defs, opts.args, opts)
    except Violated as exc:
        _emit(exc.payload, opts, stdout)
        return EXIT_VIOLATED
    except rover.NotPersistent as exc:
        stderr.write(f"{exc}\n")
        return EXIT_VIOLATED
    except (mealy.BudgetExceeded, series.BudgetExceeded) as exc:
        stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (ParseError, FieldError, mealy.MealyError, rover.RoverError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    _emit(result, opts, stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
