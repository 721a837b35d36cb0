"""Larsen's hierarchy x_0, x_1, ... and hand-built nonerasing machines for it.

x_0 = (a0l a0m a0r)*
x_j = (ajl (j: x_{j-1}) ajm \\j ajr)*

Level numbers in symbol names and state names follow the customary
presentation, where x_j captures with label j-1; since labels here start
at 1, x_j uses label j internally.  Stack symbols use the internal labels.

The machine for level i chains one loop per level.  Every reference gets a
dereference gadget; a gadget for label l is reached through a call path
(the chain of labels being dereferenced, outermost first), because the
content of capture l can itself contain references to smaller labels.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from . import syntax as sx
from .construct import Z0
from .machine import INTERIOR, MOVE, NESA, PUSH, TOP, Action, Context, Rule, StackMachine


def symbols(j: int) -> tuple[str, str, str]:
    return (f"a{j}l", f"a{j}m", f"a{j}r")


def larsen_alphabet(i: int) -> tuple[str, ...]:
    return tuple(s for j in range(i + 1) for s in symbols(j))


def larsen_rewb(i: int) -> sx.Rewb:
    if i < 0:
        raise ValueError("level must be nonnegative")
    left, mid, right = (sx.Literal(s) for s in symbols(0))
    node: sx.Rewb = sx.Star(sx.Concat(sx.Concat(left, mid), right))
    for j in range(1, i + 1):
        left, mid, right = (sx.Literal(s) for s in symbols(j))
        body = sx.Concat(left, sx.Capture(j, node))
        body = sx.Concat(sx.Concat(body, mid), sx.Reference(j))
        node = sx.Star(sx.Concat(body, right))
    return node


def label_note(i: int) -> str:
    """Human-readable note on how displayed levels map to internal labels."""
    if i == 0:
        return "no captures"
    pairs = ", ".join(f"level {j - 1} -> label {j}" for j in range(1, i + 1))
    return f"capture labels shifted by one: {pairs}"


def _call_paths(top: int) -> list[tuple[int, ...]]:
    """Decreasing label sequences starting at ``top``."""
    lower = range(top - 1, 0, -1)
    return [
        (top,) + combo
        for n in range(top)
        for combo in combinations(lower, n)
    ]


def _gadget_name(kind: str, path: tuple[int, ...]) -> str:
    name = f"{kind}{path[-1] - 1}^{path[0]}"
    if len(path) > 2:
        name += "[" + ",".join(str(l - 1) for l in path[1:-1]) + "]"
    return name


@lru_cache(maxsize=None)
def larsen_nesa(i: int) -> StackMachine:
    if i < 0:
        raise ValueError("level must be nonnegative")
    letters = larsen_alphabet(i)
    brackets = tuple(s for l in range(1, i + 1) for s in (f"[{l}", f"]{l}"))
    numbers = tuple(str(l) for l in range(1, i + 1))
    gamma = (*letters, *brackets, *numbers, Z0)
    states: dict[str, None] = {}
    rules: list[Rule] = []

    def add(src, read, context, action, dst):
        states.setdefault(src)
        states.setdefault(dst)
        rules.append(Rule(src, read, context, action, dst))

    def push(src, read, sym, dst):
        add(src, read, Context(TOP), Action(PUSH, (sym,)), dst)

    def move(src, context, d, dst):
        add(src, None, context, Action(MOVE, d), dst)

    def loop(j):
        return f"q0^{j}"

    states.setdefault(loop(i))
    # level 0: the three-letter loop, one letter per rule
    l0, m0, r0 = symbols(0)
    push(loop(0), l0, l0, "t1^0")
    push("t1^0", m0, m0, "t2^0")
    push("t2^0", r0, r0, loop(0))

    for j in range(1, i + 1):
        lj, mj, rj = symbols(j)
        s1, s2, s3, s4 = (f"s{n}^{j}" for n in range(1, 5))
        push(loop(j), lj, lj, s1)
        push(s1, None, f"[{j}", loop(j - 1))
        push(loop(j - 1), None, f"]{j}", s2)
        push(s2, mj, mj, s3)
        push(s3, None, str(j), _gadget_name("c", (j,)))
        push(s4, rj, rj, loop(j))

        for path in _call_paths(j):
            l = path[-1]
            c, e, r = (_gadget_name(x, path) for x in "cer")
            # call: walk left to the nearest [l
            for z in gamma:
                if z != f"[{l}":
                    move(c, Context(TOP, z), "L", c)
                    move(c, Context(INTERIOR, z), "L", c)
            move(c, Context(INTERIOR, f"[{l}"), "R", e)
            # execute: compare letters, skip inner brackets, recurse on numbers
            for a in letters:
                add(e, a, Context(INTERIOR, a), Action(MOVE, "R"), e)
            for lower in range(1, l):
                move(e, Context(INTERIOR, f"[{lower}"), "R", e)
                move(e, Context(INTERIOR, f"]{lower}"), "R", e)
                move(e, Context(INTERIOR, str(lower)), "L", _gadget_name("c", path + (lower,)))
            move(e, Context(INTERIOR, f"]{l}"), "R", r)
            # return: walk right to the number that started this call
            for z in gamma:
                if z != str(l):
                    move(r, Context(INTERIOR, z), "R", r)
            if len(path) == 1:
                move(r, Context(TOP, str(l)), "S", s4)
            else:
                move(r, Context(INTERIOR, str(l)), "R", _gadget_name("e", path[:-1]))

    return StackMachine(
        name=f"larsen_nesa({i})",
        flavor=NESA,
        states=tuple(states),
        input_alphabet=letters,
        stack_alphabet=gamma,
        start=loop(i),
        initial_stack_symbol=Z0,
        finals=frozenset({loop(i)}),
        rules=tuple(rules),
    )
