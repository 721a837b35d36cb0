"""One-way nondeterministic stack automata: SA, NESA and NSA.

The stack tape is stored flat.  ``#`` is implicit at index -1; the tape
itself holds stack symbols, substack bottoms ``¢`` and substack tops ``$``,
and always ends with the outermost ``$``.  The accessible region is
everything left of the leftmost ``$``; its last cell is the current top.
The pointer is the index of the cell being read (-1 for ``#``).  Rendered
traces put ``↾`` right after the pointed cell, as in ``#Z0a↾$``.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence

CENT = "¢"
DOLLAR = "$"
BOTTOM = "#"

SA, NESA, NSA = "SA", "NESA", "NSA"
FLAVORS = (SA, NESA, NSA)

TOP, INTERIOR, AT_BOTTOM, EMPTY_SUBSTACK = "top", "interior", "bottom", "empty_substack"
CONTEXT_KINDS = (TOP, INTERIOR, AT_BOTTOM, EMPTY_SUBSTACK)

REWRITE, PUSH, MOVE, CREATE, DESTROY = "rewrite", "push", "move", "create", "destroy"
ACTION_KINDS = (REWRITE, PUSH, MOVE, CREATE, DESTROY)

_DIRECTION = {"L": -1, "S": 0, "R": 1}


@dataclass(frozen=True)
class Context:
    """What the pointer must be reading for a rule to apply.

    ``symbol=None`` on a top or interior context matches any stack symbol
    (never ``¢``); it keeps rules such as ``$ -> a$`` to one entry.
    """

    kind: str
    symbol: Optional[str] = None

    def __post_init__(self):
        if self.kind not in CONTEXT_KINDS:
            raise ValueError(f"unknown context kind {self.kind!r}")


@dataclass(frozen=True)
class Action:
    """Stack effect of a rule.

    rewrite: replace the top symbol by ``payload`` (a tuple, possibly empty).
    push: shorthand for rewriting the top symbol Z by Z + payload.
    move: shift the pointer by ``payload`` in L/S/R.
    create: embed the substack ``¢ payload $`` in front of the pointed cell.
    destroy: remove an empty substack at the top and resume on the next cell.
    """

    kind: str
    payload: object = None

    def __post_init__(self):
        if self.kind not in ACTION_KINDS:
            raise ValueError(f"unknown action kind {self.kind!r}")
        if self.kind == MOVE and self.payload not in _DIRECTION:
            raise ValueError(f"move needs L, S or R, got {self.payload!r}")
        if self.kind in (REWRITE, PUSH, CREATE):
            object.__setattr__(self, "payload", tuple(self.payload or ()))


@dataclass(frozen=True)
class Rule:
    source: str
    read: Optional[str]  # input symbol consumed, None to keep the cursor still
    context: Context
    action: Action
    target: str

    def label(self) -> str:
        """Edge label in the ``read / context -> action`` style."""
        read = self.read if self.read is not None else "ε"
        sym = self.context.symbol if self.context.symbol is not None else "Z"
        ctx = {
            TOP: f"{sym}$",
            INTERIOR: sym,
            AT_BOTTOM: BOTTOM,
            EMPTY_SUBSTACK: f"{CENT}$",
        }[self.context.kind]
        kind, payload = self.action.kind, self.action.payload
        if kind == REWRITE:
            act = "".join(payload) + "$"
        elif kind == PUSH:
            act = sym + "".join(payload) + "$"
        elif kind == MOVE:
            act = payload
        elif kind == CREATE:
            act = f"{CENT}{''.join(payload)}$"
        else:
            act = "destroy"
        return f"{read} / {ctx} → {act}"


class Configuration(NamedTuple):
    state: str
    pos: int
    tape: tuple
    pointer: int

    @property
    def top_index(self) -> int:
        """Index of the leftmost ``$``."""
        return self.tape.index(DOLLAR)


@dataclass(frozen=True)
class Budget:
    max_steps: int = 1_000_000
    max_cells: int = 10_000

    def __post_init__(self):
        if self.max_steps <= 0 or self.max_cells <= 0:
            raise ValueError("budget values must be positive")


@dataclass(frozen=True)
class StackMachine:
    name: str
    flavor: str
    states: tuple
    input_alphabet: tuple
    stack_alphabet: tuple
    start: str
    initial_stack_symbol: str
    finals: frozenset
    rules: tuple

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        object.__setattr__(self, "finals", frozenset(self.finals))

    @cached_property
    def _index(self) -> dict:
        index: dict = {}
        for rule in self.rules:
            key = (rule.source, rule.context.kind, rule.context.symbol)
            index.setdefault(key, []).append(rule)
        return index

    def with_flavor(self, flavor: str) -> "StackMachine":
        return StackMachine(
            self.name, flavor, self.states, self.input_alphabet, self.stack_alphabet,
            self.start, self.initial_stack_symbol, self.finals, self.rules,
        )

    def initial(self) -> Configuration:
        return Configuration(self.start, 0, (self.initial_stack_symbol, DOLLAR), 0)

    def is_accepting(self, c: Configuration, n: int) -> bool:
        return (
            c.state in self.finals
            and c.pos == n
            and CENT not in c.tape
            and c.tape.index(DOLLAR) == len(c.tape) - 1
        )


class FramingError(RuntimeError):
    """A configuration broke the tape framing; indicates a runtime bug."""


def check_framing(c: Configuration) -> None:
    tape = c.tape
    if not tape or tape[-1] != DOLLAR:
        raise FramingError(f"tape must end with $: {tape}")
    depth = 0
    for cell in tape[:-1]:
        if cell == CENT:
            depth += 1
        elif cell == DOLLAR:
            depth -= 1
            if depth < 0:
                raise FramingError(f"unbalanced $ in {tape}")
    if depth != 0:
        raise FramingError(f"unclosed substack in {tape}")
    if not -1 <= c.pointer < tape.index(DOLLAR):
        raise FramingError(f"pointer {c.pointer} outside accessible region of {tape}")


def current_context(c: Configuration) -> tuple[str, Optional[str]]:
    top = c.tape.index(DOLLAR)
    p = c.pointer
    if p == -1:
        return AT_BOTTOM, BOTTOM
    cell = c.tape[p]
    if p == top - 1:
        if cell == CENT:
            return EMPTY_SUBSTACK, None
        return TOP, cell
    return INTERIOR, cell


def _apply(rule: Rule, c: Configuration, top: int) -> Optional[tuple]:
    """New (tape, pointer) after the stack action, or None if it cannot fire."""
    tape, p = c.tape, c.pointer
    kind, payload = rule.action.kind, rule.action.payload
    if kind == MOVE:
        q = p + _DIRECTION[payload]
        if q < -1 or q > top - 1:
            return None
        return tape, q
    if kind == REWRITE or kind == PUSH:
        if p != top - 1 or p < 0 or tape[p] == CENT:
            return None
        word = (tape[p],) + payload if kind == PUSH else payload
        return tape[:p] + word + tape[p + 1:], p - 1 + len(word)
    if kind == CREATE:
        if p < 0:
            return None
        return tape[:p] + (CENT,) + payload + (DOLLAR,) + tape[p:], p + len(payload)
    # destroy
    if p != top - 1 or tape[p] != CENT or top + 1 >= len(tape) or tape[top + 1] in (DOLLAR, CENT):
        return None
    return tape[:p] + tape[top + 1:], p


def step(m: StackMachine, c: Configuration, w: Sequence[str]) -> list[tuple[Rule, Configuration]]:
    """All successors of ``c`` on input ``w``, paired with the rule used."""
    top = c.tape.index(DOLLAR)
    kind, sym = current_context(c)
    candidates = list(m._index.get((c.state, kind, sym), ()))
    if kind in (TOP, INTERIOR) and sym != CENT:
        candidates += m._index.get((c.state, kind, None), ())
    out = []
    nxt_input = w[c.pos] if c.pos < len(w) else None
    for rule in candidates:
        if rule.read is not None and rule.read != nxt_input:
            continue
        applied = _apply(rule, c, top)
        if applied is None:
            continue
        tape, pointer = applied
        pos = c.pos + (1 if rule.read is not None else 0)
        out.append((rule, Configuration(rule.target, pos, tape, pointer)))
    return out


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a bounded acceptance search.

    ``accepted`` is definitive.  Otherwise no accepting configuration exists
    in the explored space; ``exhausted`` says whether that space was the
    whole cell-bounded space (True) or was cut by the step limit.
    """

    accepted: bool
    trace: Optional[tuple] = None
    rules: Optional[tuple] = None
    expansions: int = 0
    exhausted: bool = True

    @property
    def outcome(self) -> str:
        return "Accepted" if self.accepted else "NotWithinBudget"


def accepts(m: StackMachine, w: Sequence[str], budget: Budget = Budget()) -> SearchResult:
    """Breadth-first acceptance search with configuration deduplication."""
    w = tuple(w)
    n = len(w)
    root = m.initial()
    parents: dict = {root: None}
    if m.is_accepting(root, n):
        return SearchResult(True, (root,), (), 0)
    queue = deque([root])
    expansions = 0
    while queue:
        if expansions >= budget.max_steps:
            return SearchResult(False, expansions=expansions, exhausted=False)
        c = queue.popleft()
        expansions += 1
        for rule, nxt in step(m, c, w):
            if nxt in parents or len(nxt.tape) > budget.max_cells:
                continue
            parents[nxt] = (c, rule)
            if m.is_accepting(nxt, n):
                trace, rules = _backtrack(parents, nxt)
                return SearchResult(True, trace, rules, expansions)
            queue.append(nxt)
    return SearchResult(False, expansions=expansions, exhausted=True)


def _backtrack(parents: dict, node) -> tuple[tuple, tuple]:
    configs, rules = [node], []
    while parents[node] is not None:
        node, rule = parents[node]
        configs.append(node)
        rules.append(rule)
    return tuple(reversed(configs)), tuple(reversed(rules))


@dataclass
class LanguageSearch:
    accepted: dict  # word -> accepting configuration
    expansions: int
    exhausted: bool


def explore_language(
    m: StackMachine,
    letters: Sequence[str],
    max_len: int,
    budget: Budget = Budget(),
) -> LanguageSearch:
    """Bounded search over all inputs of length <= max_len at once.

    Configurations carry the consumed prefix instead of an input position,
    so runs on words sharing a prefix are explored once.  When the search is
    exhausted the result equals running :func:`accepts` on every word with
    the same cell limit.
    """
    allowed = set(letters)
    start = m.initial()
    root = (start.state, (), start.tape, start.pointer)
    seen = {root}
    queue = deque([root])
    accepted: dict = {}
    expansions = 0
    while queue:
        if expansions >= budget.max_steps:
            return LanguageSearch(accepted, expansions, False)
        state, consumed, tape, pointer = queue.popleft()
        expansions += 1
        c = Configuration(state, len(consumed), tape, pointer)
        if m.is_accepting(c, len(consumed)) and consumed not in accepted:
            accepted[consumed] = c
        top = tape.index(DOLLAR)
        kind, sym = current_context(c)
        candidates = list(m._index.get((state, kind, sym), ()))
        if kind in (TOP, INTERIOR) and sym != CENT:
            candidates += m._index.get((state, kind, None), ())
        for rule in candidates:
            if rule.read is not None:
                if rule.read not in allowed or len(consumed) >= max_len:
                    continue
                nxt_consumed = consumed + (rule.read,)
            else:
                nxt_consumed = consumed
            applied = _apply(rule, c, top)
            if applied is None:
                continue
            nxt = (rule.target, nxt_consumed, applied[0], applied[1])
            if nxt in seen or len(applied[0]) > budget.max_cells:
                continue
            seen.add(nxt)
            queue.append(nxt)
    return LanguageSearch(accepted, expansions, True)


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Violation:
    rule: Optional[Rule]
    reason: str


def validate_flavor(m: StackMachine) -> list[Violation]:
    """Check every rule against the machine's flavor; empty list means ok."""
    out: list[Violation] = []
    states = set(m.states)
    gamma = set(m.stack_alphabet)
    sigma = set(m.input_alphabet)
    if m.start not in states:
        out.append(Violation(None, f"start state {m.start!r} not declared"))
    if m.initial_stack_symbol not in gamma:
        out.append(Violation(None, "initial stack symbol not in stack alphabet"))
    for q in m.finals - states:
        out.append(Violation(None, f"final state {q!r} not declared"))
    specials = {CENT, DOLLAR, BOTTOM}
    if gamma & specials:
        out.append(Violation(None, "stack alphabet contains a reserved marker"))
    for rule in m.rules:
        def bad(reason):
            out.append(Violation(rule, reason))

        if rule.source not in states or rule.target not in states:
            bad("undeclared state")
        if rule.read is not None and rule.read not in sigma:
            bad(f"input symbol {rule.read!r} not in alphabet")
        ctx, act = rule.context, rule.action
        if ctx.kind == AT_BOTTOM and ctx.symbol not in (None, BOTTOM):
            bad("bottom context reads only #")
        if ctx.kind in (TOP, INTERIOR) and ctx.symbol is not None:
            if ctx.symbol == CENT:
                if ctx.kind == TOP:
                    bad("¢ on top is the empty-substack context")
                elif m.flavor != NSA:
                    bad("¢ only exists in nested stack automata")
            elif ctx.symbol not in gamma:
                bad(f"stack symbol {ctx.symbol!r} not in stack alphabet")
        if ctx.kind == EMPTY_SUBSTACK and m.flavor != NSA:
            bad("empty-substack context only exists in nested stack automata")
        for sym in act.payload if act.kind in (REWRITE, PUSH, CREATE) else ():
            if sym not in gamma:
                bad(f"written symbol {sym!r} not in stack alphabet")
        if act.kind in (REWRITE, PUSH) and ctx.kind != TOP:
            bad("stack writes happen only at the top")
        if act.kind == REWRITE and ctx.symbol is None:
            bad("rewrite needs a concrete top symbol")
        if act.kind == MOVE:
            allowed = {TOP: "LS", INTERIOR: "LSR", AT_BOTTOM: "R", EMPTY_SUBSTACK: "LS"}[ctx.kind]
            if act.payload not in allowed:
                bad(f"pointer move {act.payload} not allowed in {ctx.kind} context")
        if act.kind in (CREATE, DESTROY) and m.flavor != NSA:
            bad(f"{m.flavor} cannot {act.kind} substacks")
        if act.kind == CREATE and ctx.kind not in (TOP, INTERIOR):
            bad("substacks are created at the top or in the interior")
        if act.kind == DESTROY and ctx.kind != EMPTY_SUBSTACK:
            bad("only an empty substack can be destroyed")
        if m.flavor == NESA and act.kind == REWRITE:
            if not act.payload or act.payload[0] != ctx.symbol:
                bad("nonerasing machine must keep the top symbol")
    return out


def stack_length(c: Configuration) -> int:
    return len(c.tape)


def trace_violations(m: StackMachine, trace: Sequence[Configuration]) -> list[str]:
    """Runtime invariants along a recorded run; empty list when all hold.

    Every configuration is well framed, the input position never decreases,
    and nonerasing machines never shrink the tape.
    """
    problems = []
    prev = None
    for n, c in enumerate(trace):
        try:
            check_framing(c)
        except FramingError as exc:
            problems.append(f"step {n}: {exc}")
        if prev is not None:
            if c.pos < prev.pos:
                problems.append(f"step {n}: input position moved back")
            if m.flavor == NESA and len(c.tape) < len(prev.tape):
                problems.append(f"step {n}: nonerasing tape shrank")
        prev = c
    return problems


# ---------------------------------------------------------------------------
# Rendering and serialization


def render_configuration(c: Configuration, w: Sequence[str]) -> str:
    from .refword import format_word

    cells = list(c.tape)
    pointer_at = c.pointer + 1  # position in the '#'-prefixed list
    parts = [BOTTOM] + cells
    parts.insert(pointer_at + 1, "↾")
    return f"{c.state} | {format_word(tuple(w)[c.pos:])} | {''.join(parts)}"


def trace_render(trace: Iterable[Configuration], w: Sequence[str]) -> str:
    return "\n".join(render_configuration(c, w) for c in trace)


def _rule_to_json(rule: Rule) -> dict:
    context = {"kind": rule.context.kind}
    if rule.context.symbol is not None:
        context["symbol"] = rule.context.symbol
    action: dict = {"kind": rule.action.kind}
    if rule.action.kind in (REWRITE, PUSH, CREATE):
        action["payload"] = list(rule.action.payload)
    elif rule.action.kind == MOVE:
        action["payload"] = rule.action.payload
    return {
        "from": rule.source,
        "read": rule.read,
        "context": context,
        "action": action,
        "to": rule.target,
    }


def to_json(m: StackMachine) -> dict:
    return {
        "name": m.name,
        "flavor": m.flavor,
        "states": list(m.states),
        "input_alphabet": list(m.input_alphabet),
        "stack_alphabet": list(m.stack_alphabet),
        "start": m.start,
        "initial_stack_symbol": m.initial_stack_symbol,
        "finals": sorted(m.finals),
        "rules": [_rule_to_json(r) for r in m.rules],
    }


def from_json(data: dict) -> StackMachine:
    rules = []
    for r in data["rules"]:
        ctx = r["context"]
        act = r["action"]
        rules.append(
            Rule(
                r["from"],
                r.get("read"),
                Context(ctx["kind"], ctx.get("symbol")),
                Action(act["kind"], act.get("payload")),
                r["to"],
            )
        )
    return StackMachine(
        name=data.get("name", "machine"),
        flavor=data["flavor"],
        states=tuple(data["states"]),
        input_alphabet=tuple(data["input_alphabet"]),
        stack_alphabet=tuple(data["stack_alphabet"]),
        start=data["start"],
        initial_stack_symbol=data["initial_stack_symbol"],
        finals=frozenset(data["finals"]),
        rules=tuple(rules),
    )


def dumps(m: StackMachine) -> str:
    return json.dumps(to_json(m), indent=2, ensure_ascii=False)


def loads(text: str) -> StackMachine:
    return from_json(json.loads(text))


def _quote(s: str) -> str:
    return '"{}"'.format(s.replace("\\", "\\\\").replace('"', r"\""))


def to_dot(m: StackMachine) -> str:
    """Graphviz source: states as nodes, rules as labeled edges."""
    lines = [f"digraph {_quote(m.name)} {{", "  rankdir=LR;", '  __start [shape=point];']
    for q in m.states:
        shape = "doublecircle" if q in m.finals else "circle"
        lines.append(f"  {_quote(q)} [shape={shape}];")
    lines.append(f"  __start -> {_quote(m.start)};")
    grouped: dict = {}
    for rule in m.rules:
        grouped.setdefault((rule.source, rule.target), []).append(rule.label())
    for (src, dst), labels in grouped.items():
        lines.append(f"  {_quote(src)} -> {_quote(dst)} [label={_quote(chr(10).join(labels))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
