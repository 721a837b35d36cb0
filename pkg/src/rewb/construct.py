"""Compile rewbs into nested stack automata (and nonerasing ones when possible).

The NSA keeps the ref-word it has guessed so far on its stack.  Letters are
pushed while read, brackets are pushed silently, and a reference number ``i``
starts a dereference: a substack holding the return state is embedded below
``i``, the pointer walks left to the nearest ``[i`` (call mode ``c_i``),
checks the captured letters against the input (execution mode ``e_i``,
which recurses when the capture itself contains a reference), and walks
back right to the marker (return mode ``r_i``), which is popped and the
substack destroyed.

State names: NFA states ``q0, q1, ...``; modes ``c1, e1, r1``; waiting
states ``W_q3``; return bookkeeping ``E_q3_1`` and ``L_e2_1``.  Stack
symbols: letters as-is, ``[1``/``]1`` for brackets, ``1`` for reference
numbers, ``@q3``/``@e2`` for stored return states, ``Z0`` for the initial
symbol.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import syntax as sx
from .machine import (
    CENT,
    CREATE,
    DESTROY,
    EMPTY_SUBSTACK,
    INTERIOR,
    MOVE,
    NESA,
    NSA,
    PUSH,
    REWRITE,
    TOP,
    Action,
    Budget,
    Context,
    Rule,
    StackMachine,
)
from .refnfa import RefNfa, build_ref_nfa
from .refword import Kind, RefSymbol, cnt

Z0 = "Z0"


class CapturedReferenceError(ValueError):
    """The nonerasing construction needs a rewb without captured references."""


def stack_symbol(sym: RefSymbol) -> str:
    if sym.kind is Kind.LETTER:
        return sym.value
    if sym.kind is Kind.OPEN:
        return f"[{sym.value}"
    if sym.kind is Kind.CLOSE:
        return f"]{sym.value}"
    return str(sym.value)


def nfa_state(q: int) -> str:
    return f"q{q}"


def marker(p: str) -> str:
    """Stack symbol storing the state ``p`` to resume after a dereference."""
    return f"@{p}"


def _move(d: str) -> Action:
    return Action(MOVE, d)


def _push(*syms: str) -> Action:
    return Action(PUSH, syms)


class _Builder:
    """Shared plumbing for both constructions."""

    def __init__(self, ast: sx.Rewb, alphabet: Optional[Sequence[str]]):
        self.nfa: RefNfa = build_ref_nfa(ast)
        self.k = self.nfa.k
        letters = list(self.nfa.letters)
        for a in alphabet or ():
            if a not in letters:
                letters.append(a)
        if Z0 in letters:
            raise ValueError("the alphabet may not contain the reserved symbol Z0")
        self.letters = tuple(letters)
        self.brackets = tuple(
            s for i in range(1, self.k + 1) for s in (f"[{i}", f"]{i}")
        )
        self.numbers = tuple(str(i) for i in range(1, self.k + 1))
        self.rules: list[Rule] = []
        self.states: dict[str, None] = {}

    def state(self, name: str) -> str:
        self.states.setdefault(name)
        return name

    def add(self, src, read, context, action, dst) -> None:
        self.rules.append(Rule(self.state(src), read, context, action, self.state(dst)))

    def nfa_rules(self, on_ref) -> None:
        """Letter edges push and read, bracket edges push silently; ``on_ref`` handles numbers."""
        for q in range(self.nfa.num_states):
            self.state(nfa_state(q))
        any_top = Context(TOP)
        for q, sym, t in self.nfa.edges():
            src, dst = nfa_state(q), nfa_state(t)
            if sym.kind is Kind.LETTER:
                self.add(src, sym.value, any_top, _push(sym.value), dst)
            elif sym.is_bracket:
                self.add(src, None, any_top, _push(stack_symbol(sym)), dst)
            else:
                on_ref(src, sym.value, dst)

    def scan_rules(self, i: int, gamma: Sequence[str], markers: Sequence[str], nested: bool) -> None:
        """Call, execution and return mode rules shared by both constructions."""
        c, e, r = f"c{i}", f"e{i}", f"r{i}"
        for p in markers:
            # leave the stored return state on top
            self.add(c, None, Context(TOP, p), _move("L"), c)
        for z in gamma:
            if z not in (f"[{i}", Z0):
                # keep scanning left
                self.add(c, None, Context(INTERIOR, z), _move("L"), c)
        if nested:
            self.add(c, None, Context(INTERIOR, CENT), _move("L"), c)
        # unbound: the reference denotes the empty word
        self.add(c, None, Context(INTERIOR, Z0), _move("R"), r)
        self.add(c, None, Context(INTERIOR, f"[{i}"), _move("R"), e)
        for a in self.letters:
            # compare captured letters with the input
            self.add(e, a, Context(INTERIOR, a), _move("R"), e)
        for j in range(1, self.k + 1):
            if j != i:
                # brackets of other labels are transparent
                self.add(e, None, Context(INTERIOR, f"[{j}"), _move("R"), e)
                self.add(e, None, Context(INTERIOR, f"]{j}"), _move("R"), e)
        self.add(e, None, Context(INTERIOR, f"]{i}"), _move("R"), r)
        # climb back right
        for z in gamma:
            self.add(r, None, Context(INTERIOR, z), _move("R"), r)
        if nested:
            self.add(r, None, Context(INTERIOR, CENT), _move("R"), r)

    def machine(self, name: str, flavor: str, gamma: Sequence[str]) -> StackMachine:
        return StackMachine(
            name=name,
            flavor=flavor,
            states=tuple(self.states),
            input_alphabet=self.letters,
            stack_alphabet=tuple(gamma),
            start=nfa_state(self.nfa.start),
            initial_stack_symbol=Z0,
            finals=frozenset(nfa_state(q) for q in self.nfa.finals),
            rules=tuple(self.rules),
        )


def build_nsa(
    ast: sx.Rewb,
    alphabet: Optional[Sequence[str]] = None,
    prune: bool = True,
) -> StackMachine:
    """Nested stack automaton recognizing L(ast).

    ``alphabet`` extends the input alphabet beyond the rewb's own letters.
    With ``prune`` the return bookkeeping states are only generated for the
    (marker, label) pairs that can occur; without it every pair is present.
    """
    b = _Builder(ast, alphabet)
    k = b.k
    ref_targets: dict[int, set[str]] = {i: set() for i in range(1, k + 1)}

    def on_ref(src: str, i: int, dst: str) -> None:
        b.add(src, None, Context(TOP), _push(str(i)), f"W_{dst}")
        ref_targets[i].add(dst)

    b.nfa_rules(on_ref)
    for q in range(b.nfa.num_states):
        b.state(f"W_{nfa_state(q)}")
    for i in range(1, k + 1):
        for s in ("c", "e", "r"):
            b.state(f"{s}{i}")

    qn = [nfa_state(q) for q in range(b.nfa.num_states)]
    exec_states = [f"e{j}" for j in range(1, k + 1)]
    markers = [marker(p) for p in qn + exec_states]
    gamma = [*b.letters, *b.brackets, *b.numbers, *markers, Z0]

    for q in qn:
        for i in range(1, k + 1):
            if not prune or q in ref_targets[i]:
                # embed the return point below the number
                b.add(f"W_{q}", None, Context(TOP, str(i)), Action(CREATE, (marker(q),)), f"c{i}")
    for i in range(1, k + 1):
        b.scan_rules(i, gamma, markers, nested=True)
        for j in range(1, k + 1):
            if j != i:
                # a number inside a capture: recurse, remembering e_i
                b.add(f"e{i}", None, Context(INTERIOR, str(j)), Action(CREATE, (marker(f"e{i}"),)), f"c{j}")

    for i in range(1, k + 1):
        returns = [(q, True) for q in qn if not prune or q in ref_targets[i]]
        returns += [(e, False) for e in exec_states if not prune or e != f"e{i}"]
        for p, top_level in returns:
            E, L = f"E_{p}_{i}", f"L_{p}_{i}"
            # pop the marker, then destroy the emptied substack
            b.add(f"r{i}", None, Context(TOP, marker(p)), Action(REWRITE, ()), E)
            b.add(E, None, Context(EMPTY_SUBSTACK), Action(DESTROY), L)
            if top_level:
                # back in the NFA with the pointer on top
                b.add(L, None, Context(TOP, str(i)), _move("S"), p)
            else:
                # back in execution mode, past the number
                b.add(L, None, Context(INTERIOR, str(i)), _move("R"), p)
    return b.machine(f"nsa({sx.pretty_print(ast)})", NSA, gamma)


def build_nesa(ast: sx.Rewb, alphabet: Optional[Sequence[str]] = None) -> StackMachine:
    """Nonerasing stack automaton for a rewb without captured references.

    Each reference pushes its number and then the NFA state to resume in;
    that state symbol stays on the stack forever and is skipped by later
    scans.
    """
    if sx.has_captured_reference(ast):
        raise CapturedReferenceError(
            "rewb has a reference inside a capture group; use build_nsa"
        )
    b = _Builder(ast, alphabet)
    k = b.k

    def on_ref(src: str, i: int, dst: str) -> None:
        # push i and the resume state, start calling
        b.add(src, None, Context(TOP), _push(str(i), marker(dst)), f"c{i}")

    b.nfa_rules(on_ref)
    for i in range(1, k + 1):
        for s in ("c", "e", "r"):
            b.state(f"{s}{i}")
    qn = [nfa_state(q) for q in range(b.nfa.num_states)]
    markers = [marker(q) for q in qn]
    gamma = [*b.letters, *b.brackets, *b.numbers, *markers, Z0]
    for i in range(1, k + 1):
        b.scan_rules(i, gamma, markers, nested=False)
        for p in markers:
            # skip stored states
            b.add(f"e{i}", None, Context(INTERIOR, p), _move("R"), f"e{i}")
            # resume without popping
            b.add(f"r{i}", None, Context(TOP, p), _move("S"), p[1:])
    return b.machine(f"nesa({sx.pretty_print(ast)})", NESA, gamma)


def count_states_formula(num_nfa_states: int, k: int) -> int:
    """State count of the unpruned NSA."""
    return num_nfa_states * (2 + 2 * k) + 3 * k + 2 * k * k


@dataclass(frozen=True)
class BudgetModel:
    """Constants of the witness-derived budget; see :func:`derive_budget`."""

    cell_slack: int = 4
    cells_per_ref: int = 3
    step_floor: int = 2_000
    steps_per_cell_sq: int = 100


DEFAULT_MODEL = BudgetModel()


def derive_budget(
    witness: Sequence[RefSymbol],
    w: Sequence[str],
    model: BudgetModel = DEFAULT_MODEL,
) -> Budget:
    """Budget under which the compiled NSA replays the run for ``witness``.

    The replayed run pushes the witness verbatim.  Dereferencing adds one
    three-cell substack per active call, and a chain of nested calls visits
    each reference number of the witness at most once, so the tape never
    exceeds |witness| + 3 cnt(witness) + 2 cells.  Steps scale with cells
    squared since every dereference walks the stack.
    """
    depth = cnt(witness)
    cells = len(witness) + model.cells_per_ref * depth + model.cell_slack
    steps = model.step_floor + model.steps_per_cell_sq * cells * cells
    return Budget(max_steps=steps, max_cells=cells)
