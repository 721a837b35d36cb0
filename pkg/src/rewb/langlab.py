"""Example languages, bounded language slices and the oracle cross-check."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence, Union

from . import syntax as sx
from .construct import Z0, build_nesa, build_nsa, derive_budget
from .machine import (
    INTERIOR,
    MOVE,
    NESA,
    PUSH,
    TOP,
    Action,
    Budget,
    Context,
    Rule,
    StackMachine,
    accepts,
    explore_language,
)
from .refnfa import build_ref_nfa, oracle_language
from .refword import deref, format_word, parse_refword

EXAMPLES = ("ww", "square", "cubic", "anbn_nesa")

_REWBS = {
    "ww": r"(1:(a+b)*)\1",
    "square": r"((1:\2)(2:\1a))*",
    "cubic": r"((1:\4a)(2:\3)(3:\2a)(4:\1\3))*",
}


def anbn_nesa() -> StackMachine:
    """Three-state nonerasing machine for a^n b^n.

    q0 pushes a star per a, q1 walks down one cell per b, and q2 is entered
    once the pointer is back on Z0.  The exit to q2 is allowed both from the
    interior and from the top so that the empty word (pointer never leaves
    the top) is accepted as well.
    """
    star = "⋆"
    rules = [
        Rule("q0", "a", Context(TOP), Action(PUSH, (star,)), "q0"),
        Rule("q0", None, Context(TOP), Action(MOVE, "S"), "q1"),
        Rule("q1", "b", Context(INTERIOR, star), Action(MOVE, "L"), "q1"),
        Rule("q1", "b", Context(TOP, star), Action(MOVE, "L"), "q1"),
        Rule("q1", None, Context(INTERIOR, Z0), Action(MOVE, "S"), "q2"),
        Rule("q1", None, Context(TOP, Z0), Action(MOVE, "S"), "q2"),
    ]
    return StackMachine(
        name="anbn_nesa",
        flavor=NESA,
        states=("q0", "q1", "q2"),
        input_alphabet=("a", "b"),
        stack_alphabet=(Z0, star),
        start="q0",
        initial_stack_symbol=Z0,
        finals=frozenset({"q2"}),
        rules=tuple(rules),
    )


def example(name: str) -> Union[sx.Rewb, StackMachine]:
    if name == "anbn_nesa":
        return anbn_nesa()
    if name not in _REWBS:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    return sx.parse(_REWBS[name])


def all_words(alphabet: Sequence[str], max_len: int):
    """Every word of length <= max_len, shortest first, lexicographic within."""
    for n in range(max_len + 1):
        yield from product(alphabet, repeat=n)


@dataclass(frozen=True)
class Mismatch:
    word: tuple
    kind: str  # "missed": a member was not accepted; "spurious": a nonmember was
    detail: str = ""


@dataclass
class SliceReport:
    """Membership over all words up to ``max_len``.

    ``refutation`` tells how to read non-membership: ``exact`` for the
    oracle, ``bounded`` for machine search, where a missing word only means
    no accepting run exists within the budget.  ``exhaustive`` is False
    when the machine search stopped on the step limit.
    """

    acceptor: str
    alphabet: tuple
    max_len: int
    accepted: list
    refutation: str
    exhaustive: bool = True
    outcomes: dict = field(default_factory=dict)
    mismatches: list = field(default_factory=list)
    checked: list = field(default_factory=list)
    traces: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def accepted_lengths(self) -> list[int]:
        return sorted({len(w) for w in self.accepted})

    def to_json(self) -> dict:
        return {
            "acceptor": self.acceptor,
            "alphabet": list(self.alphabet),
            "max_len": self.max_len,
            "refutation": self.refutation,
            "exhaustive": self.exhaustive,
            "accepted": [format_word(w) for w in self.accepted],
            "checked": list(self.checked),
            "mismatches": [
                {"word": format_word(m.word), "kind": m.kind, "detail": m.detail}
                for m in self.mismatches
            ],
        }

    def to_text(self) -> str:
        lines = [
            f"acceptor: {self.acceptor}",
            f"alphabet: {' '.join(self.alphabet)}  max length: {self.max_len}",
            f"accepted ({len(self.accepted)}): "
            + (", ".join(format_word(w) for w in self.accepted) or "none"),
            f"non-membership: {self.refutation}"
            + ("" if self.exhaustive else " (step limit reached)"),
        ]
        if self.checked:
            lines.append(f"checked: {', '.join(self.checked)}")
        if self.mismatches:
            lines.append(f"mismatches ({len(self.mismatches)}):")
            lines += [f"  {m.kind}: {format_word(m.word)} {m.detail}".rstrip() for m in self.mismatches]
        else:
            lines.append("mismatches: none")
        return "\n".join(lines)


def _sort_words(words) -> list:
    return sorted(words, key=lambda w: (len(w), w))


def language_slice(
    acceptor: Union[sx.Rewb, StackMachine],
    alphabet: Sequence[str],
    max_len: int,
    budget: Budget = Budget(),
) -> SliceReport:
    """Members of the acceptor's language among words of length <= max_len."""
    alphabet = tuple(alphabet)
    if isinstance(acceptor, StackMachine):
        found = explore_language(acceptor, alphabet, max_len, budget)
        accepted = _sort_words(found.accepted)
        return SliceReport(
            acceptor.name, alphabet, max_len, accepted, "bounded", found.exhausted,
            outcomes={w: "Accepted" for w in accepted},
        )
    members = oracle_language(acceptor, alphabet, max_len)
    accepted = _sort_words(members)
    return SliceReport(
        sx.pretty_print(acceptor), alphabet, max_len, accepted, "exact",
        outcomes={w: "member" for w in accepted},
    )


@dataclass(frozen=True)
class BudgetPolicy:
    """How crosscheck budgets machines.

    Members get the witness-derived budget.  The search for spurious
    acceptances uses ``negative_factor`` times the largest member budget
    (or ``floor`` when the slice has no members).
    """

    negative_factor: int = 4
    floor: Budget = Budget(max_steps=50_000, max_cells=16)

    def negative_budget(self, member_budgets: Sequence[Budget]) -> Budget:
        if not member_budgets:
            return self.floor
        cells = max(b.max_cells for b in member_budgets)
        steps = max(b.max_steps for b in member_budgets)
        return Budget(
            max(steps * self.negative_factor, self.floor.max_steps),
            max(cells * self.negative_factor, self.floor.max_cells),
        )


def check_machine(
    machine: StackMachine,
    members: dict,
    alphabet: Sequence[str],
    max_len: int,
    policy: BudgetPolicy,
    report: SliceReport,
    keep_traces: bool = False,
) -> None:
    """Compare ``machine`` with the oracle's ``members`` and record mismatches."""
    budgets = []
    for w, witness in members.items():
        budget = derive_budget(witness, w)
        budgets.append(budget)
        result = accepts(machine, w, budget)
        report.outcomes[(machine.name, w)] = result.outcome
        if not result.accepted:
            report.mismatches.append(Mismatch(w, "missed", f"by {machine.name} under {budget}"))
        elif keep_traces:
            report.traces.append((machine, w, result.trace))
    negative = policy.negative_budget(budgets)
    found = explore_language(machine, alphabet, max_len, negative)
    report.exhaustive = report.exhaustive and found.exhausted
    for w in _sort_words(found.accepted):
        if w not in members:
            report.outcomes[(machine.name, w)] = "Accepted"
            report.mismatches.append(Mismatch(w, "spurious", f"by {machine.name}"))
    report.checked.append(machine.name)


def crosscheck(
    ast: sx.Rewb,
    alphabet: Sequence[str],
    max_len: int,
    policy: BudgetPolicy = BudgetPolicy(),
    with_nesa: bool = True,
    keep_traces: bool = False,
) -> SliceReport:
    """Compare the oracle slice with the compiled NSA (and NESA when allowed)."""
    alphabet = tuple(alphabet)
    nfa = build_ref_nfa(ast)
    members = oracle_language(ast, alphabet, max_len, nfa)
    report = SliceReport(
        sx.pretty_print(ast), alphabet, max_len, _sort_words(members), "bounded",
    )
    machines = [build_nsa(ast, alphabet)]
    if with_nesa and not sx.has_captured_reference(ast):
        machines.append(build_nesa(ast, alphabet))
    for m in machines:
        check_machine(m, members, alphabet, max_len, policy, report, keep_traces)
    return report


def cubic_length(n: int) -> int:
    return n * (n + 7) * (2 * n + 1) // 6


def cubic_refword(n: int) -> tuple:
    return parse_refword("[1 4 a ]1 [2 3 ]2 [3 2 a ]3 [4 1 3 ]4") * n


def derefword_calc_cubic(n: int) -> tuple[tuple, tuple]:
    """The ref-word b_n for the cubic rewb and its dereference.

    Raises AssertionError if the length disagrees with n(n+7)(2n+1)/6.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    b = cubic_refword(n)
    word = deref(b)
    if word is None or len(word) != cubic_length(n):
        raise AssertionError(f"dereference of b_{n} has the wrong length")
    return b, word
