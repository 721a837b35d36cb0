"""Ref-word automata and the ground-truth membership oracle.

:func:`build_ref_nfa` compiles a rewb into an epsilon-free, trimmed NFA over
letters, brackets and reference numbers.  :func:`oracle_match` and
:func:`oracle_language` decide membership in the rewb's language by a
breadth-first search over (NFA state, input position, capture environment,
open captures).  Every capture's content is a factor of the input, so the
search space is finite for a fixed input or length bound.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import syntax as sx
from .refword import (
    Kind,
    RefSymbol,
    Word,
    close_bracket,
    is_matching,
    letter,
    open_bracket,
    ref,
)


@dataclass(frozen=True)
class RefNfa:
    """Trimmed epsilon-free NFA.  States are 0..num_states-1, start is 0."""

    num_states: int
    start: int
    finals: frozenset
    transitions: tuple  # transitions[q] = tuple of (RefSymbol, target), sorted
    letters: tuple
    k: int

    def edges(self) -> Iterable[tuple[int, RefSymbol, int]]:
        for q, outs in enumerate(self.transitions):
            for sym, target in outs:
                yield q, sym, target

    def accepts(self, v: Sequence[RefSymbol]) -> bool:
        current = {self.start}
        for sym in v:
            current = {t for q in current for s, t in self.transitions[q] if s == sym}
            if not current:
                return False
        return bool(current & self.finals)


class _Thompson:
    def __init__(self):
        self.count = 0
        self.edges: list[tuple[int, Optional[RefSymbol], int]] = []

    def new(self) -> int:
        self.count += 1
        return self.count - 1

    def build(self, node: sx.Rewb) -> tuple[int, int]:
        s, f = self.new(), self.new()
        if isinstance(node, sx.Literal):
            self.edges.append((s, letter(node.symbol), f))
        elif isinstance(node, sx.Epsilon):
            self.edges.append((s, None, f))
        elif isinstance(node, sx.Reference):
            self.edges.append((s, ref(node.label), f))
        elif isinstance(node, sx.Concat):
            ls, lf = self.build(node.left)
            rs, rf = self.build(node.right)
            self.edges += [(s, None, ls), (lf, None, rs), (rf, None, f)]
        elif isinstance(node, sx.Alt):
            for part in (node.left, node.right):
                ps, pf = self.build(part)
                self.edges += [(s, None, ps), (pf, None, f)]
        elif isinstance(node, sx.Star):
            cs, cf = self.build(node.child)
            self.edges += [(s, None, f), (s, None, cs), (cf, None, cs), (cf, None, f)]
        elif isinstance(node, sx.Capture):
            cs, cf = self.build(node.child)
            self.edges += [
                (s, open_bracket(node.label), cs),
                (cf, close_bracket(node.label), f),
            ]
        else:
            raise TypeError(f"not a rewb node: {node!r}")
        return s, f


def build_ref_nfa(ast: sx.Rewb) -> RefNfa:
    """Compile ``ast`` into a trimmed NFA recognizing its ref-word language."""
    th = _Thompson()
    start, accept = th.build(ast)

    eps: dict[int, list[int]] = {}
    sym_edges: dict[int, list[tuple[RefSymbol, int]]] = {}
    for src, sym, dst in th.edges:
        if sym is None:
            eps.setdefault(src, []).append(dst)
        else:
            sym_edges.setdefault(src, []).append((sym, dst))

    def closure(q: int) -> set[int]:
        seen = {q}
        todo = [q]
        while todo:
            for nxt in eps.get(todo.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        return seen

    # epsilon elimination: only the start state and symbol-edge targets survive
    closures = {}
    new_edges: dict[int, set[tuple[RefSymbol, int]]] = {}
    todo = [start]
    visited = {start}
    while todo:
        q = todo.pop()
        closures[q] = closure(q)
        outs = {e for p in closures[q] for e in sym_edges.get(p, ())}
        new_edges[q] = outs
        for _, t in outs:
            if t not in visited:
                visited.add(t)
                todo.append(t)
    finals = {q for q in visited if accept in closures[q]}

    # coaccessibility
    reverse: dict[int, set[int]] = {}
    for q, outs in new_edges.items():
        for _, t in outs:
            reverse.setdefault(t, set()).add(q)
    live = set(finals)
    todo = list(finals)
    while todo:
        for p in reverse.get(todo.pop(), ()):
            if p not in live:
                live.add(p)
                todo.append(p)

    # renumber in BFS order with sorted edges for determinism
    order = {start: 0}
    queue = deque([start])
    while queue:
        q = queue.popleft()
        for sym, t in sorted(new_edges[q]):
            if t in live and t not in order:
                order[t] = len(order)
                queue.append(t)
    transitions = [()] * len(order)
    for q, idx in order.items():
        transitions[idx] = tuple(
            sorted((sym, order[t]) for sym, t in new_edges[q] if t in live)
        )
    return RefNfa(
        num_states=len(order),
        start=0,
        finals=frozenset(order[q] for q in finals if q in order),
        transitions=tuple(transitions),
        letters=sx.alphabet(ast),
        k=sx.max_label(ast),
    )


def is_trim(nfa: RefNfa) -> bool:
    """Every state is reachable from the start and can reach a final state."""
    reach = {nfa.start}
    todo = [nfa.start]
    while todo:
        for _, t in nfa.transitions[todo.pop()]:
            if t not in reach:
                reach.add(t)
                todo.append(t)
    coreach = set(nfa.finals)
    changed = True
    while changed:
        changed = False
        for q in range(nfa.num_states):
            if q not in coreach and any(t in coreach for _, t in nfa.transitions[q]):
                coreach.add(q)
                changed = True
    return reach == coreach == set(range(nfa.num_states))


def _paths(nfa: RefNfa, max_len: int):
    """All (state, word) pairs reachable by paths of length <= max_len."""
    layer = {(nfa.start, ())}
    seen = set(layer)
    for _ in range(max_len):
        nxt = set()
        for q, word in layer:
            for sym, t in nfa.transitions[q]:
                item = (t, word + (sym,))
                if item not in seen:
                    seen.add(item)
                    nxt.add(item)
        layer = nxt
    return seen


def enumerate_refwords(nfa: RefNfa, max_len: int) -> set[tuple[RefSymbol, ...]]:
    """Accepted ref-words with at most ``max_len`` symbols."""
    return {word for q, word in _paths(nfa, max_len) if q in nfa.finals}


def nfa_reachable_strings_matching_check(nfa: RefNfa, max_len: int) -> bool:
    """Every path label from the start state (length <= max_len) is matching."""
    return all(is_matching(word) for _, word in _paths(nfa, max_len))


# ---------------------------------------------------------------------------
# Oracle


@dataclass(frozen=True)
class OracleResult:
    accepted: bool
    witness: Optional[tuple] = None  # ref-word whose dereference is the input
    explored: int = 0

    def __bool__(self) -> bool:
        return self.accepted


def _env_get(env: tuple, label: int) -> Word:
    return env[label - 1] if label <= len(env) else ()


def _env_set(env: tuple, label: int, value: Word) -> tuple:
    if label > len(env):
        env = env + ((),) * (label - len(env))
    return env[: label - 1] + (value,) + env[label:]


def _successors(nfa: RefNfa, state: int, env: tuple, opened: tuple, consumed: Word):
    """Yield (symbol, next_state, produced_word, env, opened).

    ``consumed`` is the input read so far; captured contents are slices of it.
    Letter edges produce their letter, references produce the bound content.
    """
    for sym, t in nfa.transitions[state]:
        kind = sym.kind
        if kind is Kind.LETTER:
            yield sym, t, (sym.value,), env, opened
        elif kind is Kind.OPEN:
            yield sym, t, (), env, opened + ((sym.value, len(consumed)),)
        elif kind is Kind.CLOSE:
            if not opened or opened[-1][0] != sym.value:
                continue
            begin = opened[-1][1]
            yield sym, t, (), _env_set(env, sym.value, consumed[begin:]), opened[:-1]
        else:
            yield sym, t, _env_get(env, sym.value), env, opened


def _rebuild(parents: dict, node) -> tuple:
    path = []
    while parents[node] is not None:
        node, sym = parents[node]
        path.append(sym)
    return tuple(reversed(path))


def oracle_match(ast: sx.Rewb, w: Sequence[str], nfa: Optional[RefNfa] = None) -> OracleResult:
    """Decide ``w in L(ast)``; on success also return a witness ref-word."""
    nfa = nfa or build_ref_nfa(ast)
    w = tuple(w)
    n = len(w)
    # configuration: (state, position, env, open captures)
    root = (nfa.start, 0, (), ())
    parents = {root: None}
    queue = deque([root])
    while queue:
        node = queue.popleft()
        state, pos, env, opened = node
        if pos == n and state in nfa.finals and not opened:
            return OracleResult(True, _rebuild(parents, node), len(parents))
        for sym, t, produced, env2, opened2 in _successors(nfa, state, env, opened, w[:pos]):
            end = pos + len(produced)
            if end > n or w[pos:end] != produced:
                continue
            child = (t, end, env2, opened2)
            if child not in parents:
                parents[child] = (node, sym)
                queue.append(child)
    return OracleResult(False, None, len(parents))


def oracle_language(
    ast: sx.Rewb,
    letters: Sequence[str],
    max_len: int,
    nfa: Optional[RefNfa] = None,
) -> dict:
    """All members of L(ast) over ``letters`` with length <= max_len.

    Returns a dict mapping each member word to a shortest-search witness
    ref-word.  This is the per-word oracle search run once over the tree of
    input prefixes.
    """
    nfa = nfa or build_ref_nfa(ast)
    allowed = set(letters)
    root = (nfa.start, (), (), ())
    parents = {root: None}
    queue = deque([root])
    members: dict = {}
    while queue:
        node = queue.popleft()
        state, consumed, env, opened = node
        if state in nfa.finals and not opened and consumed not in members:
            members[consumed] = _rebuild(parents, node)
        for sym, t, produced, env2, opened2 in _successors(nfa, state, env, opened, consumed):
            if sym.kind is Kind.LETTER and sym.value not in allowed:
                continue
            if len(consumed) + len(produced) > max_len:
                continue
            child = (t, consumed + produced, env2, opened2)
            if child not in parents:
                parents[child] = (node, sym)
                queue.append(child)
    return members
