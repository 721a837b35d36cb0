"""Ref-words and dereferencing.

A ref-word is a tuple of :class:`RefSymbol` values: letters, opening and
closing capture brackets, and reference numbers.  Words over the plain
alphabet are tuples of symbol names (``("a", "b")``) so that multi-character
symbols such as ``a0l`` stay atomic.

Text syntax for ref-words is whitespace separated tokens: ``[i`` and ``]i``
for brackets, a bare integer for a reference, ``'name'`` for a named letter;
any other token is split into single-letter symbols (``abc`` is a b c).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .syntax import format_symbol, is_symbol_name

Word = tuple  # tuple[str, ...]


class Kind(enum.IntEnum):
    LETTER = 0
    OPEN = 1
    CLOSE = 2
    REF = 3


@dataclass(frozen=True, order=True)
class RefSymbol:
    kind: Kind
    value: object  # str for letters, int label otherwise

    def __str__(self) -> str:
        if self.kind is Kind.LETTER:
            return format_symbol(self.value)
        if self.kind is Kind.OPEN:
            return f"[{self.value}"
        if self.kind is Kind.CLOSE:
            return f"]{self.value}"
        return str(self.value)

    @property
    def is_letter(self) -> bool:
        return self.kind is Kind.LETTER

    @property
    def is_bracket(self) -> bool:
        return self.kind is Kind.OPEN or self.kind is Kind.CLOSE

    @property
    def is_ref(self) -> bool:
        return self.kind is Kind.REF


def letter(a: str) -> RefSymbol:
    return RefSymbol(Kind.LETTER, a)


def open_bracket(i: int) -> RefSymbol:
    return RefSymbol(Kind.OPEN, i)


def close_bracket(i: int) -> RefSymbol:
    return RefSymbol(Kind.CLOSE, i)


def ref(i: int) -> RefSymbol:
    return RefSymbol(Kind.REF, i)


# ---------------------------------------------------------------------------
# Text syntax


def _split_letters(token: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(token):
        if token[pos] == "'":
            end = token.find("'", pos + 1)
            if end < 0:
                raise ValueError(f"unterminated quoted symbol in {token!r}")
            name = token[pos + 1:end]
            if not is_symbol_name(name):
                raise ValueError(f"invalid symbol name {name!r}")
            out.append(name)
            pos = end + 1
        elif token[pos].isascii() and token[pos].isalpha():
            out.append(token[pos])
            pos += 1
        else:
            raise ValueError(f"unexpected character {token[pos]!r} in {token!r}")
    return out


def parse_word(text: str) -> Word:
    """Parse a plain word: ``abab`` or ``'a0l''a0m'`` (whitespace ignored).

    ``~`` and the empty string both denote the empty word.
    """
    text = text.strip()
    if text in ("", "~"):
        return ()
    return tuple(sym for token in text.split() for sym in _split_letters(token))


def format_word(w: Sequence[str]) -> str:
    return "".join(format_symbol(a) for a in w) if w else "~"


def parse_refword(text: str) -> tuple[RefSymbol, ...]:
    """Parse the whitespace-separated ref-word token syntax."""
    out: list[RefSymbol] = []
    for token in text.split():
        if token == "~":
            continue
        if token[0] in "[]" and token[1:].isdigit() and int(token[1:]) > 0:
            maker = open_bracket if token[0] == "[" else close_bracket
            out.append(maker(int(token[1:])))
        elif token.isdigit():
            if int(token) < 1:
                raise ValueError("reference numbers must be positive")
            out.append(ref(int(token)))
        else:
            out.extend(letter(a) for a in _split_letters(token))
    return tuple(out)


def format_refword(v: Iterable[RefSymbol]) -> str:
    text = " ".join(str(s) for s in v)
    return text if text else "~"


# ---------------------------------------------------------------------------
# Homomorphism, decomposition, matching


def g(v: Iterable[RefSymbol]) -> Word:
    """Erase brackets, keep letters in order.  References are not allowed."""
    out = []
    for s in v:
        if s.kind is Kind.REF:
            raise ValueError("g is undefined on reference numbers")
        if s.kind is Kind.LETTER:
            out.append(s.value)
    return tuple(out)


@dataclass(frozen=True)
class Decomposition:
    """Unique split ``v = v_0 n_1 v_1 ... n_m v_m`` with reference-free v_r."""

    segments: tuple  # v_0 .. v_m, each a tuple of RefSymbol
    numbers: tuple  # n_1 .. n_m

    @property
    def m(self) -> int:
        return len(self.numbers)

    def prefix(self, r: int) -> tuple[RefSymbol, ...]:
        """y_r = v_0 n_1 v_1 ... n_r v_r."""
        out = list(self.segments[0])
        for j in range(1, r + 1):
            out.append(ref(self.numbers[j - 1]))
            out.extend(self.segments[j])
        return tuple(out)

    def reassemble(self) -> tuple[RefSymbol, ...]:
        return self.prefix(self.m)


def decompose(v: Sequence[RefSymbol]) -> Decomposition:
    segments = [[]]
    numbers = []
    for s in v:
        if s.kind is Kind.REF:
            numbers.append(s.value)
            segments.append([])
        else:
            segments[-1].append(s)
    return Decomposition(tuple(tuple(seg) for seg in segments), tuple(numbers))


def cnt(v: Sequence[RefSymbol]) -> int:
    return sum(1 for s in v if s.kind is Kind.REF)


def is_matching(v: Sequence[RefSymbol]) -> bool:
    """Every opening bracket ``[n`` before a reference ``n`` is closed in between.

    Concretely, for each reference n_r and each occurrence of ``[n_r`` in
    y_{r-1}, the first bracket labelled n_r after that occurrence (still
    inside y_{r-1}) must be ``]n_r``.
    """
    for pos, s in enumerate(v):
        if s.kind is not Kind.REF:
            continue
        n = s.value
        for start in range(pos):
            if v[start] != RefSymbol(Kind.OPEN, n):
                continue
            closed = False
            for x in v[start + 1:pos]:
                if x.kind is Kind.OPEN and x.value == n:
                    break
                if x.kind is Kind.CLOSE and x.value == n:
                    closed = True
                    break
            if not closed:
                return False
    return True


# ---------------------------------------------------------------------------
# Dereferencing


@dataclass(frozen=True)
class DerefTrace:
    """Intermediate values of the tape procedure.

    ``values[r-1]`` is the bracketed content that replaced the r-th reference
    (empty when no opening bracket preceded it); ``snapshots[r]`` is the tape
    right after the r-th replacement, ``snapshots[0]`` the input.  ``result``
    is None when the procedure failed on an unclosed bracket.
    """

    values: tuple
    snapshots: tuple
    result: Optional[Word]

    @property
    def loops(self) -> int:
        return len(self.values)


def deref_values(v: Sequence[RefSymbol]) -> DerefTrace:
    """Run the one-tape dereference procedure, recording every loop."""
    tape = list(v)
    values = []
    snapshots = [tuple(tape)]
    while True:
        # step 1: leftmost reference number
        idx = next((p for p, s in enumerate(tape) if s.kind is Kind.REF), None)
        if idx is None:
            # step 6: drop all brackets
            return DerefTrace(tuple(values), tuple(snapshots), g(tape))
        i = tape[idx].value
        # step 2: scan left for the nearest [i
        opener = next(
            (p for p in range(idx - 1, -1, -1) if tape[p] == RefSymbol(Kind.OPEN, i)),
            None,
        )
        if opener is None:
            content = ()
        else:
            # step 3: some ]i must sit between the opener and the reference
            closer = next(
                (p for p in range(opener + 1, idx) if tape[p] == RefSymbol(Kind.CLOSE, i)),
                None,
            )
            if closer is None:
                # step 7
                return DerefTrace(tuple(values), tuple(snapshots), None)
            # step 4: copy the letters up to the first ]i in front of the reference
            content = tuple(tape[opener + 1:closer])
            tape[idx:idx] = [s for s in content if s.kind is Kind.LETTER]
            idx += sum(1 for s in content if s.kind is Kind.LETTER)
        # step 5
        del tape[idx]
        values.append(content)
        snapshots.append(tuple(tape))


def deref(v: Sequence[RefSymbol]) -> Optional[Word]:
    """Dereference a ref-word; None stands for undefined."""
    return deref_values(v).result


def deref_closed_form(v: Sequence[RefSymbol]) -> Word:
    """g(v_0) g(v_[1]) g(v_1) ... g(v_[m]) g(v_m) for a matching ref-word.

    Builds the rewritten prefix left to right instead of editing a tape, so
    it serves as an independent check of :func:`deref`.
    """
    if not is_matching(v):
        raise ValueError("closed form applies to matching ref-words only")
    dec = decompose(v)
    rewritten: list[RefSymbol] = list(dec.segments[0])
    for n, segment in zip(dec.numbers, dec.segments[1:]):
        opener = None
        for p in range(len(rewritten) - 1, -1, -1):
            if rewritten[p] == RefSymbol(Kind.OPEN, n):
                opener = p
                break
        if opener is not None:
            closer = rewritten.index(RefSymbol(Kind.CLOSE, n), opener + 1)
            rewritten.extend(letter(a) for a in g(rewritten[opener + 1:closer]))
        rewritten.extend(segment)
    return g(rewritten)
