"""Abstract syntax, concrete grammar and structural predicates for rewbs.

Concrete grammar (whitespace between tokens is ignored)::

    alt     := concat ('+' concat)*
    concat  := postfix postfix*
    postfix := atom '*'*
    atom    := LETTER | "'" NAME "'" | '~' | '\\' LABEL
             | '(' LABEL ':' alt ')' | '(' alt ')'

``LETTER`` is a single ASCII letter, ``NAME`` a letter followed by letters,
digits or underscores, ``LABEL`` a positive decimal integer.  Concatenation
and alternation associate to the left.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence, Union


class RewbSyntaxError(ValueError):
    """Raised when rewb text does not follow the grammar."""

    def __init__(self, position: int, message: str):
        super().__init__(f"at position {position}: {message}")
        self.position = position
        self.message = message


class LabelError(ValueError):
    """Raised when a capture label is invalid for its body."""


def is_symbol_name(name: str) -> bool:
    return (
        bool(name)
        and name[0].isascii()
        and name[0].isalpha()
        and all(ch.isascii() and (ch.isalnum() or ch == "_") for ch in name)
    )


def format_symbol(name: str) -> str:
    """Spell an alphabet symbol the way the parser reads it back."""
    if len(name) == 1:
        return name
    return f"'{name}'"


@dataclass(frozen=True)
class Literal:
    symbol: str

    def __post_init__(self):
        if not is_symbol_name(self.symbol):
            raise ValueError(f"invalid alphabet symbol {self.symbol!r}")

    @cached_property
    def var(self) -> frozenset[int]:
        return frozenset()


@dataclass(frozen=True)
class Epsilon:
    @cached_property
    def var(self) -> frozenset[int]:
        return frozenset()


@dataclass(frozen=True)
class Reference:
    label: int

    def __post_init__(self):
        _check_label(self.label)

    @cached_property
    def var(self) -> frozenset[int]:
        return frozenset({self.label})


@dataclass(frozen=True)
class Concat:
    left: "Rewb"
    right: "Rewb"

    @cached_property
    def var(self) -> frozenset[int]:
        return self.left.var | self.right.var


@dataclass(frozen=True)
class Alt:
    left: "Rewb"
    right: "Rewb"

    @cached_property
    def var(self) -> frozenset[int]:
        return self.left.var | self.right.var


@dataclass(frozen=True)
class Star:
    child: "Rewb"

    @cached_property
    def var(self) -> frozenset[int]:
        return self.child.var


@dataclass(frozen=True)
class Capture:
    label: int
    child: "Rewb"

    def __post_init__(self):
        _check_label(self.label)
        if self.label in self.child.var:
            raise LabelError(
                f"label {self.label} is referenced or recaptured inside capture {self.label}"
            )

    @cached_property
    def var(self) -> frozenset[int]:
        return self.child.var | {self.label}


Rewb = Union[Literal, Epsilon, Reference, Concat, Alt, Star, Capture]


def _check_label(label) -> None:
    if isinstance(label, bool) or not isinstance(label, int) or label < 1:
        raise LabelError(f"labels must be positive integers, got {label!r}")


def children(node: Rewb) -> tuple:
    if isinstance(node, (Concat, Alt)):
        return (node.left, node.right)
    if isinstance(node, (Star, Capture)):
        return (node.child,)
    return ()


def walk(node: Rewb) -> Iterator[Rewb]:
    """Pre-order traversal."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(children(current)))


def max_label(node: Rewb) -> int:
    """k of the rewb: the largest label used (0 for a pure regular expression)."""
    return max(node.var, default=0)


def alphabet(node: Rewb) -> tuple[str, ...]:
    """Letters occurring in the rewb, in first-occurrence order."""
    seen: dict[str, None] = {}
    for sub in walk(node):
        if isinstance(sub, Literal):
            seen.setdefault(sub.symbol)
    return tuple(seen)


def has_captured_reference(node: Rewb) -> bool:
    """True iff some reference occurs inside some capture group."""
    return any(
        isinstance(sub, Capture) and any(isinstance(x, Reference) for x in walk(sub.child))
        for sub in walk(node)
    )


# ---------------------------------------------------------------------------
# Parsing


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, position: int | None = None) -> RewbSyntaxError:
        return RewbSyntaxError(self.pos if position is None else position, message)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str | None:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek()
            raise self.error(f"expected {ch!r}, found {'end of input' if found is None else repr(found)}")
        self.pos += 1

    def parse(self) -> Rewb:
        if self.peek() is None:
            raise self.error("empty expression (use '~' for the empty word)")
        node = self.alt()
        if self.peek() is not None:
            raise self.error(f"unexpected {self.peek()!r}")
        return node

    def alt(self) -> Rewb:
        node = self.concat()
        while self.peek() == "+":
            self.pos += 1
            node = Alt(node, self.concat())
        return node

    def concat(self) -> Rewb:
        if self.peek() in (None, "+", ")", "*"):
            found = self.peek()
            raise self.error(f"expected an expression, found {'end of input' if found is None else repr(found)}")
        node = self.postfix()
        while self.peek() not in (None, "+", ")"):
            node = Concat(node, self.postfix())
        return node

    def postfix(self) -> Rewb:
        node = self.atom()
        while self.peek() == "*":
            self.pos += 1
            node = Star(node)
        return node

    def label(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected a label")
        value = int(self.text[start:self.pos])
        if value < 1:
            raise self.error("labels must be positive", start)
        return value

    def atom(self) -> Rewb:
        ch = self.peek()
        start = self.pos
        if ch == "~":
            self.pos += 1
            return Epsilon()
        if ch == "\\":
            self.pos += 1
            return Reference(self.label())
        if ch == "'":
            end = self.text.find("'", self.pos + 1)
            if end < 0:
                raise self.error("unterminated quoted symbol")
            name = self.text[self.pos + 1:end]
            if not is_symbol_name(name):
                raise self.error(f"invalid symbol name {name!r}")
            self.pos = end + 1
            return Literal(name)
        if ch == "(":
            self.pos += 1
            # "(digits:" opens a capture; anything else is grouping
            probe = self.pos
            while probe < len(self.text) and self.text[probe].isspace():
                probe += 1
            digits_end = probe
            while digits_end < len(self.text) and self.text[digits_end].isdigit():
                digits_end += 1
            after = digits_end
            while after < len(self.text) and self.text[after].isspace():
                after += 1
            if digits_end > probe and after < len(self.text) and self.text[after] == ":":
                label = self.label()
                self.expect(":")
                body = self.alt()
                self.expect(")")
                try:
                    return Capture(label, body)
                except LabelError as exc:
                    raise RewbSyntaxError(start, str(exc)) from exc
            body = self.alt()
            self.expect(")")
            return body
        if ch is not None and ch.isascii() and ch.isalpha():
            self.pos += 1
            return Literal(ch)
        if ch is None:
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {ch!r}")


def parse(text: str) -> Rewb:
    """Parse rewb text into an AST.

    Raises RewbSyntaxError for malformed text, including label violations
    such as ``(1:(1:a*))``.
    """
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Printing and serialization

_ALT, _CONCAT, _POSTFIX = 0, 1, 2


def _prec(node: Rewb) -> int:
    if isinstance(node, Alt):
        return _ALT
    if isinstance(node, Concat):
        return _CONCAT
    return _POSTFIX


def pretty_print(node: Rewb) -> str:
    """Render an AST in the concrete grammar; parse(pretty_print(x)) == x."""

    def wrap(sub: Rewb, min_prec: int) -> str:
        text = render(sub)
        return f"({text})" if _prec(sub) < min_prec else text

    def render(sub: Rewb) -> str:
        if isinstance(sub, Literal):
            return format_symbol(sub.symbol)
        if isinstance(sub, Epsilon):
            return "~"
        if isinstance(sub, Reference):
            return f"\\{sub.label}"
        if isinstance(sub, Alt):
            return f"{wrap(sub.left, _ALT)}+{wrap(sub.right, _CONCAT)}"
        if isinstance(sub, Concat):
            return f"{wrap(sub.left, _CONCAT)}{wrap(sub.right, _POSTFIX)}"
        if isinstance(sub, Star):
            return f"{wrap(sub.child, _POSTFIX)}*"
        if isinstance(sub, Capture):
            return f"({sub.label}:{render(sub.child)})"
        raise TypeError(f"not a rewb node: {sub!r}")

    return render(node)


def to_json(node: Rewb) -> dict:
    if isinstance(node, Literal):
        return {"kind": "literal", "symbol": node.symbol}
    if isinstance(node, Epsilon):
        return {"kind": "epsilon"}
    if isinstance(node, Reference):
        return {"kind": "reference", "label": node.label}
    if isinstance(node, Capture):
        return {"kind": "capture", "label": node.label, "children": [to_json(node.child)]}
    kind = {Concat: "concat", Alt: "alt", Star: "star"}[type(node)]
    return {"kind": kind, "children": [to_json(c) for c in children(node)]}


def from_json(data: dict) -> Rewb:
    kind = data["kind"]
    kids = [from_json(c) for c in data.get("children", [])]
    if kind == "literal":
        return Literal(data["symbol"])
    if kind == "epsilon":
        return Epsilon()
    if kind == "reference":
        return Reference(data["label"])
    if kind == "capture":
        return Capture(data["label"], kids[0])
    if kind == "concat":
        return Concat(*kids)
    if kind == "alt":
        return Alt(*kids)
    if kind == "star":
        return Star(kids[0])
    raise ValueError(f"unknown node kind {kind!r}")


# ---------------------------------------------------------------------------
# Random generation


def random_rewb(
    rng: random.Random,
    max_depth: int = 4,
    max_k: int = 3,
    letters: Sequence[str] = ("a", "b"),
) -> Rewb:
    """Draw a random valid rewb.

    Capture labels are drawn from the labels not already used by the body,
    so every generated tree satisfies the capture condition by construction.
    """

    def gen(depth: int) -> Rewb:
        if depth <= 0 or rng.random() < 0.25:
            roll = rng.random()
            if max_k > 0 and roll < 0.25:
                return Reference(rng.randint(1, max_k))
            if roll < 0.35:
                return Epsilon()
            return Literal(rng.choice(list(letters)))
        roll = rng.random()
        if roll < 0.3:
            return Concat(gen(depth - 1), gen(depth - 1))
        if roll < 0.5:
            return Alt(gen(depth - 1), gen(depth - 1))
        if roll < 0.7:
            return Star(gen(depth - 1))
        body = gen(depth - 1)
        free = [j for j in range(1, max_k + 1) if j not in body.var]
        if not free:
            return body
        return Capture(rng.choice(free), body)

    return gen(max_depth)
