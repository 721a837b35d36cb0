import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rewb import syntax as sx
from conftest import CORPUS, INVALID


@pytest.mark.parametrize("text", CORPUS)
def test_corpus_round_trips(text):
    ast = sx.parse(text)
    assert sx.parse(sx.pretty_print(ast)) == ast
    assert sx.from_json(sx.to_json(ast)) == ast


@pytest.mark.parametrize("text", INVALID)
def test_label_violations_are_syntax_errors(text):
    with pytest.raises(sx.RewbSyntaxError):
        sx.parse(text)


@pytest.mark.parametrize("text", ["", "(", "a+", "*a", "(1:a", "\\", "\\0", "'1x'", "a)", "#"])
def test_malformed_text(text):
    with pytest.raises(sx.RewbSyntaxError):
        sx.parse(text)


def test_error_reports_position():
    with pytest.raises(sx.RewbSyntaxError) as info:
        sx.parse("ab+)")
    assert info.value.position == 3


def test_square_prints_canonically():
    assert sx.pretty_print(sx.parse(r"((1:\2)(2:\1 a))*")) == r"((1:\2)(2:\1a))*"


def test_precedence():
    ast = sx.parse("ab*+c")
    assert ast == sx.Alt(sx.Concat(sx.Literal("a"), sx.Star(sx.Literal("b"))), sx.Literal("c"))
    assert sx.pretty_print(sx.parse("(a+b)(c+d)")) == "(a+b)(c+d)"
    assert sx.pretty_print(sx.parse("a+(b+c)")) == "a+(b+c)"
    assert sx.pretty_print(sx.parse("(ab)*")) == "(ab)*"


def test_quoted_symbols():
    ast = sx.parse("'a0l''a0m'x")
    assert sx.alphabet(ast) == ("a0l", "a0m", "x")
    assert sx.pretty_print(ast) == "'a0l''a0m'x"


def test_var_and_k():
    ast = sx.parse(r"(2:(1:(a+b)*)\1)\2(2:\1)*")
    assert ast.var == {1, 2}
    assert sx.max_label(ast) == 2
    assert sx.max_label(sx.parse("a*")) == 0


def test_captured_reference():
    assert not sx.has_captured_reference(sx.parse(r"(1:(a+b)*)\1"))
    assert sx.has_captured_reference(sx.parse(r"(1:a)(2:\1)\2"))
    assert sx.has_captured_reference(sx.parse(r"((1:\2)(2:\1a))*"))


def test_capture_constructor_checks_label():
    with pytest.raises(sx.LabelError):
        sx.Capture(1, sx.Reference(1))
    with pytest.raises(sx.LabelError):
        sx.Reference(0)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_random_rewbs_round_trip(seed):
    ast = sx.random_rewb(random.Random(seed))
    assert sx.parse(sx.pretty_print(ast)) == ast
    assert sx.from_json(sx.to_json(ast)) == ast
    # capture condition holds by construction
    for node in sx.walk(ast):
        if isinstance(node, sx.Capture):
            assert node.label not in node.child.var
