import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rewb import refnfa as rn
from rewb import refword as rw
from rewb import syntax as sx
from conftest import CORPUS


def _words(ast, letters, max_len):
    from itertools import product
    for n in range(max_len + 1):
        yield from product(letters, repeat=n)


@pytest.mark.parametrize("text", CORPUS)
def test_nfa_is_trim_and_paths_are_matching(text):
    nfa = rn.build_ref_nfa(sx.parse(text))
    assert rn.is_trim(nfa)
    assert rn.nfa_reachable_strings_matching_check(nfa, 8)


def test_ww_refwords():
    nfa = rn.build_ref_nfa(sx.parse(r"(1:(a+b)*)\1"))
    words = rn.enumerate_refwords(nfa, 5)
    expected = {
        (rw.open_bracket(1),) + tuple(rw.letter(a) for a in w) + (rw.close_bracket(1), rw.ref(1))
        for w in _words(None, "ab", 2)
    }
    assert words == expected


def test_build_is_deterministic():
    a = rn.build_ref_nfa(sx.parse(r"(2:(1:(a+b)*)\1)\2(2:\1)*"))
    b = rn.build_ref_nfa(sx.parse(r"(2:(1:(a+b)*)\1)\2(2:\1)*"))
    assert a == b


def test_oracle_examples():
    ww = sx.parse(r"(1:(a+b)*)\1")
    hit = rn.oracle_match(ww, "abab")
    assert hit and rw.deref(hit.witness) == tuple("abab")
    assert not rn.oracle_match(ww, "aba")
    assert rn.oracle_match(sx.parse(r"a*\1"), "aa")  # unbound reference is empty
    assert not rn.oracle_match(sx.parse("(1:a)"), "")


@pytest.mark.parametrize("text", CORPUS)
def test_oracle_agrees_with_refword_enumeration(text):
    ast = sx.parse(text)
    nfa = rn.build_ref_nfa(ast)
    # every member of the enumerated ref-word language dereferences into the oracle language
    from_refwords = {rw.deref(v) for v in rn.enumerate_refwords(nfa, 9)}
    members = rn.oracle_language(ast, "ab", 4, nfa)
    for w in from_refwords:
        if len(w) <= 4 and set(w) <= {"a", "b"}:
            assert w in members
    for w, witness in members.items():
        assert rw.deref(witness) == w
        assert nfa.accepts(witness)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_oracle_language_matches_per_word_oracle(seed):
    ast = sx.random_rewb(random.Random(seed), max_depth=3)
    members = rn.oracle_language(ast, "ab", 4)
    for w in _words(ast, "ab", 4):
        result = rn.oracle_match(ast, w)
        assert bool(result) == (w in members)
        if result:
            assert rw.deref(result.witness) == w


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_random_nfa_paths_are_matching(seed):
    nfa = rn.build_ref_nfa(sx.random_rewb(random.Random(seed)))
    assert rn.is_trim(nfa)
    assert rn.nfa_reachable_strings_matching_check(nfa, 6)
