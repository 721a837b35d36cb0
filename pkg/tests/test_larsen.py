import pytest

from rewb import machine as mc
from rewb import refnfa as rn
from rewb import syntax as sx
from rewb.larsen import larsen_alphabet, larsen_nesa, larsen_rewb, label_note
from rewb.refword import parse_word


def test_level_zero_prints():
    assert sx.pretty_print(larsen_rewb(0)) == "('a0l''a0m''a0r')*"


def test_level_one_shape():
    nodes = list(sx.walk(larsen_rewb(1)))
    assert sum(isinstance(n, sx.Capture) for n in nodes) == 1
    assert sum(isinstance(n, sx.Reference) for n in nodes) == 1


@pytest.mark.parametrize("i, expected", [(0, False), (1, False), (2, True), (3, True)])
def test_captured_reference_from_level_two(i, expected):
    assert sx.has_captured_reference(larsen_rewb(i)) == expected


def test_alphabet():
    assert len(set(larsen_alphabet(3))) == 12
    assert set(sx.alphabet(larsen_rewb(2))) == set(larsen_alphabet(2))


@pytest.mark.parametrize("i", range(4))
def test_machines_are_nonerasing(i):
    m = larsen_nesa(i)
    assert mc.validate_flavor(m) == []
    assert m.finals == {m.start}


def test_level_zero_machine_is_a_single_loop():
    m = larsen_nesa(0)
    assert len(m.states) == 3 and len(m.rules) == 3
    assert mc.accepts(m, parse_word("'a0l''a0m''a0r'")).accepted
    assert mc.accepts(m, ()).accepted


def test_state_names_use_level_numbering():
    names = set(larsen_nesa(2).states)
    assert {"q0^2", "q0^1", "q0^0", "c1^2", "e1^2", "r1^2", "c0^2", "e0^2", "r0^2", "c0^1", "e0^1", "r0^1"} <= names


def test_level_one_member():
    w = parse_word("'a1l''a0l''a0m''a0r''a1m''a0l''a0m''a0r''a1r'")
    assert rn.oracle_match(larsen_rewb(1), w)
    assert mc.accepts(larsen_nesa(1), w).accepted


def test_nested_dereference_at_level_two():
    inner = "'a1l''a0l''a0m''a0r''a1m''a0l''a0m''a0r''a1r'"
    good = parse_word("'a2l'" + inner + "'a2m'" + inner + "'a2r'")
    bad = parse_word("'a2l'" + inner + "'a2m'" + inner.replace("'a0m'", "", 1) + "'a2r'")
    m = larsen_nesa(2)
    assert rn.oracle_match(larsen_rewb(2), good)
    assert mc.accepts(m, good, mc.Budget(100_000, 100)).accepted
    assert not rn.oracle_match(larsen_rewb(2), bad)
    assert not mc.accepts(m, bad, mc.Budget(100_000, 100)).accepted


def test_level_three_agrees_on_a_deep_member():
    x0 = "'a0l''a0m''a0r'"
    x1 = f"'a1l'{x0}'a1m'{x0}'a1r'"
    x2 = f"'a2l'{x1}'a2m'{x1}'a2r'"
    w = parse_word(f"'a3l'{x2}'a3m'{x2}'a3r'")
    assert rn.oracle_match(larsen_rewb(3), w)
    assert mc.accepts(larsen_nesa(3), w, mc.Budget(200_000, 200)).accepted
    shorter = w[:-2] + w[-1:]
    assert not mc.accepts(larsen_nesa(3), shorter, mc.Budget(200_000, 200)).accepted


def test_label_note():
    assert label_note(0) == "no captures"
    assert "level 1 -> label 2" in label_note(2)
