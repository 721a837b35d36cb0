"""Acceptance criteria, one test each.

A pass/fail line per criterion is printed in the terminal summary (see
conftest.py).  Traces recorded by criteria 3-7 feed criterion 8.
"""
import random
import time
from functools import lru_cache

import pytest

from rewb import construct as cs
from rewb import langlab as ll
from rewb import machine as mc
from rewb import refnfa as rn
from rewb import refword as rw
from rewb import syntax as sx
from rewb.larsen import larsen_alphabet, larsen_nesa, larsen_rewb
from conftest import CORPUS, random_matching_refword

RECORDED_TRACES: list = []

RANDOM_SEED = 20231
WW = r"(1:(a+b)*)\1"


@lru_cache(maxsize=None)
def random_refwords():
    rng = random.Random(7)
    return tuple(random_matching_refword(rng, max_len=20, k=3) for _ in range(10_000))


@lru_cache(maxsize=None)
def random_rewbs():
    rng = random.Random(RANDOM_SEED)
    return tuple(sx.random_rewb(rng, max_depth=4, max_k=3) for _ in range(200))


@lru_cache(maxsize=None)
def crosscheck_workload():
    """Crosscheck reports for the corpus and the random rewbs, with timing."""
    start = time.perf_counter()
    reports = []
    for ast in [sx.parse(t) for t in CORPUS] + list(random_rewbs()):
        max_len = 8 if sx.pretty_print(ast) == WW else 6
        reports.append((ast, ll.crosscheck(ast, "ab", max_len, keep_traces=True)))
    return reports, time.perf_counter() - start


@pytest.mark.criterion(1)
def test_criterion_1_dereference():
    start = time.perf_counter()
    golden = {
        "[1 a [2 b ]2 2 ]1 1": "abbabb",
        "[1 a ]1 1 [1 bb ]1 1": "aabbbb",
        "abc 1 2": "abc",
    }
    for text, expected in golden.items():
        assert rw.format_word(rw.deref(rw.parse_refword(text))) == expected
    words = random_refwords()
    assert all(rw.is_matching(v) for v in words)
    assert all(len(v) <= 20 for v in words)
    for v in words:
        assert rw.deref(v) == rw.deref_closed_form(v)
    assert time.perf_counter() - start < 10


@pytest.mark.criterion(2)
def test_criterion_2_matching_theory():
    for v in random_refwords():
        values = rw.deref_values(v)
        # loop count and result alphabet
        assert values.loops == rw.cnt(v)
        assert values.result is not None and all(isinstance(a, str) for a in values.result)
        # every prefix is matching and sees the same replacement values
        for cut in range(len(v)):
            prefix = v[:cut]
            assert rw.is_matching(prefix)
            part = rw.deref_values(prefix).values
            assert part == values.values[: len(part)]
    for text in CORPUS:
        assert rn.nfa_reachable_strings_matching_check(rn.build_ref_nfa(sx.parse(text)), 8)


@pytest.mark.criterion(3)
def test_criterion_3_rewbs_are_nsa_languages():
    reports, elapsed = crosscheck_workload()
    assert len(reports) == len(CORPUS) + 200
    assert len(CORPUS) >= 10
    failures = [(sx.pretty_print(ast), r.mismatches) for ast, r in reports if not r.ok]
    assert failures == []
    for ast, report in reports:
        RECORDED_TRACES.extend(report.traces)
    assert elapsed < 300


@pytest.mark.criterion(4)
def test_criterion_4_capture_free_rewbs_are_nesa_languages():
    reports, _ = crosscheck_workload()
    policy = ll.BudgetPolicy()
    checked = 0
    for ast, report in reports:
        if sx.has_captured_reference(ast):
            continue
        checked += 1
        nesa = cs.build_nesa(ast, "ab")
        nsa = cs.build_nsa(ast, "ab")
        assert mc.validate_flavor(nesa) == []
        members = rn.oracle_language(ast, "ab", report.max_len)
        budget = policy.negative_budget([cs.derive_budget(v, w) for w, v in members.items()])
        nesa_slice = ll.language_slice(nesa, "ab", report.max_len, budget)
        nsa_slice = ll.language_slice(nsa, "ab", report.max_len, budget)
        assert set(nesa_slice.accepted) == set(nsa_slice.accepted) == set(members), sx.pretty_print(ast)
        assert nesa.name in report.checked
    assert checked >= 10
    assert any(sx.pretty_print(ast) == WW and r.max_len == 8 for ast, r in reports)


@pytest.mark.criterion(5)
def test_criterion_5_square_and_cubic():
    for name, bound, lengths in (
        ("square", 36, [0, 1, 4, 9, 16, 25, 36]),
        ("cubic", 66, [0, 4, 15, 35, 66]),
    ):
        ast = ll.example(name)
        assert ll.language_slice(ast, "a", bound).accepted_lengths() == lengths
        report = ll.crosscheck(ast, "a", bound, keep_traces=True)
        assert report.ok, report.to_text()
        assert report.accepted_lengths() == lengths
        RECORDED_TRACES.extend(report.traces)
        members = rn.oracle_language(ast, "a", bound)
        budget = ll.BudgetPolicy().negative_budget([cs.derive_budget(v, w) for w, v in members.items()])
        machine_slice = ll.language_slice(cs.build_nsa(ast), "a", bound, budget)
        assert machine_slice.accepted_lengths() == lengths


def _mutants(word, alphabet):
    for i in range(len(word)):
        yield word[:i] + word[i + 1:]
        for a in alphabet:
            if a != word[i]:
                yield word[:i] + (a,) + word[i + 1:]


@pytest.mark.criterion(6)
def test_criterion_6_larsen_hierarchy():
    start = time.perf_counter()
    policy = ll.BudgetPolicy()
    for i, bound in ((0, 9), (1, 7)):
        alphabet = larsen_alphabet(i)
        assert len(alphabet) == 3 * (i + 1)
        members = rn.oracle_language(larsen_rewb(i), alphabet, bound)
        report = ll.SliceReport(f"larsen {i}", alphabet, bound, sorted(members), "bounded")
        ll.check_machine(larsen_nesa(i), members, alphabet, bound, policy, report, keep_traces=True)
        assert report.ok, report.to_text()
        RECORDED_TRACES.extend(report.traces)

    ast, machine, alphabet = larsen_rewb(2), larsen_nesa(2), larsen_alphabet(2)
    members = rn.oracle_language(ast, alphabet, 12)
    assert len(members) > 1
    budgets = {w: cs.derive_budget(v, w) for w, v in members.items()}
    negative = policy.negative_budget(list(budgets.values()))
    for w, budget in budgets.items():
        result = mc.accepts(machine, w, budget)
        assert result.accepted, rw.format_word(w)
        RECORDED_TRACES.append((machine, w, result.trace))
        for mutant in set(_mutants(w, alphabet)):
            expected = bool(rn.oracle_match(ast, mutant))
            got = mc.accepts(machine, mutant, budgets.get(mutant, negative)).accepted
            assert got == expected, rw.format_word(mutant)
    assert time.perf_counter() - start < 600


@pytest.mark.criterion(7)
def test_criterion_7_anbn_machine():
    m = ll.example("anbn_nesa")
    assert mc.validate_flavor(m) == []
    report = ll.language_slice(m, "ab", 12)
    assert set(report.accepted) == {("a",) * n + ("b",) * n for n in range(7)}
    assert report.exhaustive
    for w in report.accepted:
        RECORDED_TRACES.append((m, w, mc.accepts(m, w).trace))


@pytest.mark.criterion(8)
def test_criterion_8_trace_invariants():
    if not RECORDED_TRACES:
        pytest.fail("no traces were recorded; run the whole acceptance module")
    flavors = {m.flavor for m, _, _ in RECORDED_TRACES}
    assert flavors == {"NSA", "NESA"}
    for m, w, trace in RECORDED_TRACES:
        assert trace[0] == m.initial()
        assert m.is_accepting(trace[-1], len(w))
        assert mc.trace_violations(m, trace) == [], (m.name, rw.format_word(w))
