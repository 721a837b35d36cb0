import random

import pytest

from rewb.refword import close_bracket, letter, open_bracket, ref

# Valid rewbs from the standard syntax examples, plus ww and square.
CORPUS = [
    "~",
    "a",
    r"\1",
    r"a*\1",
    "(1:a*)",
    "((1:a*))*",
    r"(2:a*)\2",
    r"(1:a*)(2:b*)(\1+\2)",
    r"(2:(1:(a+b)*)\1)\2(2:\1)*",
    r"((1:\4a)(2:\3)(3:\2a)(4:\1\3))*",
    r"(1:(a+b)*)\1",
    r"((1:\2)(2:\1a))*",
]

INVALID = [r"(1:(1:a*))", r"(1:a*\1)", r"(1:(2:(1:a*)))"]


def random_matching_refword(rng: random.Random, max_len: int = 20, k: int = 3, letters="ab"):
    """Draw a matching ref-word by tracking, per label, whether a reference is safe.

    A label is safe while its last bracket is a closing one (or it has no
    brackets yet); two opening brackets in a row poison it for good.
    """
    state = {i: "ok" for i in range(1, k + 1)}
    out = []
    for _ in range(rng.randint(0, max_len)):
        roll = rng.random()
        i = rng.randint(1, k)
        if roll < 0.4:
            out.append(letter(rng.choice(letters)))
        elif roll < 0.6:
            out.append(open_bracket(i))
            state[i] = "dead" if state[i] in ("open", "dead") else "open"
        elif roll < 0.8:
            out.append(close_bracket(i))
            if state[i] == "open":
                state[i] = "ok"
        else:
            safe = [j for j, s in state.items() if s == "ok"]
            if safe:
                out.append(ref(rng.choice(safe)))
    return tuple(out)


@pytest.fixture(scope="session")
def matching_refwords():
    rng = random.Random(7)
    return [random_matching_refword(rng) for _ in range(10_000)]


_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for name, value in report.user_properties:
        if name == "criterion":
            _CRITERIA[value] = (report.outcome, report.duration)


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    marker = item.get_closest_marker("criterion")
    if marker:
        item.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        outcome, duration = _CRITERIA[n]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict} ({duration:.1f}s)")
