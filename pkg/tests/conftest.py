from __future__ import annotations

import hashlib
import json
from pathlib import Path

import pytest

from autoparl import ParliamentConfig, Question, StanceSpec
from autoparl.backends import BackendBinding, ScriptedBackend, ScriptedTable

FIXTURES = Path(__file__).parent / "fixtures"
SCENARIO = Path(__file__).parents[1] / "src" / "autoparl" / "data" / "scenarios" / "desert_island"


class EchoBackend:
    """Programmatic stand-in for a delegate: every output is a pure function of its input."""

    concurrent = True

    def __init__(self, fail_at_iteration: int | None = None):
        self.fail_at_iteration = fail_at_iteration

    def generate(self, question, stance):
        return f"[{stance.name}] answer to {question.id}"

    def modify(self, question, stance, text, policy):
        k = text.count(" +") + 1
        if self.fail_at_iteration == k:
            raise RuntimeError(f"modifier {stance.id} crashed at iteration {k}")
        return f"{text} +{stance.id}"

    def evaluate(self, question, answer, stance):
        digest = hashlib.sha256(f"{stance.id}|{answer}".encode()).digest()
        return digest[0] % 17 / 16


def parliament(n: int, weights=None, **kwargs) -> ParliamentConfig:
    if weights is None:
        weights = [1 / n] * n
    return ParliamentConfig(
        tuple(StanceSpec(i, f"stance-{i}", w) for i, w in enumerate(weights, 1)), **kwargs
    )


def bindings_for(config: ParliamentConfig, backend) -> dict[int, BackendBinding]:
    return {s.id: BackendBinding.single(s.id, backend) for s in config.stances}


@pytest.fixture
def question() -> Question:
    return Question("q1", "Is it okay to lie if it doesn't hurt anyone?")


@pytest.fixture
def desert_island():
    from autoparl.config import load_run_config

    config, bindings = load_run_config(SCENARIO / "config.json")
    text = (SCENARIO / "question.txt").read_text(encoding="utf-8").strip()
    return Question("desert-island", text), config, bindings


@pytest.fixture
def desert_island_expected() -> dict:
    return json.loads((FIXTURES / "desert_island_expected.json").read_text(encoding="utf-8"))


@pytest.fixture
def constant_table():
    return ScriptedTable.from_dict(
        {
            "generate": {"*": {"*": "A fixed answer."}},
            "modify": {"*": {"*": "A fixed modification."}},
            "evaluate": {"*": {"*": 0.5}},
        }
    )


@pytest.fixture
def constant_backend(constant_table):
    return ScriptedBackend(constant_table)


# acceptance summary ----------------------------------------------------------

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        verdict = "PASS" if report.passed else "FAIL"
        if _ACCEPTANCE.get(number, (title, "PASS"))[1] == "FAIL":
            verdict = "FAIL"
        _ACCEPTANCE[number] = (title, verdict)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, verdict = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")
