import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from petricospan import OpenPetriNet, Transition  # noqa: E402
from petricospan.modelio import bundled_model  # noqa: E402


@pytest.fixture
def F():
    return OpenPetriNet.build(["S", "I"], [Transition("α", "α", ["S", "I"], {"I": 2})], ["S"], ["I"])


@pytest.fixture
def G():
    return OpenPetriNet.build(["I", "R"], [Transition("β", "β", ["I"], ["R"])], ["I"], ["R"])


@pytest.fixture
def H():
    return OpenPetriNet.build(
        ["I", "R", "D"],
        [Transition("β", "β", ["I"], ["R"]), Transition("γ", "γ", ["I"], ["D"])],
        ["I"], ["R", "D"],
    )


@pytest.fixture
def env(F, G, H):
    return {"F": F, "G": G, "H": H}


@pytest.fixture
def models():
    return {name: bundled_model(name) for name in ("sir", "sird", "malaria")}


# -- acceptance summary ---------------------------------------------------------

_acceptance: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _acceptance.append((name, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"[{outcome}] {name}")
