import os

import pytest

from abeldecomp.config import cm, product, siegel
from abeldecomp.exactfield import FieldSpec

SLOW = os.environ.get("ABELDECOMP_SLOW") == "1"

QI = FieldSpec(["1", "0", "1"])


def pytest_collection_modifyitems(config, items):
    if SLOW:
        return
    skip = pytest.mark.skip(reason="set ABELDECOMP_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def qi():
    return QI


@pytest.fixture(scope="session")
def s1():
    return siegel(1)


@pytest.fixture(scope="session")
def s2():
    return siegel(2)


@pytest.fixture(scope="session")
def cm1():
    return cm(1)


@pytest.fixture(scope="session")
def prod():
    return product()


PRESET_FACTORIES = {
    "siegel1": lambda: siegel(1),
    "siegel2": lambda: siegel(2),
    "siegel3": lambda: siegel(3),
    "cm1": lambda: cm(1),
    "cm2": lambda: cm(2),
    "product": lambda: product(),
}


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(label: str, ok: bool, detail: str):
        line = f"criterion {label}: {'PASS' if ok else 'FAIL'} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
