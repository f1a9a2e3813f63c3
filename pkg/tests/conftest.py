import pytest

from announce.assets import figure1, tileset
from announce.kripke import new_model


@pytest.fixture
def fig1():
    m, _ = figure1()
    return m


@pytest.fixture
def single():
    return new_model(["w"], ["a", "b"], {}, {"a": [["w"]], "b": [["w"]]})


@pytest.fixture
def uniform():
    return tileset("uniform")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
