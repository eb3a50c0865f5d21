import os

import pytest

from magicrom.polytope import build_levels

_LEVELS: dict[str, dict] = {"H": {}, "T": {}}
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def levels():
    """``levels(mode, n)`` returns the vertex sets 1..n, built once per session."""

    def get(mode: str, n: int) -> dict:
        build_levels(n, mode, levels=_LEVELS[mode])
        return _LEVELS[mode]

    return get


def pytest_collection_modifyitems(config, items):
    if os.environ.get("MAGICROM_STRETCH") == "1":
        return
    skip = pytest.mark.skip(reason="hours-scale run; set MAGICROM_STRETCH=1")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
