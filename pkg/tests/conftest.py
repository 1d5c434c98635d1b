import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))


@pytest.fixture(scope="session")
def level0():
    """Compiled union query sets and eleven Level-0 path-chase prefixes."""
    from redspider.sepexample import level0_prefixes, level0_queries
    setup = level0_queries()
    return setup, level0_prefixes(10, setup)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
