import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from stallings.groups import spec_from_tree  # noqa: E402
from stallings.sections import build_section  # noqa: E402

ACCEPTANCE_LINES = []


def cyclic(n, gen, prefix="g"):
    el = [f"{prefix}{i}" for i in range(n)]
    return {"finite": {"elements": el, "identity": el[0],
                       "table": [[el[(i + j) % n] for j in range(n)] for i in range(n)],
                       "genmap": {gen: el[1]}}}


def h_cyclic(n, prefix="h"):
    el = [f"{prefix}{i}" for i in range(n)]
    return {"elements": el, "identity": el[0],
            "table": [[el[(i + j) % n] for j in range(n)] for i in range(n)]}


TREES = {
    "f1": {"free": {"generators": ["a"]}},
    "f2": {"free": {"generators": ["a", "b"]}},
    "z2": cyclic(2, "a"),
    "z3": cyclic(3, "a"),
    "dinf": {"amalgam": {"left": cyclic(2, "a"), "right": cyclic(2, "b"), "h": h_cyclic(1),
                         "phi1": {"h0": "1"}, "phi2": {"h0": "1"}}},
    "z2z3": {"amalgam": {"left": cyclic(2, "a"), "right": cyclic(3, "b"), "h": h_cyclic(1),
                         "phi1": {"h0": "1"}, "phi2": {"h0": "1"}}},
    "hnn": {"hnn": {"base": cyclic(2, "a"), "stable": "t", "h": h_cyclic(2),
                    "incl": {"h0": "1", "h1": "a"}, "phi": {"h0": "1", "h1": "a"}}},
    "sl2": {"amalgam": {"left": cyclic(4, "a"), "right": cyclic(6, "b"), "h": h_cyclic(2),
                        "phi1": {"h0": "1", "h1": "a a"}, "phi2": {"h0": "1", "h1": "b b b"}}},
}

_SECTIONS = {}


def section(name):
    """Sections are pure values, so one build per test session is shared."""
    if name not in _SECTIONS:
        _SECTIONS[name] = build_section(spec_from_tree(TREES[name]))
    return _SECTIONS[name]


@pytest.fixture(scope="session")
def sections():
    return section


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
