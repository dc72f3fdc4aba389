import math

import pytest

from packdense import packing as pk

# Lines recorded by test_acceptance.py, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def hex_point(a, b):
    return (2.0 * a + b, math.sqrt(3.0) * b)


@pytest.fixture
def p1_packing():
    """Hexagonal packing with a six-disc supercell whose labels kill every symmetry."""
    reps = [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]
    labels = ["A", "A", "A", "A", "B", "C"]
    return pk.TorusPacking(
        (hex_point(3, 0), hex_point(1, 2)),
        tuple(pk.Disk(hex_point(*r), 1.0, lab) for r, lab in zip(reps, labels)),
    )
