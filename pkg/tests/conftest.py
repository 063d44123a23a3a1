import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from mms.matrix import Mat  # noqa: E402
from mms.scheme import Scheme  # noqa: E402


def to_mat(rows, p):
    return Mat.from_rows([list(r) for r in rows], p)


def random_scheme(rng: random.Random, n: int, r: int, p: int) -> Scheme:
    mats = [[[[rng.randrange(p) for _ in range(n)] for _ in range(n)] for _ in range(3)] for _ in range(r)]
    return Scheme.from_matrices(mats, p)


@pytest.fixture
def rng():
    return random.Random(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
