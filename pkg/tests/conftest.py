import random

import pytest

from spatialvote.election import ElectionInstance

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE: dict = {}


@pytest.fixture
def example1():
    voters = [(x,) for x in (1, 1, 1, 3, 3, 22, 22, 24, 24)]
    return ElectionInstance(1, 2, voters, [(2,), (20,), (26,)])


@pytest.fixture
def two_poles():
    # incumbents at 0 and 7, voters at 2 and 5: only (3, 4) wins both
    return ElectionInstance(1, 2, [(2,), (5,)], [(0,), (7,)])


def random_instance(rng: random.Random, d: int, n: int, m: int = 1, p: int = 2, bound: int = 16):
    cands = [tuple(rng.randint(-bound, bound) for _ in range(d)) for _ in range(m)]
    voters = []
    while len(voters) < n:
        v = tuple(rng.randint(-bound, bound) for _ in range(d))
        if v not in cands:
            voters.append(v)
    return ElectionInstance(d, p, voters, cands)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")
