import random
from fractions import Fraction

import pytest

from normext.groups import make_group, subgroup_closure
from normext.pseudonorm import Pseudonorm


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def z4_half():
    """G = Z_4, H = {0, 2}, |2|_H = 1."""
    G = make_group([4])
    H = subgroup_closure(G, [(2,)])
    return G, H, Pseudonorm(H, {(0,): Fraction(0), (2,): Fraction(1)})


_ACCEPTANCE: list = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Criterion lines, echoed in the terminal summary."""
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("]", 1)[1].split(".", 1)[0])):
            terminalreporter.write_line(line)
