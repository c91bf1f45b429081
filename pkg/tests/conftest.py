import random

import pytest

from qcluster.seed import a2_seed
from qcluster.torus import TorusElement


def random_element(lam, rng, terms=3, lo=-2, hi=2, coeff=3, exact=False):
    """Up to ``terms`` monomials (exactly that many distinct ones if ``exact``)."""
    out = {}
    want = terms if exact else rng.randint(1, terms)
    while len(out) < want if exact else want > 0:
        f = tuple(rng.randint(lo, hi) for _ in range(lam.n))
        out[f] = rng.choice([c for c in range(-coeff, coeff + 1) if c])
        want -= not exact
    return TorusElement(lam, out)


def random_skew(n, ell, rng):
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = rng.randrange(ell)
            m[j][i] = -m[i][j]
    return m


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(params=[3, 5])
def a2(request):
    return a2_seed(request.param)


@pytest.fixture
def a2_3():
    return a2_seed(3)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
