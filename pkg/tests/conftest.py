import pytest

from toricorb.charpair import make_pair
from toricorb.polytope import build_polytope, cube, simplex

PRISM = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]


@pytest.fixture
def prism():
    return build_polytope(3, 5, PRISM)


@pytest.fixture
def prism_pair(prism):
    return make_pair(prism, [(2, 3, 5), (2, -1, 0), (-1, -1, -2), (-1, 2, 2), (0, 0, 1)])


@pytest.fixture
def cp4_pair():
    return make_pair(simplex(4), [(-1, -2, -2, -2), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])


@pytest.fixture
def cube3():
    return cube(3)


_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion."""
    def record(number, ok, detail):
        request.config.stash[_RESULTS][number] = (ok, detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
