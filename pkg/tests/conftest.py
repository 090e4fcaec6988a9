import pytest

from toric_refine import build_complex, fixtures, from_state, initial_state
from toric_refine.obstruction import compute_tables
from toric_refine.resolution import resolve_default


@pytest.fixture(scope="session")
def chain():
    return build_complex([1, 2, 3], [[1, 2], [2, 3]])


@pytest.fixture(scope="session")
def triangle():
    return build_complex([1, 2, 3], [[1, 2, 3]])


@pytest.fixture(scope="session")
def a1_ref(chain):
    state, _ = resolve_default(initial_state(chain, 4))
    return from_state(state)


@pytest.fixture(scope="session")
def a1_tables(a1_ref):
    return compute_tables(a1_ref)


@pytest.fixture(scope="session")
def a2_fx():
    return fixtures.load("a2")


@pytest.fixture(scope="session")
def a2_ref(a2_fx):
    """The drawn a2 triangulation (see the ledger on the printed order)."""
    return fixtures.build(a2_fx, "figure")[1]


@pytest.fixture(scope="session")
def a2_tables(a2_ref):
    return compute_tables(a2_ref)


@pytest.fixture
def at():
    """Refined vertex id from a coordinate tuple over base vertices 1, 2, 3."""

    def lookup(ref, *coords):
        return ref.vertex_at(dict(zip(("1", "2", "3"), coords)))

    return lookup


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
