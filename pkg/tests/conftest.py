import pytest

from facechains.associahedron import associahedron_polytope
from facechains.permutahedron import permutahedron_polytope
from facechains.reference import cube_polytope, simplex_polytope

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def perm_polytopes():
    return {n: permutahedron_polytope(n) for n in range(1, 6)}


@pytest.fixture(scope="session")
def assoc_polytopes():
    return {n: associahedron_polytope(n) for n in range(2, 8)}


@pytest.fixture(scope="session")
def simplices():
    return {n: simplex_polytope(n) for n in range(0, 7)}


@pytest.fixture(scope="session")
def cubes():
    return {n: cube_polytope(n) for n in range(0, 5)}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s.split()[0])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
