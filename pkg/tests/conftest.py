import pytest

from dhrsieve.arith import parse_polynomial_system
from dhrsieve.optimizer import compute_cells
from dhrsieve.sievefn import sieve_table

PUBLISHED_CELLS = ([(2, k) for k in range(3, 15)] + [(3, k) for k in range(4, 15)]
                   + [(4, k) for k in range(4, 15)])


@pytest.fixture(scope="session")
def H():
    return parse_polynomial_system("n^3+2; n^3+6", assume_irreducible=True)


@pytest.fixture(scope="session")
def tables():
    return {g: sieve_table(g) for g in range(1, 7)}


@pytest.fixture(scope="session")
def grid_cells():
    """The full g = 2..4, k = 1..14 grid, computed once per session."""
    cells = compute_cells([2, 3, 4], range(1, 15), workers=4)
    return {(c.g, c.k): c for c in cells}


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {detail}")
