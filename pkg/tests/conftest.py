import itertools
import sys

import pytest

from tssa.params import WORKED_POINT
from tssa.tworisk import solve_ede


def leibniz_det(rows):
    """Permutation-sum determinant; slow but shares nothing with the library."""
    n = len(rows)
    total = 0.0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1.0 if inv % 2 else 1.0
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


def brute_charpoly(rows):
    """c_m by explicit enumeration of principal submatrices and Leibniz dets."""
    n = len(rows)
    out = []
    for m in range(1, n + 1):
        s = 0.0
        for K in itertools.combinations(range(n), m):
            s += leibniz_det([[rows[i][j] for j in K] for i in K])
        out.append((-1) ** m * s)
    return out


@pytest.fixture
def worked():
    return WORKED_POINT


@pytest.fixture
def worked_ede(worked):
    (e,) = solve_ede(worked)
    return e


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
