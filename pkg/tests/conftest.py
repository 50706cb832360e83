from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pseudoschur import BlockMatrix, Matrix, fixtures

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def int_matrices(draw, max_dim=6, bound=5, min_dim=1):
    rows = draw(st.integers(min_dim, max_dim))
    cols = draw(st.integers(min_dim, max_dim))
    entries = st.integers(-bound, bound)
    return [[draw(entries) for _ in range(cols)] for _ in range(rows)]


@st.composite
def low_rank_int_matrices(draw, max_dim=6, bound=4):
    """Integer matrices built as a product, so rank deficiency is common."""
    rows = draw(st.integers(1, max_dim))
    cols = draw(st.integers(1, max_dim))
    inner = draw(st.integers(1, min(rows, cols)))
    entries = st.integers(-bound, bound)
    p = np.array([[draw(entries) for _ in range(inner)] for _ in range(rows)], dtype=object)
    q = np.array([[draw(entries) for _ in range(cols)] for _ in range(inner)], dtype=object)
    return (p @ q).tolist()


def fraction_rref(a):
    """Textbook Gauss-Jordan over Fractions; independent oracle for the kernels."""
    a = [[Fraction(x) for x in row] for row in a]
    n, w = len(a), len(a[0])
    r, piv = 0, []
    for c in range(w):
        k = next((i for i in range(r, n) if a[i][c] != 0), None)
        if k is None:
            continue
        a[k], a[r] = a[r], a[k]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
        if r == n:
            break
    return a, piv


@pytest.fixture
def example1():
    return fixtures.load("example1")


@pytest.fixture
def example2():
    return fixtures.load("example2")


@pytest.fixture
def violator():
    return fixtures.load("carlson_violator")


def rat(rows):
    return Matrix(rows, "rational")


def blocks(a, b, c, d, mode="rational"):
    return BlockMatrix.from_blocks(Matrix(a, mode), Matrix(b, mode), Matrix(c, mode), Matrix(d, mode))


# -- acceptance report -------------------------------------------------------

ACCEPTANCE = {}


def record_criterion(number, passed, detail):
    ACCEPTANCE[str(number)] = (passed, detail)
    print(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
