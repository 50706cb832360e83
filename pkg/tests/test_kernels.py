import os
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pseudoschur import _kernels_py, kernels

from conftest import fraction_rref, int_matrices, low_rank_int_matrices

try:
    from pseudoschur import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

IMPLS = [pytest.param(_kernels_py, id="python")]
IMPLS.append(pytest.param(_kernels_c, id="cython",
                          marks=pytest.mark.skipif(_kernels_c is None, reason="extension not built")))


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    forced = bool(os.environ.get("PSEUDOSCHUR_PURE_PYTHON"))
    if forced:
        assert kernels.BACKEND == "python"
    elif _kernels_c is not None:
        assert kernels.BACKEND == "cython"


@pytest.mark.parametrize("impl", IMPLS)
@given(a=low_rank_int_matrices())
def test_ff_rref_matches_fraction_oracle(impl, a):
    rows, pivots, scale = impl.ff_rref(a)
    expected, expected_piv = fraction_rref(a)
    assert pivots == expected_piv
    for i in range(len(pivots)):
        assert [Fraction(x, scale) for x in rows[i]] == expected[i]
    for row in rows[len(pivots):]:
        assert not any(row)


@st.composite
def conformable_pairs(draw, max_dim=6, bound=9):
    n, k, m = (draw(st.integers(1, max_dim)) for _ in range(3))
    e = st.integers(-bound, bound)
    return ([[draw(e) for _ in range(k)] for _ in range(n)],
            [[draw(e) for _ in range(m)] for _ in range(k)])


@pytest.mark.parametrize("impl", IMPLS)
@given(pair=conformable_pairs())
def test_int_matmul_matches_naive(impl, pair):
    a, b = pair
    expected = [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
                for i in range(len(a))]
    assert impl.int_matmul(a, b) == expected


@pytest.mark.parametrize("impl", IMPLS)
def test_ff_rref_partial_columns(impl):
    # reduce only the left block of [A | I]: right block becomes det-scaled inverse
    aug = [[2, 1, 1, 0], [1, 1, 0, 1]]
    rows, pivots, scale = impl.ff_rref(aug, 2)
    assert pivots == [0, 1]
    inv = [[Fraction(x, scale) for x in r[2:]] for r in rows]
    assert inv == [[1, -1], [-1, 2]]


@pytest.mark.parametrize("impl", IMPLS)
def test_zero_and_rank_deficient(impl):
    assert impl.echelon_pivots([[0, 0], [0, 0]]) == []
    assert impl.echelon_pivots([[1, -1], [2, -2]]) == [0]
    assert impl.echelon_pivots([[0, 1, 2], [0, 2, 4], [1, 0, 0]]) == [0, 1]


@given(a=int_matrices())
def test_implementations_agree(a):
    if _kernels_c is None:
        pytest.skip("extension not built")
    assert _kernels_c.ff_rref(a) == _kernels_py.ff_rref(a)
