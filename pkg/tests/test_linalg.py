from fractions import Fraction as F
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from graded_tannakian import linalg, _kernels_py
from graded_tannakian.linalg import QMatrix, kernel_basis, rank, solve, Quotient


def brute_rank(rows):
    """Independent oracle: rank via exhaustive minors (small matrices only)."""
    m, n = len(rows), len(rows[0]) if rows else 0

    def det(M):
        if len(M) == 1:
            return M[0][0]
        return sum((-1) ** j * M[0][j] * det([r[:j] + r[j + 1:] for r in M[1:]])
                   for j in range(len(M)))

    for k in range(min(m, n), 0, -1):
        for ri in itertools.combinations(range(m), k):
            for ci in itertools.combinations(range(n), k):
                if det([[rows[i][j] for j in ci] for i in ri]):
                    return k
    return 0


def test_rank_examples():
    assert rank(QMatrix.zeros(0, 0)) == 0
    assert rank(QMatrix.identity(3)) == 3
    assert rank(QMatrix([[1, 2], [2, 4]])) == 1


def test_kernel_examples():
    assert kernel_basis(QMatrix.identity(2)).ncols == 0
    assert kernel_basis(QMatrix.zeros(2, 2)) == QMatrix.identity(2)
    k = kernel_basis(QMatrix([[1, 1]]))
    assert k.columns() == [(F(-1), F(1))]  # free variable y = 1


def test_solve_examples():
    assert solve(QMatrix.identity(3), [1, F(2, 3), -4]) == (1, F(2, 3), -4)
    assert solve(QMatrix([[1, 0], [0, 0]]), [0, 1]) is None
    assert solve(QMatrix([[2]]), [3]) == (F(3, 2),)
    with pytest.raises(ValueError):
        solve(QMatrix.identity(2), [1])


small = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw, max_dim=4):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    rows = [[F(draw(small), draw(st.integers(1, 3))) for _ in range(n)] for _ in range(m)]
    return rows


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_nullity_and_oracle(rows):
    M = QMatrix(rows)
    K = kernel_basis(M)
    assert rank(M) + K.ncols == M.ncols
    assert rank(M) == brute_rank(rows)
    assert (M @ K).is_zero() if K.ncols else True


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_solve_is_exact(rows, b):
    M = QMatrix(rows)
    x = solve(M, b[: M.nrows])
    if x is not None:
        assert M.apply(x) == tuple(F(v) for v in b[: M.nrows])
    else:
        assert rank(M) < rank(linalg.hstack([M, QMatrix.from_columns([b[: M.nrows]], M.nrows)]))


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_kernel_recanonicalization_is_idempotent(rows):
    K = kernel_basis(QMatrix(rows))
    if K.ncols == 0:
        return
    # the kernel of the kernel's orthogonal system is the same canonical basis
    again = kernel_basis(QMatrix(rows))
    assert again == K
    red, piv = linalg.row_space(K.columns(), K.nrows)
    assert linalg.rank(QMatrix(red)) == K.ncols


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_backends_agree(rows):
    a = _kernels_py.rref([list(r) for r in rows], len(rows[0]))
    b = linalg._k.rref([list(r) for r in rows], len(rows[0]))
    assert a == b


@settings(max_examples=40, deadline=None)
@given(matrices(), matrices())
def test_matmul_backends_agree_with_naive_product(a, b):
    n = min(len(a[0]), len(b))
    a = [r[:n] for r in a]
    b = b[:n]
    cols = [list(c) for c in zip(*b)]
    naive = [tuple(sum((x * c[k] for k, x in enumerate(r)), F(0)) for c in cols) for r in a]
    assert _kernels_py.matmul(a, cols) == naive
    assert linalg._k.matmul(a, cols) == naive


def test_inverse_and_quotient():
    M = QMatrix([[2, 1], [1, 1]])
    assert (M @ M.inverse()).is_identity()
    with pytest.raises(ValueError):
        QMatrix([[1, 2], [2, 4]]).inverse()
    e = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    Qt = Quotient(e, [(1, 1, 0)], 3)
    assert Qt.dim == 2
    assert Qt.coords((1, 1, 0)) == (0, 0)
    assert Qt.coords((1, 0, 0)) == Qt.coords((0, -1, 0))
