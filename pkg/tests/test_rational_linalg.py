import numpy as np
import pytest
from sympy import QQ, Matrix

from errors import ColumnLabelMismatch
from rational_linalg import (
    RowSpaceAccumulator,
    SparseMatrix,
    format_rational,
    inverse,
    kernel_basis,
    rank,
    rational,
    rref,
    subspace_equal,
)


def test_rational_parsing_and_printing():
    assert rational("3/6") == QQ(1, 2)
    assert rational(-4) == QQ(-4)
    assert rational(2, 4) == QQ(1, 2)
    assert format_rational(QQ(-3, 4)) == "-3/4"
    assert format_rational(QQ(5)) == "5"


def test_from_rows_drops_zeros_and_checks_bounds():
    m = SparseMatrix.from_rows([{0: 0, 1: 2}, {}], 2)
    assert m.entries == {0: {1: QQ(2)}}
    assert m.shape == (2, 2)
    with pytest.raises(IndexError):
        SparseMatrix.from_rows([{2: 1}], 2)


def test_rref_small_cases():
    identity = rref(SparseMatrix.from_dense([[1, 0], [0, 1]]))
    assert identity.rank == 2
    assert identity.pivots == (0, 1)

    zero = rref(SparseMatrix.from_dense([[0, 0], [0, 0]]))
    assert zero.rank == 0
    assert zero.pivots == ()

    reduced, r, pivots = rref(SparseMatrix.from_dense([[1, 2], [2, 4]]))
    assert r == 1
    assert pivots == (0,)
    assert reduced.row(0) == {0: QQ(1), 1: QQ(2)}


def test_kernel_basis_examples():
    assert kernel_basis(SparseMatrix.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == []
    assert len(kernel_basis(SparseMatrix.from_dense([[0, 0]]))) == 2
    (vector,) = kernel_basis(SparseMatrix.from_dense([[1, 1]]))
    assert vector[0] + vector[1] == 0
    assert vector[0] != 0


def test_subspace_equal_examples():
    assert subspace_equal(SparseMatrix.from_dense([[1, 0]]), SparseMatrix.from_dense([[2, 0]]))
    assert not subspace_equal(SparseMatrix.from_dense([[1, 0]]), SparseMatrix.from_dense([[0, 1]]))
    assert subspace_equal(SparseMatrix.from_dense([[1, 1], [1, -1]]), SparseMatrix.from_dense([[1, 0], [0, 1]]))


def test_subspace_equal_rejects_mismatched_columns():
    with pytest.raises(ColumnLabelMismatch):
        subspace_equal(SparseMatrix.from_dense([[1, 0]]), SparseMatrix.from_dense([[1, 0, 0]]))
    with pytest.raises(ColumnLabelMismatch):
        subspace_equal(SparseMatrix.from_dense([[1, 0]], ("a", "b")), SparseMatrix.from_dense([[1, 0]], ("b", "a")))


def test_inverse_of_triangular_matrix():
    inv = inverse(SparseMatrix.from_dense([[1, 1], [0, 2]]))
    assert inv.to_dense() == [[QQ(1), QQ(-1, 2)], [QQ(0), QQ(1, 2)]]


def test_random_matrices_against_dense_rank():
    rng = np.random.default_rng(7)
    for _ in range(50):
        nrows, ncols = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        dense = rng.integers(-2, 3, size=(nrows, ncols)).tolist()
        m = SparseMatrix.from_dense(dense)
        result = rref(m)
        assert result.rank == Matrix(dense).rank()
        assert rref(result.reduced).reduced.entries == result.reduced.entries
        assert result.rank + len(kernel_basis(m)) == ncols


def test_accumulator_matches_single_reduction():
    rows = [{0: 1, 2: 1}, {1: 1}, {0: 2, 1: 3, 2: 2}, {2: 5}, {0: 1}]
    accumulator = RowSpaceAccumulator(3, chunk_rows=2)
    for row in rows:
        accumulator.add({j: rational(v) for j, v in row.items()})
    accumulator.add({})
    result = accumulator.result()
    assert accumulator.rows_seen == 5
    assert result.rank == rank(SparseMatrix.from_rows(rows, 3)) == 3
    assert result.pivots == (0, 1, 2)
