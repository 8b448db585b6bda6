"""
Rational Linear Algebra Module
Exact sparse row reduction over QQ, backed by sympy's DomainMatrix
"""

import logging
from dataclasses import dataclass
from typing import Dict, Hashable, Iterator, List, Mapping, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from errors import ColumnLabelMismatch

logger = logging.getLogger(__name__)

Rational = QQ.dtype
ZERO = QQ(0)
ONE = QQ(1)

Row = Dict[int, Rational]


def rational(value, denominator: int = 1) -> Rational:
    """Coerce ints, 'p/q' strings and QQ elements into a reduced QQ element"""
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            numerator, den = text.split("/", 1)
            return QQ(int(numerator), int(den))
        return QQ(int(text))
    if denominator != 1:
        return QQ(int(value), int(denominator))
    return QQ.convert(value)


def format_rational(value: Rational) -> str:
    """Print a rational as 'p' or 'p/q'"""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class SparseMatrix:
    """Rows of a rational matrix stored as {row: {col: value}} with no zeros"""

    nrows: int
    ncols: int
    entries: Mapping[int, Mapping[int, Rational]]
    labels: Optional[Tuple[Hashable, ...]] = None

    @classmethod
    def from_rows(cls, rows: Sequence[Mapping[int, object]], ncols: int,
                  labels: Optional[Tuple[Hashable, ...]] = None) -> "SparseMatrix":
        entries: Dict[int, Row] = {}
        for i, row in enumerate(rows):
            clean = {}
            for j, value in row.items():
                if not 0 <= j < ncols:
                    raise IndexError(f"column {j} outside 0..{ncols - 1}")
                value = rational(value)
                if value:
                    clean[j] = value
            if clean:
                entries[i] = clean
        return cls(len(rows), ncols, entries, labels)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[object]],
                   labels: Optional[Tuple[Hashable, ...]] = None) -> "SparseMatrix":
        ncols = len(rows[0]) if rows else (len(labels) if labels else 0)
        return cls.from_rows([dict(enumerate(r)) for r in rows], ncols, labels)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, i: int) -> Mapping[int, Rational]:
        return self.entries.get(i, {})

    def nonzero_rows(self) -> Iterator[Mapping[int, Rational]]:
        for i in sorted(self.entries):
            yield self.entries[i]

    def to_dense(self) -> List[List[Rational]]:
        dense = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for i, row in self.entries.items():
            for j, value in row.items():
                dense[i][j] = value
        return dense

    def to_domain_matrix(self) -> DomainMatrix:
        rows = {i: dict(row) for i, row in self.entries.items()}
        return DomainMatrix(rows, (self.nrows, self.ncols), QQ)

    def vstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.ncols:
            raise ColumnLabelMismatch(f"cannot stack {self.ncols} and {other.ncols} columns")
        entries = dict(self.entries)
        for i, row in other.entries.items():
            entries[self.nrows + i] = row
        return SparseMatrix(self.nrows + other.nrows, self.ncols, entries, self.labels)


@dataclass(frozen=True)
class RrefResult:
    """Reduced row echelon form with its rank and pivot columns"""

    reduced: SparseMatrix
    rank: int
    pivots: Tuple[int, ...]

    def __iter__(self):
        return iter((self.reduced, self.rank, self.pivots))

    def basis_rows(self) -> List[Mapping[int, Rational]]:
        return [self.reduced.row(i) for i in range(self.rank)]


def rref(m: SparseMatrix) -> RrefResult:
    """Reduced row echelon form; pivots are the first nonzero column of each row"""
    if not m.entries:
        return RrefResult(SparseMatrix(m.nrows, m.ncols, {}, m.labels), 0, ())
    reduced, pivots = m.to_domain_matrix().rref()
    rows = reduced.to_sparse().rep
    entries = {i: dict(row) for i, row in rows.items() if row}
    return RrefResult(SparseMatrix(m.nrows, m.ncols, entries, m.labels), len(pivots), tuple(pivots))


def rank(m: SparseMatrix) -> int:
    return rref(m).rank


def kernel_basis(m: SparseMatrix) -> List[List[Rational]]:
    """Basis of {v : m.v = 0} as dense rational vectors"""
    if not m.entries:
        return [[ONE if j == i else ZERO for j in range(m.ncols)] for i in range(m.ncols)]
    null = m.to_domain_matrix().nullspace()
    return [list(vector) for vector in null.to_list()]


def subspace_equal(a: SparseMatrix, b: SparseMatrix) -> bool:
    """True iff the row spans of a and b coincide"""
    if a.ncols != b.ncols:
        raise ColumnLabelMismatch(f"column counts differ: {a.ncols} vs {b.ncols}")
    if a.labels is not None and b.labels is not None and a.labels != b.labels:
        raise ColumnLabelMismatch("matrices use different column labelings")
    rank_a = rank(a)
    if rank_a != rank(b):
        return False
    return rank(a.vstack(b)) == rank_a


def inverse(m: SparseMatrix) -> SparseMatrix:
    """Inverse of a square invertible matrix"""
    if m.nrows != m.ncols:
        raise ValueError(f"cannot invert a {m.nrows}x{m.ncols} matrix")
    if m.nrows == 0:
        return m
    inv = m.to_domain_matrix().to_dense().inv()
    return SparseMatrix.from_dense(inv.to_list(), m.labels)


class RowSpaceAccumulator:
    """Collects rows in chunks and keeps a reduced basis of their span"""

    def __init__(self, ncols: int, chunk_rows: int = 20000,
                 labels: Optional[Tuple[Hashable, ...]] = None):
        self.ncols = ncols
        self.chunk_rows = max(1, chunk_rows)
        self.labels = labels
        self._basis: List[Row] = []
        self._pending: List[Row] = []
        self._pivots: Tuple[int, ...] = ()
        self.rows_seen = 0

    def add(self, row: Row) -> None:
        if not row:
            return
        self._pending.append(row)
        self.rows_seen += 1
        if len(self._pending) >= self.chunk_rows:
            self._flush()

    def _flush(self) -> None:
        if not self._pending:
            return
        rows = self._basis + self._pending
        entries = {i: r for i, r in enumerate(rows)}
        result = rref(SparseMatrix(len(rows), self.ncols, entries, self.labels))
        self._basis = [dict(r) for r in result.basis_rows()]
        self._pivots = result.pivots
        self._pending = []
        logger.debug("row space chunk reduced: rank %d over %d columns", result.rank, self.ncols)

    def result(self) -> RrefResult:
        self._flush()
        entries = {i: r for i, r in enumerate(self._basis)}
        reduced = SparseMatrix(len(self._basis), self.ncols, entries, self.labels)
        return RrefResult(reduced, len(self._basis), self._pivots)
