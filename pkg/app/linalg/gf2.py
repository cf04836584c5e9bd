"""
GF(2) vectors and column-major sparse matrices.

A column (or vector) is an int bitset: bit r set <=> entry in row r is 1.
Elimination is persistence-style column reduction keyed on the lowest
nonzero row (the highest set bit), so pivots, kernel bases and homology
representatives come out the same on every run.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from app.exceptions import DimensionMismatch, NotACycle

log = logging.getLogger("khtorus.gf2")

DENSE_THRESHOLD = 0.25
DENSE_MAX_CELLS = 4_000_000


def iter_bits(x: int) -> Iterator[int]:
    """Indices of the set bits of x, ascending."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class Gf2Vector:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise DimensionMismatch(f"negative vector length {self.length}")
        if self.bits < 0 or self.bits >> self.length:
            raise DimensionMismatch(f"bits outside a vector of length {self.length}")

    @classmethod
    def zeros(cls, length: int) -> Gf2Vector:
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, k: int) -> Gf2Vector:
        return cls(length, 1 << k)

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> Gf2Vector:
        bits = 0
        for k in support:
            if not 0 <= k < length:
                raise DimensionMismatch(f"index {k} outside a vector of length {length}")
            bits ^= 1 << k
        return cls(length, bits)

    def __add__(self, other: Gf2Vector) -> Gf2Vector:
        if other.length != self.length:
            raise DimensionMismatch(f"cannot add vectors of length {self.length} and {other.length}")
        return Gf2Vector(self.length, self.bits ^ other.bits)

    __sub__ = __add__

    def __bool__(self) -> bool:
        return self.bits != 0

    def __getitem__(self, k: int) -> int:
        return (self.bits >> k) & 1

    def support(self) -> list[int]:
        return list(iter_bits(self.bits))

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.length, dtype=np.uint8)
        for k in iter_bits(self.bits):
            out[k] = 1
        return out


@dataclass(frozen=True)
class Gf2SparseMatrix:
    rows: int
    cols: int
    columns: tuple[int, ...]

    def __post_init__(self):
        if len(self.columns) != self.cols:
            raise DimensionMismatch(f"expected {self.cols} columns, got {len(self.columns)}")
        limit = 1 << self.rows
        for c in self.columns:
            if c < 0 or c >= limit:
                raise DimensionMismatch(f"column entry outside {self.rows} rows")

    # ── constructors ──────────────────────────────────────────────────────

    @classmethod
    def zero(cls, rows: int, cols: int) -> Gf2SparseMatrix:
        return cls(rows, cols, (0,) * cols)

    @classmethod
    def identity(cls, n: int) -> Gf2SparseMatrix:
        return cls(n, n, tuple(1 << k for k in range(n)))

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[int | Gf2Vector]) -> Gf2SparseMatrix:
        cols = tuple(c.bits if isinstance(c, Gf2Vector) else c for c in columns)
        return cls(rows, len(cols), cols)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int]]) -> Gf2SparseMatrix:
        """Entries are (row, col) pairs; a repeated pair cancels, as it does over GF(2)."""
        data = [0] * cols
        for r, c in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise DimensionMismatch(f"entry ({r}, {c}) outside a {rows}x{cols} matrix")
            data[c] ^= 1 << r
        return cls(rows, cols, tuple(data))

    @classmethod
    def from_dense(cls, array: np.ndarray) -> Gf2SparseMatrix:
        a = np.asarray(array, dtype=np.uint8) & 1
        rows, cols = a.shape
        data = []
        for c in range(cols):
            packed = np.packbits(a[:, c], bitorder="little").tobytes()
            data.append(int.from_bytes(packed, "little"))
        return cls(rows, cols, tuple(data))

    # ── inspection ────────────────────────────────────────────────────────

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return sum(c.bit_count() for c in self.columns)

    @property
    def density(self) -> float:
        cells = self.rows * self.cols
        return self.nnz / cells if cells else 0.0

    def column(self, k: int) -> Gf2Vector:
        return Gf2Vector(self.rows, self.columns[k])

    def entries(self) -> list[tuple[int, int]]:
        return sorted((r, c) for c, col in enumerate(self.columns) for r in iter_bits(col))

    def is_zero(self) -> bool:
        return not any(self.columns)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for c, col in enumerate(self.columns):
            for r in iter_bits(col):
                out[r, c] = 1
        return out

    # ── algebra ───────────────────────────────────────────────────────────

    def transpose(self) -> Gf2SparseMatrix:
        data = [0] * self.rows
        for c, col in enumerate(self.columns):
            bit = 1 << c
            for r in iter_bits(col):
                data[r] |= bit
        return Gf2SparseMatrix(self.cols, self.rows, tuple(data))

    def apply(self, v: Gf2Vector) -> Gf2Vector:
        if v.length != self.cols:
            raise DimensionMismatch(f"vector of length {v.length} for a {self.rows}x{self.cols} matrix")
        out = 0
        for c in iter_bits(v.bits):
            out ^= self.columns[c]
        return Gf2Vector(self.rows, out)

    def __matmul__(self, other):
        if isinstance(other, Gf2Vector):
            return self.apply(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot compose {self.shape} with {other.shape}")
        data = []
        for col in other.columns:
            acc = 0
            for r in iter_bits(col):
                acc ^= self.columns[r]
            data.append(acc)
        return Gf2SparseMatrix(self.rows, other.cols, tuple(data))

    def __add__(self, other: Gf2SparseMatrix) -> Gf2SparseMatrix:
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return Gf2SparseMatrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.columns, other.columns)))

    def hstack(self, other: Gf2SparseMatrix) -> Gf2SparseMatrix:
        if self.rows != other.rows:
            raise DimensionMismatch(f"cannot stack {self.shape} beside {other.shape}")
        return Gf2SparseMatrix(self.rows, self.cols + other.cols, self.columns + other.columns)

    def kron(self, other: Gf2SparseMatrix) -> Gf2SparseMatrix:
        """Kronecker product; row (r1, r2) -> r1 * other.rows + r2, same for columns."""
        data = []
        for a in self.columns:
            rows_a = list(iter_bits(a))
            for b in other.columns:
                acc = 0
                for r1 in rows_a:
                    acc |= b << (r1 * other.rows)
                data.append(acc)
        return Gf2SparseMatrix(self.rows * other.rows, self.cols * other.cols, tuple(data))


class ColumnReduction:
    """
    Incremental column reduction. Each stored pivot column carries a tag
    (an int bitset) that is XOR-accumulated alongside the column, so callers
    can track which inserted columns a reduced column is made of.
    """

    def __init__(self, rows: int):
        self.rows = rows
        self._pivots: dict[int, int] = {}
        self._columns: list[int] = []
        self._tags: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._columns)

    def reduce(self, column: int, tag: int = 0) -> tuple[int, int]:
        pivots, columns, tags = self._pivots, self._columns, self._tags
        while column:
            slot = pivots.get(column.bit_length() - 1)
            if slot is None:
                break
            column ^= columns[slot]
            tag ^= tags[slot]
        return column, tag

    def insert(self, column: int, tag: int = 0) -> tuple[bool, int]:
        """Keep column if independent of the pivots. Returns (kept, accumulated tag)."""
        column, tag = self.reduce(column, tag)
        if column:
            self._pivots[column.bit_length() - 1] = len(self._columns)
            self._columns.append(column)
            self._tags.append(tag)
            return True, tag
        return False, tag


def _dense_rank(m: Gf2SparseMatrix) -> int:
    a = m.to_dense().astype(bool)
    rank = 0
    rows, cols = a.shape
    for c in range(cols):
        if rank == rows:
            break
        hits = np.nonzero(a[rank:, c])[0]
        if hits.size == 0:
            continue
        pivot = rank + hits[0]
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
        below = np.nonzero(a[:, c])[0]
        below = below[below != rank]
        a[below] ^= a[rank]
        rank += 1
    return rank


def rank(m: Gf2SparseMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.rows * m.cols <= DENSE_MAX_CELLS and m.density > DENSE_THRESHOLD:
        return _dense_rank(m)
    reduction = ColumnReduction(m.rows)
    for col in m.columns:
        reduction.insert(col)
    return reduction.rank


def kernel_basis(m: Gf2SparseMatrix) -> list[Gf2Vector]:
    reduction = ColumnReduction(m.rows)
    basis = []
    for k, col in enumerate(m.columns):
        kept, tag = reduction.insert(col, 1 << k)
        if not kept:
            basis.append(Gf2Vector(m.cols, tag))
    return basis


def solve_in_span(m: Gf2SparseMatrix, v: Gf2Vector) -> Gf2Vector | None:
    """Coefficients x with m @ x == v, or None when v is outside the column span."""
    if v.length != m.rows:
        raise DimensionMismatch(f"vector of length {v.length} against {m.rows} rows")
    reduction = ColumnReduction(m.rows)
    for k, col in enumerate(m.columns):
        reduction.insert(col, 1 << k)
    rest, tag = reduction.reduce(v.bits)
    if rest:
        return None
    return Gf2Vector(m.cols, tag)


class QuotientBasis:
    """
    A fixed complement basis of span(boundaries) inside span(cycles).
    Complement elements are the cycle columns that are independent of the
    boundaries and of the earlier cycle columns, taken in column order.
    """

    def __init__(self, cycles: Gf2SparseMatrix, boundaries: Gf2SparseMatrix):
        if cycles.rows != boundaries.rows:
            raise DimensionMismatch(f"cycles have {cycles.rows} rows, boundaries {boundaries.rows}")
        self.rows = cycles.rows
        self._reduction = ColumnReduction(self.rows)
        for col in boundaries.columns:
            self._reduction.insert(col)
        self.boundary_rank = self._reduction.rank
        self.representatives: list[Gf2Vector] = []
        for col in cycles.columns:
            kept, _ = self._reduction.insert(col, 1 << len(self.representatives))
            if kept:
                self.representatives.append(Gf2Vector(self.rows, col))

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def coordinates(self, v: Gf2Vector) -> Gf2Vector:
        if v.length != self.rows:
            raise DimensionMismatch(f"vector of length {v.length} against {self.rows} rows")
        rest, tag = self._reduction.reduce(v.bits)
        if rest:
            raise NotACycle("vector is not in the span of the cycles")
        return Gf2Vector(self.dim, tag)

    def is_boundary(self, v: Gf2Vector) -> bool:
        return not self.coordinates(v)


def quotient_coordinates(cycles: Gf2SparseMatrix, boundaries: Gf2SparseMatrix, v: Gf2Vector) -> Gf2Vector:
    return QuotientBasis(cycles, boundaries).coordinates(v)
