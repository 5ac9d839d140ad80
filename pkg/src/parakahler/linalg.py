"""Exact matrices and subspaces over Scalar.

Pivoting is deterministic and decision-aware: an entry may serve as a pivot
only when it is certified nonzero (a nonzero rational constant, or a constant
times a product of declared-nonzero factors).  Columns holding entries whose
vanishing cannot be decided, and no certified alternative, abort with
UndecidablePivotError instead of branching.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    DimensionMismatchError,
    SingularMatrixError,
    UndecidablePivotError,
)
from .scalars import EMPTY_FACTS, Polynomial, Scalar, as_scalar


class Matrix:
    """Immutable rows x cols matrix of Scalars, row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        entries = tuple(as_scalar(e) for e in entries)
        if len(entries) != rows * cols:
            raise DimensionMismatchError(
                f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_rows(rows_list):
        rows = len(rows_list)
        cols = len(rows_list[0]) if rows else 0
        flat = []
        for r in rows_list:
            if len(r) != cols:
                raise DimensionMismatchError("ragged rows")
            flat.extend(r)
        return Matrix(rows, cols, flat)

    @staticmethod
    def identity(n):
        return Matrix(n, n, [Scalar.one() if i == j else Scalar.zero()
                             for i in range(n) for j in range(n)])

    @staticmethod
    def zeros(rows, cols):
        return Matrix(rows, cols, [Scalar.zero()] * (rows * cols))

    @staticmethod
    def diagonal(values):
        n = len(values)
        return Matrix(n, n, [as_scalar(values[i]) if i == j else Scalar.zero()
                             for i in range(n) for j in range(n)])

    # -- access ----------------------------------------------------------------

    def get(self, i, j):
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j):
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_list(self):
        return [list(self.row(i)) for i in range(self.rows)]

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other):
        self._same_shape(other)
        return Matrix(self.rows, self.cols,
                      [a.add(b) for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._same_shape(other)
        return Matrix(self.rows, self.cols,
                      [a.sub(b) for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return Matrix(self.rows, self.cols, [e.neg() for e in self.entries])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionMismatchError("matrix product shape mismatch")
            out = []
            for i in range(self.rows):
                for j in range(other.cols):
                    acc = Scalar.zero()
                    for k in range(self.cols):
                        acc = acc.add(self.get(i, k).mul(other.get(k, j)))
                    out.append(acc)
            return Matrix(self.rows, other.cols, out)
        return self.scale(other)

    def scale(self, s):
        s = as_scalar(s)
        return Matrix(self.rows, self.cols, [e.mul(s) for e in self.entries])

    def transpose(self):
        return Matrix(self.cols, self.rows,
                      [self.get(i, j) for j in range(self.cols) for i in range(self.rows)])

    def apply(self, vec):
        """Matrix-vector product on a length-cols vector of Scalars."""
        if len(vec) != self.cols:
            raise DimensionMismatchError("vector length mismatch")
        return tuple(
            _dot(self.row(i), vec) for i in range(self.rows)
        )

    def trace(self):
        if self.rows != self.cols:
            raise DimensionMismatchError("trace of non-square matrix")
        acc = Scalar.zero()
        for i in range(self.rows):
            acc = acc.add(self.get(i, i))
        return acc

    # -- predicates ----------------------------------------------------------------

    def is_zero(self):
        return all(e.is_zero() for e in self.entries)

    def is_symmetric(self):
        return self.rows == self.cols and all(
            self.get(i, j) == self.get(j, i)
            for i in range(self.rows) for j in range(i + 1, self.cols))

    def is_antisymmetric(self):
        return self.rows == self.cols and all(
            self.get(i, j) == self.get(j, i).neg()
            for i in range(self.rows) for j in range(i, self.cols))

    def all_rational(self):
        return all(e.is_rational() for e in self.entries)

    def substitute(self, bindings, facts=EMPTY_FACTS):
        return Matrix(self.rows, self.cols,
                      [e.substitute(bindings, facts) for e in self.entries])

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatchError("shape mismatch")

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __str__(self):
        rows = []
        for i in range(self.rows):
            rows.append("[" + ", ".join(str(e) for e in self.row(i)) + "]")
        return "[" + "; ".join(rows) + "]"

    def __repr__(self):
        return f"Matrix({self})"


def _dot(u, v):
    acc = Scalar.zero()
    for a, b in zip(u, v):
        acc = acc.add(as_scalar(a).mul(as_scalar(b)))
    return acc


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------

def rref(m, facts=EMPTY_FACTS):
    """Reduced row-echelon form with certified pivoting.

    Returns (reduced, rank, pivots) where pivots is the tuple of 0-based pivot
    column indices.  Pivot choice: lowest column index, then the lowest row
    index among rows with a certified-nonzero entry.
    """
    work = m.row_list()
    nrows, ncols = m.rows, m.cols
    pivots = []
    prow = 0
    for col in range(ncols):
        if prow >= nrows:
            break
        pivot_row = None
        undecided = None
        for r in range(prow, nrows):
            entry = work[r][col]
            if entry.is_zero():
                continue
            if facts.certifies_scalar(entry):
                pivot_row = r
                break
            if undecided is None:
                undecided = entry
        if pivot_row is None:
            if undecided is not None:
                raise UndecidablePivotError(undecided, f"in column {col + 1}")
            continue
        work[prow], work[pivot_row] = work[pivot_row], work[prow]
        inv = Scalar.one().div(work[prow][col], facts)
        work[prow] = [e.mul(inv) for e in work[prow]]
        for r in range(nrows):
            if r == prow:
                continue
            factor = work[r][col]
            if factor.is_zero():
                continue
            work[r] = [a.sub(factor.mul(b)) for a, b in zip(work[r], work[prow])]
        pivots.append(col)
        prow += 1
    reduced = Matrix.from_rows(work) if nrows else m
    return reduced, len(pivots), tuple(pivots)


def kernel(m, facts=EMPTY_FACTS):
    """Subspace {x : m x = 0}; basis rows come out in RREF."""
    reduced, rank, pivots = rref(m, facts)
    free_cols = [c for c in range(m.cols) if c not in pivots]
    basis_rows = []
    for fc in free_cols:
        vec = [Scalar.zero()] * m.cols
        vec[fc] = Scalar.one()
        for prow, pcol in enumerate(pivots):
            vec[pcol] = reduced.get(prow, fc).neg()
        basis_rows.append(vec)
    if not basis_rows:
        return Subspace.zero(m.cols)
    return Subspace.from_spanning_rows(m.cols, basis_rows, facts)


def determinant(m):
    """Exact determinant by division-free expansion (bitmask minor memo)."""
    if m.rows != m.cols:
        raise DimensionMismatchError("determinant of non-square matrix")
    n = m.rows
    if n == 0:
        return Scalar.one()
    memo = {(1 << n) - 1: Scalar.one()}

    def minor(row, colmask):
        # row == popcount(colmask), so colmask alone keys the minor
        if colmask in memo:
            return memo[colmask]
        acc = Scalar.zero()
        sign = 1
        for j in range(n):
            if colmask & (1 << j):
                continue
            entry = m.get(row, j)
            if not entry.is_zero():
                sub = minor(row + 1, colmask | (1 << j))
                term = entry.mul(sub)
                acc = acc.add(term if sign > 0 else term.neg())
            sign = -sign
        memo[colmask] = acc
        return acc

    return minor(0, 0)


def invert(m, facts=EMPTY_FACTS):
    """Exact inverse; raises SingularMatrixError when rank-deficient."""
    if m.rows != m.cols:
        raise DimensionMismatchError("inverse of non-square matrix")
    n = m.rows
    aug = Matrix.from_rows([
        list(m.row(i)) + [Scalar.one() if i == j else Scalar.zero() for j in range(n)]
        for i in range(n)
    ])
    reduced, rank, pivots = rref(aug, facts)
    if rank < n or any(p >= n for p in pivots[:n]) or pivots[:n] != tuple(range(n)):
        raise SingularMatrixError("singular matrix")
    inv_rows = [list(reduced.row(i))[n:] for i in range(n)]
    return Matrix.from_rows(inv_rows)


def signature(m):
    """Sylvester signature (positive, negative, null) of a symmetric rational
    matrix, via exact congruence diagonalization.  Zero diagonal pivots are
    handled by the hyperbolic-pair congruence step."""
    if m.rows != m.cols:
        raise DimensionMismatchError("signature of non-square matrix")
    if not m.is_symmetric():
        raise DimensionMismatchError("signature of non-symmetric matrix")
    if not m.all_rational():
        raise UndecidablePivotError(
            next(e for e in m.entries if not e.is_rational()),
            "(signature requires rational entries)")
    n = m.rows
    a = [[m.get(i, j).as_rational() for j in range(n)] for i in range(n)]
    pos = neg = 0
    active = list(range(n))
    while active:
        pivot = next((i for i in active if a[i][i] != 0), None)
        if pivot is None:
            pair = next(((i, j) for i in active for j in active
                         if i < j and a[i][j] != 0), None)
            if pair is None:
                break  # remaining block is zero
            i, j = pair
            # congruence e_i -> e_i + e_j makes the (i,i) entry 2*a[i][j]
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            pivot = i
        d = a[pivot][pivot]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(pivot)
        for r in active:
            f = Fraction(a[r][pivot], 1) / d
            if f == 0:
                continue
            for k in range(n):
                a[r][k] -= f * a[pivot][k]
            for k in range(n):
                a[k][r] -= f * a[k][pivot]
    return pos, neg, n - pos - neg


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------

class Subspace:
    """A linear subspace of Q^n stored as an RREF basis matrix.

    The RREF representation is canonical, so equality of stored bases is
    equality of subspaces.
    """

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient, basis):
        self.ambient = ambient
        self.basis = basis

    @staticmethod
    def from_spanning_rows(ambient, rows, facts=EMPTY_FACTS):
        if not rows:
            return Subspace.zero(ambient)
        reduced, rank, _ = rref(Matrix.from_rows(rows), facts)
        kept = [list(reduced.row(i)) for i in range(rank)]
        if not kept:
            return Subspace.zero(ambient)
        return Subspace(ambient, Matrix.from_rows(kept))

    @staticmethod
    def zero(ambient):
        return Subspace(ambient, Matrix(0, ambient, []))

    @staticmethod
    def full(ambient):
        return Subspace(ambient, Matrix.identity(ambient))

    @staticmethod
    def coordinate(ambient, indices_1based):
        rows = []
        for idx in sorted(indices_1based):
            v = [Scalar.zero()] * ambient
            v[idx - 1] = Scalar.one()
            rows.append(v)
        return Subspace.from_spanning_rows(ambient, rows)

    @property
    def dim(self):
        return self.basis.rows

    def basis_rows(self):
        return [self.basis.row(i) for i in range(self.basis.rows)]

    def constraints(self, facts=EMPTY_FACTS):
        """Matrix whose kernel is exactly this subspace."""
        if self.dim == 0:
            return Matrix.identity(self.ambient)
        ker = kernel(self.basis, facts)
        if ker.dim == 0:
            return Matrix(0, self.ambient, [])
        return ker.basis

    def contains_vector(self, vec, facts=EMPTY_FACTS):
        rows = self.basis_rows() + [list(vec)]
        _, rank, _ = rref(Matrix.from_rows(rows), facts)
        return rank == self.dim

    def contains(self, other, facts=EMPTY_FACTS):
        if other.ambient != self.ambient:
            raise DimensionMismatchError("ambient dimension mismatch")
        return all(self.contains_vector(r, facts) for r in other.basis_rows())

    def sum_with(self, other, facts=EMPTY_FACTS):
        self._check_ambient(other)
        return Subspace.from_spanning_rows(
            self.ambient, self.basis_rows() + other.basis_rows(), facts)

    def intersect(self, other, facts=EMPTY_FACTS):
        self._check_ambient(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient)
        stacked = Matrix.from_rows(
            [list(r) for r in self.constraints(facts).row_list()]
            + [list(r) for r in other.constraints(facts).row_list()])
        if stacked.rows == 0:
            return Subspace.full(self.ambient)
        return kernel(stacked, facts)

    def _check_ambient(self, other):
        if self.ambient != other.ambient:
            raise DimensionMismatchError("ambient dimension mismatch")

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __str__(self):
        if self.dim == 0:
            return "{0}"
        return f"span{self.basis}"

    def __repr__(self):
        return f"Subspace(dim={self.dim} of {self.ambient})"


def subspace_op(op, a, b, facts=EMPTY_FACTS):
    """Dispatch helper: 'sum' | 'intersect' | 'contains' | 'equals'."""
    if op == "sum":
        return a.sum_with(b, facts)
    if op == "intersect":
        return a.intersect(b, facts)
    if op == "contains":
        return a.contains(b, facts)
    if op == "equals":
        return a == b
    raise ValueError(f"unknown subspace op '{op}'")
