"""Exact dense linear algebra over a field.

Matrices are small and dense; rows/columns may be zero-sized.  Elimination
always picks the leftmost pivot in the topmost available row, so every basis,
retraction and quotient produced here is deterministic.
"""

from __future__ import annotations

from .errors import NotInvertibleError, ShapeError
from .fields import Field


class Mat:
    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: list[list]):
        self.field = field
        self.data = data
        self.rows = len(data)
        self.cols = len(data[0]) if data else 0
        if any(len(r) != self.cols for r in data):
            raise ShapeError("ragged rows")

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero(field: Field, rows: int, cols: int) -> "Mat":
        z = field.zero
        return Mat(field, [[z] * cols for _ in range(rows)]) if rows else Mat.empty(field, 0, cols)

    @staticmethod
    def empty(field: Field, rows: int, cols: int) -> "Mat":
        m = Mat.__new__(Mat)
        m.field = field
        m.rows = rows
        m.cols = cols
        m.data = [[field.zero] * cols for _ in range(rows)]
        return m

    @staticmethod
    def identity(field: Field, n: int) -> "Mat":
        m = Mat.zero(field, n, n)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    @staticmethod
    def from_int_rows(field: Field, rows: list[list[int]]) -> "Mat":
        return Mat(field, [[field.of(x) for x in r] for r in rows])

    @staticmethod
    def column(field: Field, entries: list) -> "Mat":
        return Mat(field, [[e] for e in entries])

    # -- basics -------------------------------------------------------
    def copy(self) -> "Mat":
        if self.rows == 0 or self.cols == 0:
            return Mat.zero(self.field, self.rows, self.cols)
        return Mat(self.field, [r[:] for r in self.data])

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and other.rows == self.rows
            and other.cols == self.cols
            and other.data == self.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        if self.rows == 0 or self.cols == 0:
            return f"Mat({self.rows}x{self.cols})"
        body = "; ".join(" ".join(str(x) for x in r) for r in self.data)
        return f"Mat[{body}]"

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for r in self.data for x in r)

    def __add__(self, other: "Mat") -> "Mat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("add shape mismatch")
        if self.rows == 0 or self.cols == 0:
            return Mat.zero(self.field, self.rows, self.cols)
        return Mat(
            self.field,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
        )

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def __neg__(self) -> "Mat":
        if self.rows == 0 or self.cols == 0:
            return Mat.zero(self.field, self.rows, self.cols)
        return Mat(self.field, [[-x for x in r] for r in self.data])

    def scale(self, c) -> "Mat":
        if self.rows == 0 or self.cols == 0:
            return Mat.zero(self.field, self.rows, self.cols)
        return Mat(self.field, [[c * x for x in r] for r in self.data])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ShapeError(f"matmul {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Mat.zero(self.field, self.rows, other.cols)
        z = self.field.zero
        out = [[z] * other.cols for _ in range(self.rows)]
        for i in range(self.rows):
            row = self.data[i]
            orow = out[i]
            for k in range(self.cols):
                a = row[k]
                if not a:
                    continue
                brow = other.data[k]
                for j in range(other.cols):
                    b = brow[j]
                    if b:
                        orow[j] = orow[j] + a * b
        return Mat(self.field, out)

    @property
    def T(self) -> "Mat":
        if self.cols == 0 or self.rows == 0:
            return Mat.zero(self.field, self.cols, self.rows)
        return Mat(
            self.field,
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    def col(self, j: int) -> "Mat":
        if self.rows == 0:
            return Mat.zero(self.field, 0, 1)
        return Mat(self.field, [[self.data[i][j]] for i in range(self.rows)])

    def take_cols(self, idx: list[int]) -> "Mat":
        if self.rows == 0 or not idx:
            return Mat.zero(self.field, self.rows, len(idx))
        return Mat(self.field, [[r[j] for j in idx] for r in self.data])

    def take_rows(self, idx: list[int]) -> "Mat":
        if not idx or self.cols == 0:
            return Mat.zero(self.field, len(idx), self.cols)
        return Mat(self.field, [self.data[i][:] for i in idx])

    # -- elimination ---------------------------------------------------
    def rref(self) -> tuple["Mat", list[int]]:
        """Reduced row echelon form and pivot column indices."""
        if self.rows == 0 or self.cols == 0:
            return Mat.zero(self.field, self.rows, self.cols), []
        a = [r[:] for r in self.data]
        pivots: list[int] = []
        row = 0
        for col in range(self.cols):
            piv = next((r for r in range(row, self.rows) if a[r][col]), None)
            if piv is None:
                continue
            a[row], a[piv] = a[piv], a[row]
            inv = self.field.one / a[row][col]
            a[row] = [x * inv for x in a[row]]
            for r in range(self.rows):
                if r != row and a[r][col]:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[row])]
            pivots.append(col)
            row += 1
            if row == self.rows:
                break
        return Mat(self.field, a), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "Mat":
        """Columns form a basis of the null space (deterministic)."""
        R, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in pivots]
        basis = []
        for j in free:
            v = [self.field.zero] * self.cols
            v[j] = self.field.one
            for r, pc in enumerate(pivots):
                v[pc] = -R.data[r][j]
            basis.append(v)
        return Mat(self.field, [[b[i] for b in basis] for i in range(self.cols)]) if basis else Mat.zero(self.field, self.cols, 0)

    def image_basis(self) -> "Mat":
        """Columns: the pivot columns of the original matrix."""
        _, pivots = self.rref()
        return self.take_cols(pivots)

    def solve(self, b: "Mat") -> "Mat" | None:
        """X with self @ X = b, or None if inconsistent (any solution)."""
        if b.rows != self.rows:
            raise ShapeError("solve shape mismatch")
        aug = Mat(self.field, [self.data[i] + b.data[i] for i in range(self.rows)]) \
            if self.rows else Mat.zero(self.field, 0, self.cols + b.cols)
        R, pivots = aug.rref()
        pivots_in_a = [p for p in pivots if p < self.cols]
        if len(pivots_in_a) != len(pivots):
            return None
        out = Mat.zero(self.field, self.cols, b.cols)
        for r, pc in enumerate(pivots_in_a):
            for j in range(b.cols):
                out.data[pc][j] = R.data[r][self.cols + j]
        return out

    def inverse(self) -> "Mat":
        if self.rows != self.cols:
            raise ShapeError("only square matrices invert")
        x = self.solve(Mat.identity(self.field, self.rows))
        if x is None or (self @ x) != Mat.identity(self.field, self.rows):
            raise NotInvertibleError("matrix is singular")
        return x

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows


# -- block assembly ----------------------------------------------------
def hstack(field: Field, mats: list[Mat], rows: int | None = None) -> Mat:
    mats = [m for m in mats]
    if not mats:
        if rows is None:
            raise ShapeError("hstack of nothing needs an explicit row count")
        return Mat.zero(field, rows, 0)
    r = mats[0].rows
    if any(m.rows != r for m in mats):
        raise ShapeError("hstack row mismatch")
    total = sum(m.cols for m in mats)
    if r == 0 or total == 0:
        return Mat.zero(field, r, total)
    return Mat(field, [sum((m.data[i] for m in mats), []) for i in range(r)])


def vstack(field: Field, mats: list[Mat], cols: int | None = None) -> Mat:
    mats = [m for m in mats]
    if not mats:
        if cols is None:
            raise ShapeError("vstack of nothing needs an explicit column count")
        return Mat.zero(field, 0, cols)
    c = mats[0].cols
    if any(m.cols != c for m in mats):
        raise ShapeError("vstack column mismatch")
    total = sum(m.rows for m in mats)
    if total == 0 or c == 0:
        return Mat.zero(field, total, c)
    return Mat(field, [r[:] for m in mats for r in m.data])


def block_matrix(field: Field, grid: list[list[Mat]]) -> Mat:
    return vstack(field, [hstack(field, row) for row in grid])


# -- subspaces ---------------------------------------------------------
def independent_columns(m: Mat) -> Mat:
    return m.image_basis()


def subspace_package(basis: Mat):
    """For a subspace U <= k^n given by an independent-column basis, return

    (retraction, proj, section):
      retraction : U-coords of the U-component, retraction @ basis = I
      proj       : coordinates on the quotient k^n / U
      section    : coset representatives, proj @ section = I, proj @ basis = 0

    The complement is spanned by standard basis vectors chosen greedily by
    index, so everything is deterministic.
    """
    field = basis.field
    n = basis.rows
    r = basis.cols
    chosen: list[int] = []
    work = basis
    cur_rank = basis.rank()
    if cur_rank != r:
        raise ShapeError("basis columns are dependent")
    for i in range(n):
        if len(chosen) == n - r:
            break
        e = Mat.zero(field, n, 1)
        e.data[i][0] = field.one
        cand = hstack(field, [work, e])
        if cand.rank() > cur_rank:
            chosen.append(i)
            work = cand
            cur_rank += 1
    section = Mat.zero(field, n, n - r)
    for j, i in enumerate(chosen):
        section.data[i][j] = field.one
    full = hstack(field, [basis, section])
    inv = full.inverse()
    retraction = inv.take_rows(list(range(r)))
    proj = inv.take_rows(list(range(r, n)))
    return retraction, proj, section


def coords_in(basis: Mat, vectors: Mat) -> Mat:
    """Coordinates of ``vectors`` in ``basis``; ShapeError if not contained."""
    x = basis.solve(vectors)
    if x is None or (basis @ x) != vectors:
        raise ShapeError("vectors do not lie in the span of the basis")
    return x


def intersect_column_spaces(u: Mat, v: Mat) -> Mat:
    """Basis of col(u) & col(v), via the kernel of [u | -v]."""
    if u.rows != v.rows:
        raise ShapeError("ambient dimension mismatch")
    field = u.field
    if u.cols == 0 or v.cols == 0:
        return Mat.zero(field, u.rows, 0)
    k = hstack(field, [u, -v]).kernel_basis()
    top = k.take_rows(list(range(u.cols)))
    return independent_columns(u @ top)
