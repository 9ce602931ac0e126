"""Exact sparse linear algebra over the rationals.

Every number is a :class:`fractions.Fraction`. Matrices are immutable sparse
maps ``(row, col) -> Fraction`` with no stored zeros; elimination is plain
Gauss-Jordan with exact division.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Scalar = Fraction
BettiTable = tuple  # tuple[int, ...]


class StructuralError(RuntimeError):
    """An internal invariant failed (d∘d != 0, an image outside its target, ...)."""


def as_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use int, str or Fraction")
    return Fraction(x)


class Matrix:
    """Immutable sparse rational matrix."""

    __slots__ = ("rows", "cols", "_rows")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimension")
        self.rows = rows
        self.cols = cols
        data: dict[int, dict[int, Fraction]] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            v = as_scalar(v)
            if v:
                data.setdefault(r, {})[c] = v
        self._rows = data

    @classmethod
    def _from_rows(cls, rows: int, cols: int, data: dict[int, dict[int, Fraction]]) -> "Matrix":
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._rows = {r: row for r, row in data.items() if row}
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls._from_rows(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._from_rows(n, n, {i: {i: Fraction(1)} for i in range(n)})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[object]], cols: int | None = None) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else (cols or 0)
        entries = {}
        for r, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            for c, v in enumerate(row):
                entries[r, c] = v
        return cls(nrows, ncols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[object]], rows: int) -> "Matrix":
        data: dict[int, dict[int, Fraction]] = {}
        for c, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column length does not match row count")
            for r, v in enumerate(col):
                v = as_scalar(v)
                if v:
                    data.setdefault(r, {})[c] = v
        return cls._from_rows(rows, len(columns), data)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        r, c = key
        return self._rows.get(r, {}).get(c, Fraction(0))

    def items(self) -> Iterable[tuple[tuple[int, int], Fraction]]:
        for r in sorted(self._rows):
            row = self._rows[r]
            for c in sorted(row):
                yield (r, c), row[c]

    def row(self, r: int) -> dict[int, Fraction]:
        return dict(self._rows.get(r, {}))

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self._rows.values())

    def is_zero(self) -> bool:
        return not self._rows

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for r, row in self._rows.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def column(self, c: int) -> list[Fraction]:
        return [self._rows.get(r, {}).get(c, Fraction(0)) for r in range(self.rows)]

    def columns(self) -> list[list[Fraction]]:
        return self.transpose().to_dense()

    def transpose(self) -> "Matrix":
        data: dict[int, dict[int, Fraction]] = {}
        for r, row in self._rows.items():
            for c, v in row.items():
                data.setdefault(c, {})[r] = v
        return Matrix._from_rows(self.cols, self.rows, data)

    T = property(transpose)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, tuple(self.items())))

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def _combine(self, other: "Matrix", sign: int) -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        data = {r: dict(row) for r, row in self._rows.items()}
        for r, row in other._rows.items():
            target = data.setdefault(r, {})
            for c, v in row.items():
                s = target.get(c, 0) + sign * v
                if s:
                    target[c] = s
                else:
                    target.pop(c, None)
        return Matrix._from_rows(self.rows, self.cols, data)

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, 1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, -1)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, k) -> "Matrix":
        k = as_scalar(k)
        if not k:
            return Matrix.zeros(self.rows, self.cols)
        return Matrix._from_rows(
            self.rows, self.cols, {r: {c: k * v for c, v in row.items()} for r, row in self._rows.items()}
        )

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            data: dict[int, dict[int, Fraction]] = {}
            orows = other._rows
            for r, row in self._rows.items():
                acc: dict[int, Fraction] = {}
                for k, a in row.items():
                    for c, b in orows.get(k, {}).items():
                        acc[c] = acc.get(c, 0) + a * b
                acc = {c: v for c, v in acc.items() if v}
                if acc:
                    data[r] = acc
            return Matrix._from_rows(self.rows, other.cols, data)
        return self.apply(other)

    def apply(self, v: Sequence[object]) -> list[Fraction]:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for matrix with {self.cols} columns")
        out = [Fraction(0)] * self.rows
        for r, row in self._rows.items():
            s = Fraction(0)
            for c, a in row.items():
                x = v[c]
                if x:
                    s += a * x
            out[r] = s
        return out

    def select_rows(self, indices: Sequence[int]) -> "Matrix":
        return Matrix._from_rows(
            len(indices), self.cols, {i: dict(self._rows[r]) for i, r in enumerate(indices) if r in self._rows}
        )

    def select_columns(self, indices: Sequence[int]) -> "Matrix":
        return self.transpose().select_rows(indices).transpose()


def hstack(blocks: Sequence[Matrix], rows: int | None = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(rows or 0, 0)
    nrows = blocks[0].rows
    data: dict[int, dict[int, Fraction]] = {}
    offset = 0
    for b in blocks:
        if b.rows != nrows:
            raise ValueError("hstack row mismatch")
        for (r, c), v in b.items():
            data.setdefault(r, {})[c + offset] = v
        offset += b.cols
    return Matrix._from_rows(nrows, offset, data)


def vstack(blocks: Sequence[Matrix], cols: int | None = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(0, cols or 0)
    return hstack([b.transpose() for b in blocks]).transpose()


def block_matrix(row_sizes: Sequence[int], col_sizes: Sequence[int], blocks: Mapping[tuple[int, int], Matrix]) -> Matrix:
    """Assemble from blocks keyed by (block row, block col); missing blocks are zero."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    data: dict[int, dict[int, Fraction]] = {}
    for (bi, bj), b in blocks.items():
        if b.shape != (row_sizes[bi], col_sizes[bj]):
            raise ValueError(f"block ({bi}, {bj}) has shape {b.shape}, expected {(row_sizes[bi], col_sizes[bj])}")
        for (r, c), v in b.items():
            data.setdefault(r + roff[bi], {})[c + coff[bj]] = v
    return Matrix._from_rows(roff[-1], coff[-1], data)


def kron(a: Matrix, b: Matrix) -> Matrix:
    data: dict[int, dict[int, Fraction]] = {}
    for (r1, c1), x in a.items():
        for (r2, c2), y in b.items():
            data.setdefault(r1 * b.rows + r2, {})[c1 * b.cols + c2] = x * y
    return Matrix._from_rows(a.rows * b.rows, a.cols * b.cols, data)


# --- elimination -----------------------------------------------------------


def _pivot_key(rows: dict[int, dict[int, Fraction]], r: int, col: int):
    v = rows[r][col]
    # sparsest row first, then smallest numerator/denominator size, then index
    return (len(rows[r]), abs(v.numerator) + v.denominator, r)


def rref(m: Matrix) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon form.

    Returns the nonzero reduced rows (pivot entry normalized to 1, listed in
    pivot-column order) and the pivot columns. Columns are processed left to
    right; within a column the pivot row minimizes (row fill, entry size,
    row index), which keeps results deterministic.
    """
    work = {r: dict(row) for r, row in m._rows.items()}
    # column -> rows having a nonzero there (only among unpivoted rows)
    by_col: dict[int, set[int]] = {}
    for r, row in work.items():
        for c in row:
            by_col.setdefault(c, set()).add(r)
    reduced: list[tuple[int, dict[int, Fraction]]] = []
    pivots: list[int] = []
    for col in sorted(by_col):
        candidates = by_col.get(col)
        if not candidates:
            continue
        pr = min(candidates, key=lambda r: _pivot_key(work, r, col))
        prow = work.pop(pr)
        for c in prow:
            by_col[c].discard(pr)
        inv = 1 / prow[col]
        prow = {c: v * inv for c, v in prow.items()}
        for r in list(by_col[col]):
            row = work[r]
            f = row[col]
            for c, v in prow.items():
                s = row.get(c, 0) - f * v
                if s:
                    if c not in row:
                        by_col.setdefault(c, set()).add(r)
                    row[c] = s
                else:
                    if c in row:
                        del row[c]
                        by_col[c].discard(r)
        reduced.append((col, prow))
        pivots.append(col)
    # back substitution to reach reduced form
    for i in range(len(reduced) - 1, -1, -1):
        col, prow = reduced[i]
        for k in range(i):
            ocol, orow = reduced[k]
            f = orow.get(col)
            if f:
                for c, v in prow.items():
                    s = orow.get(c, 0) - f * v
                    if s:
                        orow[c] = s
                    else:
                        orow.pop(c, None)
    return [row for _, row in reduced], pivots


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return 0
    # eliminate along the shorter side
    if m.rows < m.cols:
        return len(rref(m.transpose())[1])
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> list[list[Fraction]]:
    """Basis of {v : m v = 0}, one vector per free column (1 there, 0 at other free columns)."""
    rows, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for pc, row in zip(pivots, rows):
            a = row.get(f)
            if a:
                v[pc] = -a
        basis.append(v)
    return basis


def free_columns(m: Matrix) -> list[int]:
    pivots = set(rref(m)[1])
    return [c for c in range(m.cols) if c not in pivots]


INCONSISTENT = None


def solve(m: Matrix, b: Sequence[object]) -> list[Fraction] | None:
    """Some x with m x = b, or ``None`` when the system is inconsistent.

    Free variables are set to zero, so the particular solution is fixed by the
    pivot choice in :func:`rref`.
    """
    if len(b) != m.rows:
        raise ValueError(f"right-hand side of length {len(b)} for {m.rows} rows")
    aug = hstack([m, Matrix.from_columns([list(b)], m.rows)])
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return INCONSISTENT
    x = [Fraction(0)] * m.cols
    for pc, row in zip(pivots, rows):
        x[pc] = row.get(m.cols, Fraction(0))
    return x


def column_space_rank(vectors: Sequence[Sequence[object]], length: int) -> int:
    if not vectors:
        return 0
    return rank(Matrix.from_columns(list(vectors), length))


# --- cochain complexes -----------------------------------------------------


@dataclass(frozen=True)
class FiniteComplex:
    """Cochain complex 0 -> C^0 -> ... -> C^pmax -> 0 of finite-dimensional spaces.

    ``d[p]`` has shape ``dims[p+1] x dims[p]``; the last map (out of C^pmax)
    is implicitly zero.
    """

    dims: tuple[int, ...]
    d: tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.d) != max(len(self.dims) - 1, 0):
            raise ValueError("need exactly one differential between consecutive degrees")
        for p, m in enumerate(self.d):
            if m.shape != (self.dims[p + 1], self.dims[p]):
                raise ValueError(f"d[{p}] has shape {m.shape}, expected {(self.dims[p + 1], self.dims[p])}")

    @property
    def pmax(self) -> int:
        return len(self.dims) - 1

    def differential(self, p: int) -> Matrix:
        """d: C^p -> C^{p+1}, with zero maps outside the stored range."""
        if 0 <= p < len(self.d):
            return self.d[p]
        src = self.dims[p] if 0 <= p < len(self.dims) else 0
        tgt = self.dims[p + 1] if 0 <= p + 1 < len(self.dims) else 0
        return Matrix.zeros(tgt, src)

    def check_square_zero(self) -> bool:
        return all((self.d[p + 1] @ self.d[p]).is_zero() for p in range(len(self.d) - 1))

    def dim(self, p: int) -> int:
        return self.dims[p] if 0 <= p < len(self.dims) else 0


def betti(c: FiniteComplex) -> BettiTable:
    if not c.check_square_zero():
        raise StructuralError("d∘d != 0; refusing to compute cohomology")
    ranks = [rank(m) for m in c.d]
    out = []
    for p, n in enumerate(c.dims):
        out_rank = ranks[p] if p < len(ranks) else 0
        in_rank = ranks[p - 1] if p >= 1 else 0
        out.append(n - out_rank - in_rank)
    return tuple(out)


def convolve(a: Sequence[int], b: Sequence[int]) -> BettiTable:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def format_scalar(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
