"""Exact integer matrix algebra.

Everything here works on Python ints, so there is no overflow and no rounding.
The Smith normal form only ever uses the three unimodular moves (add an
integer multiple of one line to another, negate a line, swap two lines),
applied to rows and columns alike, and records them in the transforms.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

__all__ = [
    "IntMatrix",
    "SnfResult",
    "ModKernel",
    "Transform",
    "det",
    "rank",
    "first_minor_abs",
    "smith_normal_form",
    "solve_mod_n",
    "carry_transform",
]


class IntMatrix:
    """Dense matrix of arbitrary-precision integers.

    Instances are treated as immutable: every operation returns a new matrix.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Iterable[int]):
        data = tuple(int(e) for e in entries)
        if rows < 0 or cols < 0 or len(data) != rows * cols:
            raise ValueError(
                f"entries length {len(data)} does not match shape {rows}x{cols}"
            )
        self.rows = rows
        self.cols = cols
        self._data = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, itertools.chain.from_iterable(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int | None = None) -> "IntMatrix":
        if rows is None:
            rows = len(columns[0]) if columns else 0
        return cls.from_rows([list(c) for c in columns], cols=rows).transpose()

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, size: int) -> "IntMatrix":
        return cls(size, size, (int(i == j) for i in range(size) for j in range(size)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple[int, ...]:
        return self._data

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index {index} out of range for {self.rows}x{self.cols}")
        return self._data[i * self.cols + j]

    def row(self, i: int) -> list[int]:
        return list(self._data[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> list[int]:
        return list(self._data[j::self.cols]) if self.cols else []

    def tolist(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def columns(self) -> list[list[int]]:
        return [self.col(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         (self._data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    def delete_row(self, i: int) -> "IntMatrix":
        if not 0 <= i < self.rows:
            raise IndexError(f"row {i} out of range")
        rows = self.tolist()
        del rows[i]
        return IntMatrix.from_rows(rows, cols=self.cols)

    def delete_col(self, j: int) -> "IntMatrix":
        if not 0 <= j < self.cols:
            raise IndexError(f"column {j} out of range")
        rows = self.tolist()
        for r in rows:
            del r[j]
        return IntMatrix.from_rows(rows, cols=self.cols - 1)

    def select_rows(self, indices: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_rows([self.row(i) for i in indices], cols=self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def column_sum(self) -> list[int]:
        return [sum(self.row(i)) for i in range(self.rows)]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        a, b = self.tolist(), other.columns()
        return IntMatrix.from_rows(
            [[sum(x * y for x, y in zip(r, c)) for c in b] for r in a], cols=other.cols
        )

    def apply(self, vector: Sequence[int]) -> list[int]:
        if len(vector) != self.cols:
            raise ValueError(f"vector of length {len(vector)} for {self.cols} columns")
        return [sum(a * x for a, x in zip(self.row(i), vector)) for i in range(self.rows)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r})" if self.rows else f"IntMatrix.zeros(0, {self.cols})"


def _as_rows(m: IntMatrix | Sequence[Sequence[int]]) -> list[list[int]]:
    if isinstance(m, IntMatrix):
        return m.tolist()
    return [list(map(int, r)) for r in m]


def det(m: IntMatrix) -> int:
    """Determinant by Bareiss fraction-free elimination. The 0x0 determinant is 1."""
    if not m.is_square():
        raise ValueError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    a = m.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact division is the Sylvester identity behind Bareiss
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1] if n else 1


def rank(m: IntMatrix) -> int:
    """Rank over the rationals, via fraction-free row echelon form."""
    a = m.tolist()
    rows, cols = m.rows, m.cols
    r = 0
    prev = 1
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        pivot = a[r][c]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                a[i][j] = (a[i][j] * pivot - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = pivot
        r += 1
        if r == rows:
            break
    return r


def first_minor_abs(m: IntMatrix, drop_row: int, drop_col: int) -> int:
    """|det| of ``m`` with one row and one column removed (0-based indices)."""
    if not m.is_square():
        raise ValueError("first minor of a non-square matrix")
    if m.rows < 1:
        raise ValueError("first minor needs at least a 1x1 matrix")
    return abs(det(m.delete_row(drop_row).delete_col(drop_col)))


@dataclass(frozen=True)
class SnfResult:
    """``left @ original @ right`` is ``diagonal`` padded with zeros to the original shape."""

    diagonal: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix
    original_rows: int
    original_cols: int

    def diagonal_matrix(self) -> IntMatrix:
        out = IntMatrix.zeros(self.original_rows, self.original_cols).tolist()
        for i, d in enumerate(self.diagonal):
            out[i][i] = d
        return IntMatrix.from_rows(out, cols=self.original_cols)


def smith_normal_form(m: IntMatrix) -> SnfResult:
    """Smith normal form using only unimodular row and column moves.

    The pivot is always a nonzero entry of least absolute value in the
    remaining block. Entries in the pivot row and column are reduced by it;
    if a remainder survives it becomes the new, strictly smaller pivot. Once
    the pivot row and column are clear, a block entry not divisible by the
    pivot has its row added to the pivot row and the loop repeats, which
    enforces the divisibility chain.
    """
    rows, cols = m.rows, m.cols
    a = m.tolist()
    left = IntMatrix.identity(rows).tolist()
    right = IntMatrix.identity(cols).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in right:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, factor):
        a[dst] = [x + factor * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + factor * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, factor):
        for r in a:
            r[dst] += factor * r[src]
        for r in right:
            r[dst] += factor * r[src]

    diagonal: list[int] = []
    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                cand = [(abs(a[i][t]), i, t) for i in range(t + 1, rows) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
                _, pi, pj = min(cand)
                swap_rows(t, pi)
                swap_cols(t, pj)
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        diagonal.append(a[t][t])
        t += 1

    return SnfResult(
        diagonal=tuple(diagonal),
        left=IntMatrix.from_rows(left, cols=rows),
        right=IntMatrix.from_rows(right, cols=cols),
        original_rows=rows,
        original_cols=cols,
    )


@dataclass(frozen=True)
class ModKernel:
    """The solution set of ``m x = 0 (mod n)`` in Smith coordinates.

    Coordinate ``i`` of ``z`` runs over ``steps[i] * t`` for ``t`` in
    ``range(counts[i])``; each solution is ``x = right @ z`` reduced mod ``n``.
    """

    modulus: int
    right: IntMatrix
    steps: tuple[int, ...]
    counts: tuple[int, ...]

    @property
    def count(self) -> int:
        return prod(self.counts)

    def __len__(self) -> int:
        return self.count

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        n = self.modulus
        basis = self.right.columns()
        size = self.right.rows
        for ts in itertools.product(*(range(c) for c in self.counts)):
            x = [0] * size
            for t, step, col in zip(ts, self.steps, basis):
                if t:
                    coeff = t * step
                    for r in range(size):
                        x[r] += coeff * col[r]
            yield tuple(v % n for v in x)


def solve_mod_n(m: IntMatrix, n: int) -> ModKernel:
    """Describe all ``x`` with ``m x = 0 (mod n)``.

    With ``L m R = D`` and ``x = R z``, the system decouples into
    ``d_i z_i = 0 (mod n)``: ``z_i`` ranges over multiples of ``n / gcd(d_i, n)``
    and coordinates past the rank are free.
    """
    if n < 2:
        raise ValueError("modulus must be at least 2")
    snf = smith_normal_form(m)
    steps, counts = [], []
    for i in range(m.cols):
        if i < len(snf.diagonal):
            g = gcd(snf.diagonal[i], n)
            steps.append(n // g)
            counts.append(g)
        else:
            steps.append(1)
            counts.append(n)
    return ModKernel(modulus=n, right=snf.right, steps=tuple(steps), counts=tuple(counts))


TRANSFORM_KINDS = (
    "add_col", "swap_cols", "negate_col",
    "add_row", "swap_rows", "negate_row",
    "drop_zero_col", "drop_row",
)


@dataclass(frozen=True)
class Transform:
    """One elementary move.

    ``add_col(i, j, factor)`` adds ``factor`` times column ``j`` to column ``i``;
    ``add_row`` is the same for rows. Swaps use ``i`` and ``j``; negations and
    drops use ``i`` only.
    """

    kind: str
    i: int
    j: int | None = None
    factor: int = 1

    def __post_init__(self):
        if self.kind not in TRANSFORM_KINDS:
            raise ValueError(f"unknown transform kind {self.kind!r}")
        if self.kind in ("add_col", "add_row", "swap_cols", "swap_rows"):
            if self.j is None or self.j == self.i:
                raise ValueError(f"{self.kind} needs two distinct indices")


def _check_solution(m: IntMatrix, x: Sequence[int], n: int) -> None:
    if len(x) != m.cols:
        raise ValueError(f"solution has {len(x)} entries, matrix has {m.cols} columns")
    if any(v % n for v in m.apply(x)):
        raise ValueError("vector does not solve the system mod n")


def carry_transform(
    m: IntMatrix, solution: Sequence[int], transform: Transform, n: int
) -> tuple[IntMatrix, tuple[int, ...]]:
    """Apply ``transform`` to ``m`` and carry ``solution`` along so it still solves mod ``n``.

    Column moves act contragrediently on the solution; row moves leave it alone.
    """
    _check_solution(m, solution, n)
    rows = m.tolist()
    x = list(solution)
    kind, i, j, lam = transform.kind, transform.i, transform.j, transform.factor
    line_count = m.cols if kind.endswith("col") or kind.endswith("cols") else m.rows
    for idx in (i, j):
        if idx is not None and not 0 <= idx < line_count:
            raise IndexError(f"{kind}: index {idx} out of range")

    if kind == "add_col":
        for r in rows:
            r[i] += lam * r[j]
        x[j] -= lam * x[i]
    elif kind == "swap_cols":
        for r in rows:
            r[i], r[j] = r[j], r[i]
        x[i], x[j] = x[j], x[i]
    elif kind == "negate_col":
        for r in rows:
            r[i] = -r[i]
        x[i] = -x[i]
    elif kind == "add_row":
        rows[i] = [a + lam * b for a, b in zip(rows[i], rows[j])]
    elif kind == "swap_rows":
        rows[i], rows[j] = rows[j], rows[i]
    elif kind == "negate_row":
        rows[i] = [-a for a in rows[i]]
    elif kind == "drop_zero_col":
        if any(r[i] for r in rows):
            raise ValueError(f"column {i} is not zero")
        if x[i] % n:
            raise ValueError(f"solution entry {i} is not 0 mod n")
        for r in rows:
            del r[i]
        del x[i]
    elif kind == "drop_row":
        del rows[i]

    cols = m.cols - 1 if kind == "drop_zero_col" else m.cols
    return IntMatrix.from_rows(rows, cols=cols), tuple(v % n for v in x)
