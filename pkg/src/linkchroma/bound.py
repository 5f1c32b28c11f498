"""Mechanical check of the palette lower bound 2**(l-1) >= n.

Given an effective n-coloring with l distinct colors, the coloring matrix is
reduced step by step:

    A  --merge equal-colored columns-->   A1  (k x l)
    A1 --replace last column by the column sum--> A2  (last column zero)
    A2 --keep l-1 independent rows-->     A3  ((l-1) x l)
    A3 --drop the zero column-->          B   ((l-1) x (l-1))

and the chain n <= |det B| <= 2**(l-1) is checked exactly, together with the
Smith form of B and the row shapes that bound |det B|.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from .coloring import Coloring, classify, coloring_matrix, determinant, prime_factorization
from .diagram import LinkDiagram
from .exactlin import IntMatrix, det, rank, smith_normal_form

__all__ = [
    "RowType",
    "BoundCertificate",
    "PipelineError",
    "merge_columns",
    "zero_last_column",
    "independent_rows",
    "select_rows",
    "drop_last_column",
    "classify_row",
    "check_det_bound_claim",
    "verify",
]


class PipelineError(ValueError):
    """A stage precondition failed."""


class RowType(enum.Enum):
    I = ("i", (-2, 1, 1))
    II = ("ii", (-2, 2))
    III = ("iii", (-1, 1))
    IV = ("iv", (1, 1))
    V = ("v", (-2, 1))
    VI = ("vi", (1,))
    VII = ("vii", (-1,))
    VIII = ("viii", (2,))
    IX = ("ix", (-2,))

    @property
    def tag(self) -> str:
        return self.value[0]

    @property
    def entries(self) -> tuple[int, ...]:
        return self.value[1]


_BY_ENTRIES = {t.entries: t for t in RowType}


def classify_row(row: Sequence[int]) -> RowType | None:
    """Match the multiset of nonzero entries against the nine shapes; None if it fits none."""
    return _BY_ENTRIES.get(tuple(sorted(v for v in row if v)))


def merge_columns(a: IntMatrix, colors: Sequence[int]) -> tuple[IntMatrix, tuple[int, ...]]:
    """Fold every column into the nearest earlier column of the same color.

    Columns are processed from the last to the second; column j is added to
    the largest i < j with colors[i] == colors[j] and then deleted.
    """
    if len(colors) != a.cols:
        raise PipelineError(f"{len(colors)} colors for {a.cols} columns")
    cols = a.columns()
    colors = list(colors)
    for j in range(len(cols) - 1, 0, -1):
        for i in range(j - 1, -1, -1):
            if colors[i] == colors[j]:
                cols[i] = [x + y for x, y in zip(cols[i], cols[j])]
                del cols[j], colors[j]
                break
    return IntMatrix.from_columns(cols, rows=a.rows), tuple(colors)


def zero_last_column(
    a1: IntMatrix, y0: Sequence[int], modulus: int | None = None
) -> tuple[IntMatrix, tuple[int, ...]]:
    """Replace the last column by the sum of all columns (zero) and shift the solution so its last entry is 0."""
    if len(y0) != a1.cols or a1.cols == 0:
        raise PipelineError("solution length does not match the column count")
    if any(a1.column_sum()):
        raise PipelineError("columns do not sum to the zero vector")
    rows = a1.tolist()
    for r in rows:
        r[-1] = 0
    shift = y0[-1]
    y1 = tuple(v - shift for v in y0)
    if modulus is not None:
        y1 = tuple(v % modulus for v in y1)
    return IntMatrix.from_rows(rows, cols=a1.cols), y1


def _reduce(row: list[int], basis: list[tuple[int, list[int]]]) -> list[int]:
    for pc, b in basis:
        if row[pc]:
            f, g = b[pc], row[pc]
            row = [f * x - g * y for x, y in zip(row, b)]
            common = gcd(*row)
            if common > 1:
                row = [x // common for x in row]
    return row


def independent_rows(a2: IntMatrix, expected_rank: int | None = None) -> tuple[int, ...]:
    """Indices of the first rows, in order, that are linearly independent.

    ``expected_rank`` defaults to one less than the column count.
    """
    target = a2.cols - 1 if expected_rank is None else expected_rank
    basis: list[tuple[int, list[int]]] = []
    kept: list[int] = []
    for i in range(a2.rows):
        if len(kept) == target:
            break
        r = _reduce(a2.row(i), basis)
        pc = next((c for c, v in enumerate(r) if v), None)
        if pc is not None:
            basis.append((pc, r))
            kept.append(i)
    if len(kept) < target or rank(a2) != target:
        raise PipelineError(
            f"rank {rank(a2)} instead of {target}; the determinant is zero or the input is inconsistent"
        )
    return tuple(kept)


def select_rows(a2: IntMatrix, expected_rank: int | None = None) -> IntMatrix:
    return a2.select_rows(independent_rows(a2, expected_rank))


def drop_last_column(a3: IntMatrix) -> IntMatrix:
    if a3.cols == 0 or any(a3.col(a3.cols - 1)):
        raise PipelineError("last column is not zero")
    return a3.delete_col(a3.cols - 1)


def check_det_bound_claim(m: IntMatrix) -> bool:
    """|det m| <= 2**size for a square matrix whose rows all have one of the nine shapes."""
    if not m.is_square():
        raise ValueError("matrix must be square")
    for i in range(m.rows):
        if classify_row(m.row(i)) is None:
            raise ValueError(f"row {i} {m.row(i)} has none of the nine shapes")
    return abs(det(m)) <= 2 ** m.rows


def _solves(m: IntMatrix, x: Sequence[int], n: int) -> bool:
    return all(v % n == 0 for v in m.apply(x))


def _effective(x: Sequence[int], n: int) -> bool:
    return classify(Coloring(n, x)).is_effective


@dataclass
class BoundCertificate:
    modulus: int
    diagram_name: str | None
    coloring: tuple[int, ...]
    l: int
    A: IntMatrix
    A1: IntMatrix | None = None
    A2: IntMatrix | None = None
    A3: IntMatrix | None = None
    B: IntMatrix | None = None
    x0: tuple[int, ...] = ()
    y0: tuple[int, ...] = ()
    y1: tuple[int, ...] = ()
    selected_rows: tuple[int, ...] = ()
    det_B: int | None = None
    snf_diagonal: tuple[int, ...] = ()
    row_types_of_B: list[str] = field(default_factory=list)
    n_le_det_b: bool = False
    det_b_le_bound: bool = False
    l_ge_log_bound: bool = False
    snf_prime_powers_divide: bool = False
    kink_flag: bool = False
    failures: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return (
            not self.failures
            and self.n_le_det_b
            and self.det_b_le_bound
            and self.l_ge_log_bound
            and self.snf_prime_powers_divide
        )

    def to_record(self) -> dict:
        return {
            "n": self.modulus,
            "diagram_name": self.diagram_name,
            "coloring": list(self.coloring),
            "l": self.l,
            "det_B": self.det_B,
            "row_types": list(self.row_types_of_B),
            "checks": {
                "n_le_det_B": self.n_le_det_b,
                "det_B_le_2_pow_l_minus_1": self.det_b_le_bound,
                "l_ge_1_plus_log2_n": self.l_ge_log_bound,
            },
            "snf_diagonal": list(self.snf_diagonal),
            "snf_prime_powers_divide": self.snf_prime_powers_divide,
            "kink_flag": self.kink_flag,
            "valid": self.valid,
            "failures": list(self.failures),
        }


def _row_tags(m: IntMatrix, allow_zero: bool) -> list[str | None]:
    tags = []
    for i in range(m.rows):
        row = m.row(i)
        t = classify_row(row)
        if t is not None:
            tags.append(t.tag)
        elif allow_zero and not any(row):
            tags.append("zero")
        else:
            tags.append(None)
    return tags


def verify(d: LinkDiagram, c: Coloring) -> BoundCertificate:
    """Run the reduction on one effective coloring and record every check.

    Precondition failures (not effective, not a coloring, zero determinant)
    raise. A failed check inside the pipeline never raises: it is recorded in
    ``failures`` and the certificate comes back invalid.
    """
    n = c.modulus
    if not c.satisfies(d):
        raise PipelineError("values do not form an n-coloring of this diagram")
    if not classify(c).is_effective:
        raise PipelineError("coloring is not effective")
    if determinant(d) == 0:
        raise PipelineError("diagram has zero determinant")

    a = coloring_matrix(d)
    x0 = c.values
    l = c.palette_size
    cert = BoundCertificate(
        modulus=n, diagram_name=d.name, coloring=x0, l=l, A=a, x0=x0, kink_flag=d.has_kink
    )
    fail = cert.failures.append

    if not cert.kink_flag and None in _row_tags(a, allow_zero=False):
        fail("row of A outside the nine shapes")
    if not _solves(a, x0, n):
        fail("x0 does not solve A")

    a1, y0 = merge_columns(a, x0)
    cert.A1, cert.y0 = a1, y0
    if a1.shape != (a.rows, l):
        fail(f"A1 has shape {a1.shape}, expected {(a.rows, l)}")
    if a1.column_sum() != a.column_sum():
        fail("merging changed the column sum")
    if set(y0) != set(x0) or not _solves(a1, y0, n) or not _effective(y0, n):
        fail("y0 is not an effective solution of A1")
    if not cert.kink_flag and None in _row_tags(a1, allow_zero=True):
        fail("row of A1 outside the nine shapes")

    try:
        a2, y1 = zero_last_column(a1, y0, n)
    except PipelineError as exc:
        fail(f"A1 -> A2: {exc}")
        return cert
    cert.A2, cert.y1 = a2, y1
    if any(a2.col(l - 1)) or a2.delete_col(l - 1) != a1.delete_col(l - 1):
        fail("A2 is not A1 with its last column zeroed")
    if y1[-1] != 0 or not _solves(a2, y1, n) or not _effective(y1, n):
        fail("y1 is not an effective solution of A2 ending in 0")
    if not cert.kink_flag and None in _row_tags(a2, allow_zero=True):
        fail("row of A2 outside the nine shapes")

    try:
        kept = independent_rows(a2, l - 1)
    except PipelineError as exc:
        fail(f"A2 -> A3: {exc}")
        return cert
    a3 = a2.select_rows(kept)
    cert.A3, cert.selected_rows = a3, kept
    if a3.shape != (l - 1, l) or rank(a3) != l - 1:
        fail(f"A3 has shape {a3.shape} and rank {rank(a3)}")
    if not _solves(a3, y1, n):
        fail("y1 does not solve A3")

    b = drop_last_column(a3)
    cert.B = b
    cert.det_B = det(b)
    tags = _row_tags(b, allow_zero=False)
    cert.row_types_of_B = [t if t is not None else "reject" for t in tags]
    if None in tags and not cert.kink_flag:
        fail("row of B outside the nine shapes")
    if cert.det_B == 0:
        fail("det B is zero")

    det_abs = abs(cert.det_B)
    cert.n_le_det_b = n <= det_abs
    cert.det_b_le_bound = det_abs <= 2 ** (l - 1)
    cert.l_ge_log_bound = 2 ** (l - 1) >= n

    snf = smith_normal_form(b)
    cert.snf_diagonal = snf.diagonal
    cert.snf_prime_powers_divide = len(snf.diagonal) == l - 1 and all(
        any(di % p**e == 0 for di in snf.diagonal)
        for p, e in prime_factorization(n).items()
    )
    return cert


def row_type_counts(m: IntMatrix) -> Counter:
    return Counter(t if t is not None else "reject" for t in _row_tags(m, allow_zero=True))
