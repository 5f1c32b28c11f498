"""Fox n-colorings of link diagrams.

The coloring matrix has one row per crossing and one column per arc: -2 for
the over arc and +1 for each under arc, accumulated when arcs coincide. Its
kernel mod n is exactly the set of n-colorings.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterator, Sequence

from .diagram import LinkDiagram
from .exactlin import IntMatrix, first_minor_abs, solve_mod_n

__all__ = [
    "DEFAULT_CAP",
    "FILTERS",
    "EnumerationCapExceeded",
    "Coloring",
    "ColoringClass",
    "prime_factorization",
    "prime_factors",
    "coloring_matrix",
    "determinant",
    "classify",
    "enumerate_colorings",
    "is_affine_canonical",
    "min_colors_on_diagram",
    "theorem_lower_bound",
]

DEFAULT_CAP = 10**6
FILTERS = ("all", "nontrivial", "effective")


class EnumerationCapExceeded(RuntimeError):
    def __init__(self, cap: int, total: int):
        super().__init__(f"enumeration cap {cap} exceeded ({total} solutions)")
        self.cap = cap
        self.total = total


def prime_factorization(n: int) -> dict[int, int]:
    """Trial division; fine for the desk-scale moduli used here."""
    if n < 1:
        raise ValueError("can only factor positive integers")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_factors(n: int) -> tuple[int, ...]:
    return tuple(sorted(prime_factorization(n)))


@dataclass(frozen=True)
class Coloring:
    modulus: int
    values: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        object.__setattr__(self, "values", tuple(int(v) % self.modulus for v in self.values))

    @property
    def palette_size(self) -> int:
        return len(set(self.values))

    def satisfies(self, d: LinkDiagram) -> bool:
        if len(self.values) != len(d.arcs):
            return False
        v, n = self.values, self.modulus
        return all((2 * v[c.over] - v[c.under_in] - v[c.under_out]) % n == 0 for c in d.crossings)


@dataclass(frozen=True)
class ColoringClass:
    is_trivial: bool
    p_trivial_primes: frozenset[int]
    is_effective: bool
    palette_size: int

    @property
    def label(self) -> str:
        if self.is_trivial:
            return "trivial"
        return "effective" if self.is_effective else "nontrivial"


def coloring_matrix(d: LinkDiagram) -> IntMatrix:
    k = len(d.arcs)
    rows = []
    for c in d.crossings:
        row = [0] * k
        row[c.over] -= 2
        row[c.under_in] += 1
        row[c.under_out] += 1
        rows.append(row)
    return IntMatrix.from_rows(rows, cols=k)


def determinant(d: LinkDiagram) -> int:
    a = coloring_matrix(d)
    return first_minor_abs(a, a.rows - 1, a.cols - 1)


def classify(c: Coloring) -> ColoringClass:
    values = c.values
    trivial = len(set(values)) <= 1
    p_trivial = frozenset(
        p for p in prime_factors(c.modulus) if len({v % p for v in values}) <= 1
    )
    return ColoringClass(
        is_trivial=trivial,
        p_trivial_primes=p_trivial,
        is_effective=not trivial and not p_trivial,
        palette_size=len(set(values)),
    )


def _passes(cls: ColoringClass, filter: str) -> bool:
    if filter == "all":
        return True
    if filter == "nontrivial":
        return not cls.is_trivial
    if filter == "effective":
        return cls.is_effective
    raise ValueError(f"unknown filter {filter!r}; expected one of {FILTERS}")


def _kernel(d: LinkDiagram, n: int, pin_first: bool):
    a = coloring_matrix(d)
    if pin_first:
        # the extra equation x_0 = 0 picks one translate of every coloring
        a = IntMatrix.from_rows(a.tolist() + [[1] + [0] * (a.cols - 1)], cols=a.cols)
    return solve_mod_n(a, n)


def _capped(kernel, cap: int) -> Iterator[tuple[int, ...]]:
    for count, x in enumerate(kernel):
        if count >= cap:
            raise EnumerationCapExceeded(cap, kernel.count)
        yield x


def enumerate_colorings(
    d: LinkDiagram, n: int, filter: str = "all", cap: int = DEFAULT_CAP
) -> Iterator[tuple[Coloring, ColoringClass]]:
    """Stream every n-coloring of ``d`` passing ``filter``, in Smith-coordinate order.

    Raises ``EnumerationCapExceeded`` once more than ``cap`` solutions would
    have to be generated; whatever was yielded before that is valid.
    """
    if filter not in FILTERS:
        raise ValueError(f"unknown filter {filter!r}; expected one of {FILTERS}")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    for x in _capped(_kernel(d, n, pin_first=False), cap):
        col = Coloring(n, x)
        cls = classify(col)
        if _passes(cls, filter):
            yield col, cls


def _units(n: int) -> list[int]:
    return [a for a in range(1, n) if gcd(a, n) == 1]


def is_affine_canonical(values: Sequence[int], n: int, units: Sequence[int] | None = None) -> bool:
    """True iff ``values`` is the lexicographic minimum of its orbit under x -> a*x + b."""
    if not values or values[0] % n:
        return False
    first = next((v % n for v in values if v % n), None)
    if first is None:
        return True
    if first != gcd(first, n):
        return False
    base = tuple(v % n for v in values)
    for a in units if units is not None else _units(n):
        if tuple(a * v % n for v in base) < base:
            return False
    return True


def canonical_colorings(
    d: LinkDiagram, n: int, filter: str = "effective", cap: int = DEFAULT_CAP
) -> Iterator[tuple[Coloring, ColoringClass]]:
    """One representative per affine orbit: first arc colored 0, then lexicographically least."""
    if filter not in FILTERS:
        raise ValueError(f"unknown filter {filter!r}; expected one of {FILTERS}")
    units = _units(n)
    for x in _capped(_kernel(d, n, pin_first=True), cap):
        if not is_affine_canonical(x, n, units):
            continue
        col = Coloring(n, x)
        cls = classify(col)
        if _passes(cls, filter):
            yield col, cls


def min_colors_on_diagram(
    d: LinkDiagram, n: int, filter: str = "effective", cap: int = DEFAULT_CAP
) -> int | None:
    """Least palette size over colorings of this one diagram passing ``filter``; None if there are none."""
    if filter not in ("nontrivial", "effective"):
        raise ValueError("filter must be 'nontrivial' or 'effective'")
    best = None
    for _, cls in canonical_colorings(d, n, filter, cap):
        if best is None or cls.palette_size < best:
            best = cls.palette_size
    return best


def theorem_lower_bound(n: int) -> int:
    """Smallest l with 2**(l-1) >= n."""
    if n < 1:
        raise ValueError("n must be positive")
    return 1 + (n - 1).bit_length()
