"""Exact rational linear algebra and ADE lattice arithmetic.

Rationals are :class:`fractions.Fraction`.  Matrices are small and dense,
so they are kept as immutable row-major tuples.  Every lattice uses the
positive-definite sign convention.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterator, Sequence, Union

from .errors import DomainError

RationalLike = Union[int, Fraction, str]


def rational(value: RationalLike) -> Fraction:
    """Parse an int, Fraction or "p/q" string into a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a rational: {value!r}") from exc
    raise DomainError(f"not a rational: {value!r}")


def format_rational(q: Fraction) -> str:
    """Render as "p/q", or "p" when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def is_integer_square(q: Fraction) -> bool:
    q = Fraction(q)
    if q.denominator != 1 or q < 0:
        return False
    r = isqrt(q.numerator)
    return r * r == q.numerator


# ---------------------------------------------------------------- matrices


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DomainError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DomainError("ragged matrix")
        flat = tuple(rational(x) for r in rows for x in r)
        return cls(len(rows), ncols, flat)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)])

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i))

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def scaled(self, c: RationalLike) -> "RationalMatrix":
        c = rational(c)
        return RationalMatrix(self.rows, self.cols, tuple(c * x for x in self.entries))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DomainError("shape mismatch in product")
        return RationalMatrix.from_rows([
            [sum((self[i, k] * other[k, j] for k in range(self.cols)), Fraction(0))
             for j in range(other.cols)]
            for i in range(self.rows)])

    def quadratic(self, x: Sequence[int]) -> Fraction:
        """Evaluate x^T M x."""
        n = self.rows
        return sum((x[i] * self[i, j] * x[j] for i in range(n) for j in range(n)
                    if x[i] and x[j]), Fraction(0))

    def bilinear(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        n = self.rows
        return sum((x[i] * self[i, j] * y[j] for i in range(n) for j in range(n)
                    if x[i] and y[j]), Fraction(0))


def direct_sum(*mats: RationalMatrix) -> RationalMatrix:
    n = sum(m.rows for m in mats)
    rows = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                rows[off + i][off + j] = m[i, j]
        off += m.rows
    return RationalMatrix.from_rows(rows)


def _det_rows(rows: list[list[Fraction]]) -> Fraction:
    a = [r[:] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        piv = a[c][c]
        det *= piv
        for r in range(c + 1, n):
            f = a[r][c] / piv
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def matrix_determinant(m: RationalMatrix) -> Fraction:
    if not m.is_square:
        raise DomainError("determinant of a non-square matrix")
    return _det_rows(m.to_rows())


def adjugate(m: RationalMatrix) -> RationalMatrix:
    """Transpose of the cofactor matrix; defined for singular input too."""
    if not m.is_square:
        raise DomainError("adjugate of a non-square matrix")
    n = m.rows
    if n == 0:
        return m
    if n == 1:
        return RationalMatrix.from_rows([[1]])
    rows = m.to_rows()
    cof = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            cof[i][j] = (-1) ** (i + j) * _det_rows(minor)
    return RationalMatrix.from_rows([[cof[j][i] for j in range(n)] for i in range(n)])


def inverse(m: RationalMatrix) -> RationalMatrix:
    if not m.is_square:
        raise DomainError("inverse of a non-square matrix")
    n = m.rows
    a = [r + [Fraction(int(i == k)) for k in range(n)] for i, r in enumerate(m.to_rows())]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise DomainError("singular matrix")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return RationalMatrix.from_rows([r[n:] for r in a])


def ldl(m: RationalMatrix) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Exact LDL^T of a symmetric positive-definite matrix.

    Returns (L, d) with L unit lower triangular.  Raises DomainError on a
    non-positive pivot.
    """
    if not m.is_symmetric():
        raise DomainError("Gram matrix is not symmetric")
    n = m.rows
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    for j in range(n):
        d[j] = m[j, j] - sum((L[j][k] ** 2 * d[k] for k in range(j)), Fraction(0))
        if d[j] <= 0:
            raise DomainError("Gram matrix is not positive-definite")
        for i in range(j + 1, n):
            s = m[i, j] - sum((L[i][k] * L[j][k] * d[k] for k in range(j)), Fraction(0))
            L[i][j] = s / d[j]
    return L, d


# ---------------------------------------------------------------- blocks


@dataclass(frozen=True)
class RootBlock:
    family: str  # "A", "D" or "E"
    n: int

    def __post_init__(self):
        ok = {"A": self.n >= 1, "D": self.n >= 4, "E": self.n in (6, 7, 8)}
        if not ok.get(self.family, False):
            raise DomainError(f"no root lattice {self.family}{self.n}")

    def __str__(self):
        return f"{self.family}{self.n}"


@dataclass(frozen=True)
class DualOf:
    block: "Block"

    def __str__(self):
        return f"{self.block}*"


@dataclass(frozen=True)
class Scaled:
    """The rank-1 lattice <q>."""
    q: Fraction

    def __post_init__(self):
        if rational(self.q) <= 0:
            raise DomainError("scaled block needs a positive factor")
        object.__setattr__(self, "q", rational(self.q))

    def __str__(self):
        return f"<{format_rational(self.q)}>"


@dataclass(frozen=True)
class ExplicitGram:
    gram: RationalMatrix

    def __str__(self):
        rows = ",".join("[" + ",".join(format_rational(x) for x in self.gram.row(i)) + "]"
                        for i in range(self.gram.rows))
        return f"[{rows}]"


Block = Union[RootBlock, DualOf, Scaled, ExplicitGram]


def A(n: int) -> RootBlock:
    return RootBlock("A", n)


def D(n: int) -> RootBlock:
    return RootBlock("D", n)


def E(n: int) -> RootBlock:
    return RootBlock("E", n)


_BLOCK_RE = re.compile(r"^([ADE])(\d+)(\*?)$")


def parse_block(text: str) -> Block:
    """Parse "A3", "D4", "E7", "A1*" or "<1/6>"."""
    t = text.strip()
    if t.startswith("<") and t.endswith(">"):
        return Scaled(rational(t[1:-1]))
    m = _BLOCK_RE.match(t)
    if not m:
        raise DomainError(f"unknown lattice block {text!r}")
    block = RootBlock(m.group(1), int(m.group(2)))
    return DualOf(block) if m.group(3) else block


@dataclass(frozen=True)
class LatticeExpr:
    summands: tuple[Block, ...] = ()

    @classmethod
    def of(cls, *blocks: Block) -> "LatticeExpr":
        return cls(tuple(blocks))

    @classmethod
    def parse(cls, names: Sequence[str]) -> "LatticeExpr":
        return cls(tuple(parse_block(s) for s in names))

    def __str__(self):
        return "+".join(str(b) for b in self.summands) if self.summands else "0"


def root_gram(block: RootBlock) -> RationalMatrix:
    """Gram matrix of the simple roots, 1-based adjacency rules."""
    n, fam = block.n, block.family
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n + 1):
        rows[i - 1][i - 1] = 2
    pairs = []
    if fam == "A":
        pairs = [(i, i + 1) for i in range(1, n)]
    elif fam == "D":
        pairs = [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]
    elif fam == "E":
        pairs = [(i, i + 1) for i in range(1, n - 1)] + [(3, n)]
    for i, j in pairs:
        rows[i - 1][j - 1] = rows[j - 1][i - 1] = -1
    return RationalMatrix.from_rows(rows)


def block_gram(block: Block) -> RationalMatrix:
    if isinstance(block, RootBlock):
        return root_gram(block)
    if isinstance(block, DualOf):
        return inverse(block_gram(block.block))
    if isinstance(block, Scaled):
        return RationalMatrix.from_rows([[block.q]])
    if isinstance(block, ExplicitGram):
        return block.gram
    raise DomainError(f"not a lattice block: {block!r}")


def block_rank(block: Block) -> int:
    return block_gram(block).rows


# ---------------------------------------------------------------- lattices


@dataclass(frozen=True)
class Lattice:
    gram: RationalMatrix

    def __post_init__(self):
        if not self.gram.is_square:
            raise DomainError("Gram matrix must be square")
        ldl(self.gram)

    @property
    def rank(self) -> int:
        return self.gram.rows

    def norm(self, x: Sequence[int]) -> Fraction:
        return self.gram.quadratic(x)


def realize(expr: LatticeExpr | Block) -> Lattice:
    if not isinstance(expr, LatticeExpr):
        expr = LatticeExpr.of(expr)
    return Lattice(direct_sum(*(block_gram(b) for b in expr.summands)))


def determinant(L: Lattice | RationalMatrix) -> Fraction:
    m = L.gram if isinstance(L, Lattice) else L
    return matrix_determinant(m)


# ---------------------------------------------------------------- enumeration


def _int_window(c: Fraction, t: Fraction) -> tuple[int, int]:
    """Integers v with (v - c)^2 <= t, as an inclusive range (maybe empty)."""
    r = isqrt(t.numerator // t.denominator) + 1
    hi = (c.numerator // c.denominator) + r
    while hi > c and (hi - c) ** 2 > t:
        hi -= 1
    lo = -((-c.numerator) // c.denominator) - r
    while lo < c and (lo - c) ** 2 > t:
        lo += 1
    return lo, hi


def iter_short_vectors(L: Lattice, upper: RationalLike, lower: RationalLike = 0
                       ) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """Yield (x, x^T G x) for every integer x with lower <= norm <= upper.

    Fincke-Pohst with exact LDL^T bounds: the norm is a sum of
    d_i (x_i + sum_{j>i} l_ji x_j)^2, so each coordinate is confined to a
    window around a centre fixed by the coordinates already chosen.
    """
    upper, lower = rational(upper), rational(lower)
    if upper < 0:
        return
    n = L.rank
    if n == 0:
        if lower <= 0:
            yield (), Fraction(0)
        return
    Lm, d = ldl(L.gram)
    x = [0] * n

    def walk(i: int, budget: Fraction):
        c = -sum((Lm[j][i] * x[j] for j in range(i + 1, n) if x[j]), Fraction(0))
        lo, hi = _int_window(c, budget / d[i])
        for v in range(lo, hi + 1):
            used = d[i] * (v - c) ** 2
            if used > budget:
                continue
            x[i] = v
            if i == 0:
                total = upper - budget + used
                if total >= lower:
                    yield tuple(x), total
            else:
                yield from walk(i - 1, budget - used)
        x[i] = 0

    yield from walk(n - 1, upper)


def iter_vectors_of_norm(L: Lattice, m: RationalLike) -> Iterator[tuple[int, ...]]:
    """Lazily yield every x with x^T G x = m.  The last coordinate is solved, not scanned."""
    m = rational(m)
    if m < 0:
        raise DomainError("norm must be non-negative")
    n = L.rank
    if n == 0:
        if m == 0:
            yield ()
        return
    Lm, d = ldl(L.gram)
    x = [0] * n

    def walk(i: int, budget: Fraction):
        c = -sum((Lm[j][i] * x[j] for j in range(i + 1, n) if x[j]), Fraction(0))
        if i == 0:
            s = rational_sqrt(budget / d[0])
            if s is None:
                return
            for v in sorted({c - s, c + s}):
                if v.denominator == 1:
                    x[0] = int(v)
                    yield tuple(x)
            x[0] = 0
            return
        lo, hi = _int_window(c, budget / d[i])
        for v in range(lo, hi + 1):
            used = d[i] * (v - c) ** 2
            if used > budget:
                continue
            x[i] = v
            yield from walk(i - 1, budget - used)
        x[i] = 0

    yield from walk(n - 1, m)


def vectors_of_norm(L: Lattice, m: RationalLike, coord_bound_hint: int | None = None
                    ) -> list[tuple[int, ...]]:
    """All integer coordinate vectors of norm m, sorted.

    coord_bound_hint, when given, keeps only vectors with every |x_i| at
    most the hint.  m = 0 gives the zero vector.
    """
    out = iter_vectors_of_norm(L, m)
    if coord_bound_hint is not None:
        out = (x for x in out if all(abs(v) <= coord_bound_hint for v in x))
    return sorted(out)


def first_vector_of_norm(L: Lattice, m: RationalLike) -> tuple[int, ...] | None:
    return next(iter_vectors_of_norm(L, m), None)


def represents(L: Lattice, m: RationalLike) -> bool:
    return first_vector_of_norm(L, m) is not None


def minimum(L: Lattice) -> Fraction:
    """Smallest nonzero norm; the least diagonal entry bounds the search."""
    if L.rank == 0:
        raise DomainError("zero lattice has no minimum")
    ceiling = min(L.gram[i, i] for i in range(L.rank))
    return min(v for x, v in iter_short_vectors(L, ceiling) if any(x))
