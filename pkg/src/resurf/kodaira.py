"""Kodaira fiber types and their combinatorics."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainError
from .lattice_core import A, D, E, LatticeExpr, RootBlock

_STARRED_EXCEPTIONAL = {"II*": "IIStar", "III*": "IIIStar", "IV*": "IVStar"}
_PLAIN_EXCEPTIONAL = {"II": "II", "III": "III", "IV": "IV"}
KINDS = ("I", "IStar", "II", "III", "IV", "IIStar", "IIIStar", "IVStar")


@dataclass(frozen=True, order=True)
class FiberType:
    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown fiber kind {self.kind!r}")
        if self.n < 0:
            raise DomainError("fiber parameter must be a natural number")
        if self.kind not in ("I", "IStar") and self.n != 0:
            raise DomainError(f"{self.kind} takes no parameter")

    @classmethod
    def parse(cls, text: str) -> "FiberType":
        t = text.strip()
        for spelled, kind in {**_STARRED_EXCEPTIONAL, **_PLAIN_EXCEPTIONAL}.items():
            if t == spelled:
                return cls(kind)
        m = re.fullmatch(r"I(\d+)(\*?)", t)
        if not m:
            raise DomainError(f"unknown fiber type {text!r}")
        return cls("IStar" if m.group(2) else "I", int(m.group(1)))

    def __str__(self):
        if self.kind == "I":
            return f"I{self.n}"
        if self.kind == "IStar":
            return f"I{self.n}*"
        return {v: k for k, v in {**_STARRED_EXCEPTIONAL, **_PLAIN_EXCEPTIONAL}.items()}[self.kind]


def I(n: int) -> FiberType:  # noqa: E743
    return FiberType("I", n)


def IStar(n: int) -> FiberType:
    return FiberType("IStar", n)


II, III, IV = FiberType("II"), FiberType("III"), FiberType("IV")
II_STAR, III_STAR, IV_STAR = FiberType("IIStar"), FiberType("IIIStar"), FiberType("IVStar")


def as_fiber(f: FiberType | str) -> FiberType:
    return f if isinstance(f, FiberType) else FiberType.parse(f)


def component_count(f: FiberType) -> int:
    if f.kind == "I":
        return max(f.n, 1)
    if f.kind == "IStar":
        return f.n + 5
    return {"II": 1, "III": 2, "IV": 3, "IVStar": 7, "IIIStar": 8, "IIStar": 9}[f.kind]


def euler_number(f: FiberType) -> int:
    if f.kind == "I":
        return f.n
    return component_count(f) + 1


def is_reducible(f: FiberType) -> bool:
    return component_count(f) >= 2


def is_nonreduced(f: FiberType) -> bool:
    return f.kind in ("IStar", "IIStar", "IIIStar", "IVStar")


def is_reduced(f: FiberType) -> bool:
    return not is_nonreduced(f)


def t_lattice(f: FiberType) -> RootBlock | None:
    """Root lattice spanned by the components missing the zero section."""
    if not is_reducible(f):
        return None
    if f.kind == "I":
        return A(f.n - 1)
    if f.kind == "IStar":
        return D(f.n + 4)
    return {"III": A(1), "IV": A(2), "IVStar": E(6), "IIIStar": E(7), "IIStar": E(8)}[f.kind]


def t_lattice_expr(fibers: Iterable[FiberType]) -> LatticeExpr:
    return LatticeExpr(tuple(b for b in map(t_lattice, fibers) if b is not None))


def quadratic_base_change(f: FiberType) -> FiberType:
    """Fiber over a branch point of a double cover of the base."""
    if f.kind in ("I", "IStar"):
        return I(2 * f.n)
    return {"II": IV, "IIStar": IV_STAR, "III": IStar(0), "IIIStar": IStar(0),
            "IV": IV_STAR, "IVStar": IV}[f.kind]


# ---------------------------------------------------------------- components


@dataclass(frozen=True)
class ComponentTable:
    """Multiplicities and intersection matrix of the fiber components.

    Index 0 is the component met by the zero section.  For I*_n the
    simple components are 0, 1 (near end of the chain) and 2, 3 (far end);
    the chain itself runs 4 .. n+4.
    """
    fiber: FiberType
    multiplicities: tuple[int, ...]
    intersections: tuple[tuple[int, ...], ...]

    @property
    def simple_components(self) -> tuple[int, ...]:
        return tuple(i for i, m in enumerate(self.multiplicities) if m == 1)

    def fiber_dot(self, j: int) -> int:
        return sum(m * row[j] for m, row in zip(self.multiplicities, self.intersections))


def _table_from_edges(f: FiberType, mults: Sequence[int],
                      edges: Iterable[tuple[int, int]]) -> ComponentTable:
    n = len(mults)
    mat = [[0] * n for _ in range(n)]
    for i in range(n):
        mat[i][i] = -2
    for i, j in edges:
        mat[i][j] += 1
        mat[j][i] += 1
    return ComponentTable(f, tuple(mults), tuple(map(tuple, mat)))


@lru_cache(maxsize=None)
def component_table(f: FiberType) -> ComponentTable:
    if not is_reducible(f):
        return ComponentTable(f, (1,), ((0,),))
    k = f.kind
    if k == "I":
        n = f.n
        return _table_from_edges(f, [1] * n, [(i, (i + 1) % n) for i in range(n)])
    if k == "III":
        return _table_from_edges(f, [1, 1], [(0, 1), (0, 1)])
    if k == "IV":
        return _table_from_edges(f, [1, 1, 1], [(0, 1), (1, 2), (0, 2)])
    if k == "IStar":
        n = f.n
        last = n + 4
        edges = [(0, 4), (1, 4), (2, last), (3, last)]
        edges += [(i, i + 1) for i in range(4, last)]
        return _table_from_edges(f, [1, 1, 1, 1] + [2] * (n + 1), edges)
    if k == "IVStar":
        return _table_from_edges(f, [1, 2, 3, 2, 1, 2, 1],
                                 [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)])
    if k == "IIIStar":
        return _table_from_edges(f, [1, 2, 3, 4, 3, 2, 1, 2],
                                 [(i, i + 1) for i in range(6)] + [(3, 7)])
    if k == "IIStar":
        return _table_from_edges(f, [1, 2, 3, 4, 5, 6, 4, 2, 3],
                                 [(i, i + 1) for i in range(7)] + [(5, 8)])
    raise DomainError(f"no component table for {f}")


# ---------------------------------------------------------------- configurations


@dataclass(frozen=True)
class FiberConfiguration:
    fibers: tuple[FiberType, ...]
    generic_rank: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "fibers", tuple(sorted(as_fiber(f) for f in self.fibers)))
        if self.generic_rank is not None and not 0 <= self.generic_rank <= 8:
            raise DomainError("generic rank must lie in 0..8")

    @classmethod
    def parse(cls, names: Iterable[str], generic_rank: int | None = None) -> "FiberConfiguration":
        return cls(tuple(FiberType.parse(s) for s in expand_multiplicities(names)), generic_rank)

    def singular(self) -> tuple[FiberType, ...]:
        return tuple(f for f in self.fibers if f != I(0))

    def __str__(self):
        return "(" + ", ".join(str(f) for f in self.singular()) + ")"


def expand_multiplicities(names: Iterable[str]) -> list[str]:
    """Expand shorthand like "10I1" or "2II" into repeated entries."""
    out = []
    for raw in names:
        s = raw.strip()
        if not s:
            continue
        m = re.fullmatch(r"(\d+)\s*[x×]?\s*(I.*)", s)
        if m:
            out.extend([m.group(2)] * int(m.group(1)))
        else:
            out.append(s)
    return out


@dataclass(frozen=True)
class ValidationReport:
    euler_sum: int
    passed: bool
    reducible_count: int
    has_nonreduced: bool
    has_I_n_ge_4: bool
    has_III_star_or_II_star: bool
    notes: tuple[str, ...] = field(default_factory=tuple)


def validate_configuration(c: FiberConfiguration) -> ValidationReport:
    total = sum(euler_number(f) for f in c.fibers)
    notes = []
    if total != 12:
        notes.append(f"Euler numbers sum to {total}, not 12")
    rank_bound = 8 - sum(component_count(f) - 1 for f in c.fibers)
    if c.generic_rank is not None and c.generic_rank > rank_bound:
        notes.append(f"generic rank {c.generic_rank} exceeds 8 - rank T = {rank_bound}")
    return ValidationReport(
        euler_sum=total,
        passed=not notes,
        reducible_count=sum(is_reducible(f) for f in c.fibers),
        has_nonreduced=any(is_nonreduced(f) for f in c.fibers),
        has_I_n_ge_4=any(f.kind == "I" and f.n >= 4 for f in c.fibers),
        has_III_star_or_II_star=any(f in (III_STAR, II_STAR) for f in c.fibers),
        notes=tuple(notes),
    )


def _check_branch_fibers(c: FiberConfiguration, ramified_at: FiberType,
                         other_branch: FiberType) -> Counter:
    if not is_nonreduced(ramified_at):
        raise DomainError(f"{ramified_at} is reduced; the ramified fiber must be nonreduced")
    if not is_reduced(other_branch):
        raise DomainError(f"{other_branch} is nonreduced; the other branch fiber must be reduced")
    rest = Counter(c.fibers)
    if rest[ramified_at] == 0:
        raise DomainError(f"{ramified_at} does not occur in {c}")
    rest[ramified_at] -= 1
    if other_branch != I(0):
        if rest[other_branch] == 0:
            raise DomainError(f"{other_branch} does not occur in {c}")
    return rest


def rnrf_base_change_euler(c: FiberConfiguration, ramified_at: FiberType,
                           other_branch: FiberType) -> int:
    """Euler number of the double cover branched at the two given fibers.

    The nonreduced branch fiber contributes 2e(F) - 12; every other fiber,
    branch point or not, contributes twice its Euler number.
    """
    rest = _check_branch_fibers(c, ramified_at, other_branch)
    return (2 * euler_number(ramified_at) - 12) + sum(2 * euler_number(f) * k
                                                      for f, k in rest.items())


def rnrf_base_change_configuration(c: FiberConfiguration, ramified_at: FiberType,
                                   other_branch: FiberType) -> FiberConfiguration:
    """Fibers of the double cover, built fiber by fiber."""
    rest = _check_branch_fibers(c, ramified_at, other_branch)
    fibers = [quadratic_base_change(ramified_at), quadratic_base_change(other_branch)]
    if other_branch != I(0):
        rest[other_branch] -= 1
    for f, k in rest.items():
        fibers.extend([f] * (2 * k))
    return FiberConfiguration(tuple(fibers))
