"""Mordell-Weil lattice data for rational elliptic surfaces.

One row per possible pair (T, E(K)) of positive rank.  T is the sum of the
root lattices of the reducible fibers, E(K)^0 the narrow lattice of
sections meeting every identity component, and the free part of E(K) is
its dual.  Every quantity the gap decisions need is derived here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DataIntegrityError, DomainError
from .lattice_core import (
    ExplicitGram, Lattice, LatticeExpr, RationalMatrix, RootBlock, adjugate, block_rank,
    matrix_determinant, minimum, parse_block, realize,
)

PROVENANCES = ("PAPER", "OS")


# ---------------------------------------------------------------- contributions


def simple_labels(tv: RootBlock) -> int:
    """Number of non-identity simple components of the fiber with lattice tv."""
    if tv.family == "A":
        return tv.n
    if tv.family == "D":
        return 3
    return {6: 2, 7: 1, 8: 0}[tv.n]


def _check_label(tv: RootBlock, i: int) -> None:
    if not 0 <= i <= simple_labels(tv):
        raise DomainError(f"{tv} has no simple component labelled {i}")


def contribution(tv: RootBlock, i: int, j: int | None = None) -> Fraction:
    """Local height correction for a section meeting simple component i.

    With j given, the correction to the pairing of two sections meeting
    components i <= j.  Labels count simple components: 0 is the identity
    component; for D_{n+4} label 1 is the near end and 2, 3 the far end;
    for E6 the labels are 1, 2 and for E7 just 1.
    """
    _check_label(tv, i)
    if j is None:
        j = i
    _check_label(tv, j)
    if i > j:
        raise DomainError("contribution(i, j) needs i <= j")
    if i == 0:
        return Fraction(0)
    if tv.family == "A":
        n = tv.n + 1
        return Fraction(i * (n - j), n)
    if tv.family == "D":
        n = tv.n - 4
        base = Fraction(1) if i == j else Fraction(1, 2)
        return base if i == 1 else base + Fraction(n, 4)
    if tv.n == 6:
        return Fraction(4, 3) if i == j else Fraction(2, 3)
    return Fraction(3, 2)


def extreme_contributions(tv: RootBlock) -> tuple[Fraction, Fraction]:
    """(largest, smallest positive) single-section contribution of a block."""
    if tv.family == "A":
        n = tv.n + 1
        l = n // 2
        return Fraction(l * (n - l), n), Fraction(n - 1, n)
    if tv.family == "D":
        return Fraction(1) + Fraction(tv.n - 4, 4), Fraction(1)
    if tv.n == 8:
        raise DomainError("E8 admits no positive contribution")
    value = Fraction(4, 3) if tv.n == 6 else Fraction(3, 2)
    return value, value


@dataclass(frozen=True)
class Bounds:
    c_max: Fraction
    c_min: Fraction

    @property
    def delta(self) -> Fraction:
        return self.c_max - self.c_min


def bounds_for(blocks: Iterable[RootBlock]) -> Bounds:
    pairs = [extreme_contributions(b) for b in blocks if not (b.family == "E" and b.n == 8)]
    if not pairs:
        return Bounds(Fraction(0), Fraction(0))
    return Bounds(sum((p[0] for p in pairs), Fraction(0)), min(p[1] for p in pairs))


# ---------------------------------------------------------------- cases


@dataclass(frozen=True)
class MWCase:
    case_no: int
    T: LatticeExpr
    mw_free: LatticeExpr
    mw_narrow: LatticeExpr
    torsion: tuple[int, ...]
    rank: int
    provenance: str
    narrow_label: str | None = None

    @property
    def t_blocks(self) -> tuple[RootBlock, ...]:
        return self.T.summands

    @cached_property
    def free_lattice(self) -> Lattice:
        return realize(self.mw_free)

    @cached_property
    def narrow_lattice(self) -> Lattice:
        return realize(self.mw_narrow)

    @property
    def torsion_order(self) -> int:
        out = 1
        for k in self.torsion:
            out *= k
        return out

    @property
    def torsion_free(self) -> bool:
        return self.torsion_order == 1

    def __str__(self):
        t = "+".join(str(b) for b in self.t_blocks) or "0"
        tors = "".join(f"+Z/{k}" for k in self.torsion)
        return f"No.{self.case_no} T={t} rank={self.rank}{tors}"


def bounds(case: MWCase) -> tuple[Fraction, Fraction, Fraction]:
    b = bounds_for(case.t_blocks)
    return b.c_max, b.c_min, b.delta


def minimal_norm(case: MWCase) -> Fraction:
    if case.rank == 0:
        raise DomainError(f"case {case.case_no} has rank 0")
    return minimum(case.free_lattice)


def narrow_determinant(case: MWCase) -> int:
    d = matrix_determinant(case.narrow_lattice.gram)
    return int(d)


def qx_form(case: MWCase) -> RationalMatrix:
    """Integer form det(E(K)^0) * height on the free part, as an adjugate."""
    if case.rank == 0:
        raise DomainError(f"case {case.case_no} has rank 0")
    narrow = case.narrow_lattice.gram
    d = matrix_determinant(narrow)
    q = adjugate(narrow)
    if q != case.free_lattice.gram.scaled(d):
        raise DataIntegrityError("free Gram is not the inverse of the narrow Gram", case.case_no)
    return q


# ---------------------------------------------------------------- loading


def _gram(obj, row: int, what: str) -> RationalMatrix:
    try:
        rows = obj["gram"]
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise TypeError("gram must be a list of lists")
        return RationalMatrix.from_rows(rows) if rows else RationalMatrix(0, 0, ())
    except (KeyError, TypeError, DomainError) as exc:
        raise DataIntegrityError(f"{what}: {exc}", row) from exc


def _case_from_row(raw: dict, row: int) -> MWCase:
    required = {"case", "T", "EK_free", "EK_narrow", "torsion", "rank", "provenance"}
    if not isinstance(raw, dict) or required - set(raw):
        missing = sorted(required - set(raw)) if isinstance(raw, dict) else sorted(required)
        raise DataIntegrityError(f"missing keys {missing}", row)
    try:
        blocks = tuple(parse_block(s) for s in raw["T"])
    except (DomainError, AttributeError) as exc:
        raise DataIntegrityError(f"bad T: {exc}", row) from exc
    if not all(isinstance(b, RootBlock) for b in blocks):
        raise DataIntegrityError("T must be a sum of root lattices", row)
    free, narrow = _gram(raw["EK_free"], row, "EK_free"), _gram(raw["EK_narrow"], row, "EK_narrow")
    torsion = tuple(raw["torsion"])
    if not all(isinstance(k, int) and k >= 2 for k in torsion):
        raise DataIntegrityError("torsion must list cyclic orders >= 2", row)
    if raw["provenance"] not in PROVENANCES:
        raise DataIntegrityError(f"unknown provenance {raw['provenance']!r}", row)
    rank = raw["rank"]
    if not (free.rows == narrow.rows == rank):
        raise DataIntegrityError("rank disagrees with Gram sizes", row)
    t_rank = sum(block_rank(b) for b in blocks)
    if rank + t_rank > 8:
        raise DataIntegrityError(f"rank {rank} + rank T {t_rank} exceeds 8", row)
    for what, g in (("EK_free", free), ("EK_narrow", narrow)):
        try:
            Lattice(g)
        except DomainError as exc:
            raise DataIntegrityError(f"{what}: {exc}", row) from exc
    if not narrow.is_integral() or any(narrow[i, i] % 2 for i in range(narrow.rows)):
        raise DataIntegrityError("narrow lattice is not even integral", row)
    d = matrix_determinant(narrow)
    if rank and adjugate(narrow) != free.scaled(d):
        raise DataIntegrityError("free Gram is not the inverse of the narrow Gram", row)
    det_t = matrix_determinant(realize(LatticeExpr(blocks)).gram) if blocks else 1
    order = 1
    for k in torsion:
        order *= k
    if d * order * order != det_t:
        raise DataIntegrityError(f"det E(K)^0 * |tors|^2 = {d * order * order} != det T = {det_t}", row)
    return MWCase(
        case_no=raw["case"],
        T=LatticeExpr(blocks),
        mw_free=LatticeExpr((ExplicitGram(free),)) if rank else LatticeExpr(),
        mw_narrow=LatticeExpr((ExplicitGram(narrow),)) if rank else LatticeExpr(),
        torsion=torsion,
        rank=rank,
        provenance=raw["provenance"],
        narrow_label=raw.get("narrow_label"),
    )


def parse_dataset(doc) -> list[MWCase]:
    rows = doc.get("cases") if isinstance(doc, dict) else doc
    if not isinstance(rows, list):
        raise DataIntegrityError("dataset must hold a list of cases")
    cases, seen = [], set()
    for idx, raw in enumerate(rows, start=1):
        case = _case_from_row(raw, idx)
        if case.case_no in seen:
            raise DataIntegrityError(f"duplicate case {case.case_no}", idx)
        seen.add(case.case_no)
        cases.append(case)
    return cases


_EMBEDDED: list[MWCase] | None = None


def load_dataset(path: str | Path | None = None) -> list[MWCase]:
    """Load and validate the dataset; the embedded copy is cached."""
    global _EMBEDDED
    if path is None:
        if _EMBEDDED is None:
            text = resources.files("resurf.data").joinpath("mwl_cases.json").read_text()
            _EMBEDDED = parse_dataset(json.loads(text))
        return list(_EMBEDDED)
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise DomainError(f"cannot read dataset {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataIntegrityError(f"dataset is not valid JSON: {exc}") from exc
    return parse_dataset(doc)


def case_index(cases: Sequence[MWCase]) -> dict[int, MWCase]:
    return {c.case_no: c for c in cases}


def get_case(case_no: int, cases: Sequence[MWCase] | None = None) -> MWCase:
    idx = case_index(load_dataset() if cases is None else cases)
    if case_no not in idx:
        raise DomainError(f"no case {case_no} in the dataset")
    return idx[case_no]
