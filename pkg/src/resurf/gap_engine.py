"""Gap numbers: which k occur as the intersection number P.O of two sections.

With chi = 1 the height formula reads h(P) = 2 + 2(P.O) - sum contr_v(P).
A value k is a gap when no section P gives P.O = k.  The checks below
work on the narrow lattice, the free lattice and the integral form
Q_X = det(E(K)^0) * h.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterable, Sequence

from .errors import DomainError, InconsistencyError
from .lattice_core import (
    A, Lattice, RootBlock, first_vector_of_norm, format_rational, is_integer_square, realize,
)
from .mwl_data import MWCase, bounds, contribution, minimal_norm, narrow_determinant, qx_form
from .reference import CRITICAL_INTEGER_WITNESSES

GAP, NOT_GAP, UNKNOWN = "gap", "ok", "unknown"


@dataclass(frozen=True)
class GapVerdict:
    k: int
    verdict: str
    rule: str
    witness: dict = field(default_factory=dict, compare=False)

    @property
    def is_gap(self) -> bool:
        return self.verdict == GAP

    def line(self) -> str:
        return f"k={self.k} verdict={self.verdict} rule={self.rule} witness={render_witness(self.witness)}"

    def to_json(self) -> dict:
        return {"k": self.k, "verdict": self.verdict, "rule": self.rule,
                "witness": {key: _jsonable(v) for key, v in sorted(self.witness.items())}}


def _jsonable(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    return v


def render_witness(w: dict) -> str:
    if not w:
        return "-"
    parts = []
    for key, v in sorted(w.items()):
        v = _jsonable(v)
        if isinstance(v, list):
            v = "(" + ",".join(str(x) for x in v) + ")"
        parts.append(f"{key}:{v}")
    return ";".join(parts)


# ---------------------------------------------------------------- height formula


def height_to_intersection(h: Fraction, contr_sum: Fraction, strict: bool = True) -> Fraction:
    """P.O = (h - 2 + sum contr) / 2."""
    po = (Fraction(h) - 2 + Fraction(contr_sum)) / 2
    if strict and (po.denominator != 1 or po < 0):
        raise InconsistencyError(f"P.O = {format_rational(po)} is not a non-negative integer")
    return po


@dataclass(frozen=True)
class SpecialWitness:
    """A section with known component pattern that settles one k."""
    case_no: int
    description: str
    free_coords: tuple[int, ...]
    components: tuple[tuple[str, int], ...]
    intersection: int

    def height(self, case: MWCase) -> Fraction:
        return case.free_lattice.norm(self.free_coords)

    def contr_sum(self) -> Fraction:
        blocks = [(RootBlock(b[0], int(b[1:])), i) for b, i in self.components]
        return sum((contribution(b, i) for b, i in blocks), Fraction(0))

    def check(self, case: MWCase) -> int:
        if case.case_no != self.case_no:
            raise DomainError("witness belongs to another case")
        used = sorted(b for b, _ in self.components)
        have = sorted(str(b) for b in case.t_blocks)
        if used != have:
            raise InconsistencyError("witness components do not match T")
        po = height_to_intersection(self.height(case), self.contr_sum())
        if po != self.intersection:
            raise InconsistencyError(f"height formula gives {po}, record says {self.intersection}")
        return int(po)


# 4P+Q, P generating the free part and Q the 2-torsion section
SPECIAL_WITNESSES = (
    SpecialWitness(59, "4P+Q", (4,), (("A3", 2), ("A2", 1), ("A1", 1), ("A1", 1)), 1),
)


def special_witness_for(case: MWCase, k: int) -> SpecialWitness | None:
    for w in SPECIAL_WITNESSES:
        if w.case_no == case.case_no and w.intersection == k:
            return w
    return None


# ---------------------------------------------------------------- per-case caches


@lru_cache(maxsize=None)
def _facts(case: MWCase):
    c_max, c_min, delta = bounds(case)
    d = narrow_determinant(case)
    return c_max, c_min, delta, d, Lattice(qx_form(case)), minimal_norm(case)


def _require_rank(case: MWCase) -> None:
    if case.rank == 0:
        raise DomainError(f"case {case.case_no} has rank 0; every k >= 1 is a gap")


def _integers_in(lo: Fraction, hi: Fraction, half_open: bool) -> range:
    first = -((-lo.numerator) // lo.denominator)
    last = hi.numerator // hi.denominator
    if half_open and hi.denominator == 1:
        last -= 1
    return range(max(first, 0), last + 1)


def _squares_in(lo: Fraction, hi: Fraction, half_open: bool) -> Iterable[int]:
    """n >= 0 with lo <= n^2 <= hi (n^2 < hi when half-open)."""
    if hi < 0:
        return range(0)
    n = isqrt(max(lo, 0).__ceil__()) if lo > 0 else 0
    while n * n < lo:
        n += 1
    out = []
    while n * n < hi or (n * n == hi and not half_open):
        out.append(n)
        n += 1
    return out


# ---------------------------------------------------------------- necessary / sufficient


def necessary_witness(case: MWCase, k: int) -> tuple[int, tuple[int, ...]] | None:
    """An integer in [d(2+2k-c_max), d(2+2k)] represented by Q_X, with its vector."""
    _require_rank(case)
    c_max, _, _, d, qx, _ = _facts(case)
    lo, hi = d * (2 + 2 * k - c_max), Fraction(d * (2 + 2 * k))
    for m in _integers_in(lo, hi, False):
        x = first_vector_of_norm(qx, m)
        if x is not None:
            return m, x
    return None


def necessary_check(case: MWCase, k: int) -> bool:
    return necessary_witness(case, k) is not None


def sufficient_check(case: MWCase, k: int) -> GapVerdict | None:
    """First witness from the four sufficient rules, in order."""
    _require_rank(case)
    c_max, c_min, delta, d, qx, mu = _facts(case)
    target = 2 + 2 * k
    x = first_vector_of_norm(case.narrow_lattice, target)
    if x is not None:
        return GapVerdict(k, NOT_GAP, "narrow-norm", {"norm": target, "vector": x})
    if not case.torsion_free:
        x = first_vector_of_norm(case.narrow_lattice, 2 * k)
        if x is not None:
            return GapVerdict(k, NOT_GAP, "narrow-torsion", {"norm": 2 * k, "vector": x,
                                                             "torsion": case.torsion})
    if delta > 2:
        return None
    half_open = delta == 2
    lo, hi = (target - c_max) / mu, (target - c_min) / mu
    for n in _squares_in(lo, hi, half_open):
        if (n * n * mu).denominator != 1:
            base = first_vector_of_norm(case.free_lattice, mu)
            return GapVerdict(k, NOT_GAP, "interval-square", {
                "n": n, "mu": mu, "interval": (lo, hi), "half_open": half_open,
                "vector": tuple(n * v for v in base)})
    for m in _integers_in(d * (target - c_max), d * (target - c_min), half_open):
        if m % d and (x := first_vector_of_norm(qx, m)) is not None:
            return GapVerdict(k, NOT_GAP, "qx-interval", {"value": m, "d": d, "vector": x})
    return None


# ---------------------------------------------------------------- rank 1 criterion


def r1_torsion_free_witness(case: MWCase, k: int) -> GapVerdict:
    """Exact decision for rank 1 without torsion."""
    if case.rank != 1 or not case.torsion_free:
        raise DomainError(f"case {case.case_no} is not rank 1 and torsion-free")
    c_max, c_min, _, _, _, mu = _facts(case)
    target = 2 + 2 * k
    if is_integer_square(mu * target):
        return GapVerdict(k, NOT_GAP, "r1-square", {"square": mu * target})
    lo, hi = (target - c_max) / mu, (target - c_min) / mu
    for n in _squares_in(lo, hi, False):
        if (mu * n).denominator != 1:
            return GapVerdict(k, NOT_GAP, "r1-interval", {"n": n, "interval": (lo, hi)})
    return GapVerdict(k, GAP, "r1-criterion", {"mu": mu, "interval": (lo, hi)})


def r1_torsion_free_is_gap(case: MWCase, k: int) -> bool:
    return r1_torsion_free_witness(case, k).is_gap


# ---------------------------------------------------------------- decisions


def decide_gap(case: MWCase, k: int) -> GapVerdict:
    _require_rank(case)
    if k < 0:
        raise DomainError("k must be non-negative")
    if case.rank == 1 and case.torsion_free:
        return r1_torsion_free_witness(case, k)
    found = sufficient_check(case, k)
    if found is not None:
        return found
    w = special_witness_for(case, k)
    if w is not None:
        w.check(case)
        return GapVerdict(k, NOT_GAP, "special-witness", {"section": w.description,
                                                          "components": [i for _, i in w.components]})
    if not necessary_check(case, k):
        c_max = _facts(case)[0]
        d = _facts(case)[3]
        return GapVerdict(k, GAP, "necessary", {"interval": (d * (2 + 2 * k - c_max), d * (2 + 2 * k))})
    return GapVerdict(k, UNKNOWN, "undecided")


@dataclass(frozen=True)
class GapSweep:
    case_no: int
    max_k: int
    verdicts: tuple[GapVerdict, ...]

    @property
    def gaps(self) -> list[int]:
        return [v.k for v in self.verdicts if v.verdict == GAP]

    @property
    def unknown(self) -> list[int]:
        return [v.k for v in self.verdicts if v.verdict == UNKNOWN]


def sweep_gaps(case: MWCase, max_k: int, start: int = 0) -> GapSweep:
    return GapSweep(case.case_no, max_k, tuple(decide_gap(case, k) for k in range(start, max_k + 1)))


def gap_numbers_up_to(case: MWCase, N: int) -> list[int]:
    return sweep_gaps(case, N).gaps


@dataclass(frozen=True)
class GapDensity:
    N: int
    gaps: int
    unknown: int

    @property
    def lower(self) -> Fraction:
        return Fraction(self.gaps, self.N)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.gaps + self.unknown, self.N)

    @property
    def exact(self) -> bool:
        return self.unknown == 0


def gap_density(case: MWCase, N: int) -> GapDensity:
    """Share of gaps among k = 1..N; bounds when some k stay undecided."""
    if N < 1:
        raise DomainError("N must be positive")
    if case.rank == 0:
        return GapDensity(N, N, 0)
    if case.rank > 2:
        raise DomainError("density sweeps are meant for rank at most 2")
    s = sweep_gaps(case, N, start=1)
    return GapDensity(N, len(s.gaps), len(s.unknown))


# ---------------------------------------------------------------- critical integers


def quaternary_form_value(x: Sequence[int]) -> int:
    x1, x2, x3, x4 = x
    return x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4 - x1 * x2 - x2 * x3 - x3 * x4


@dataclass(frozen=True)
class CriticalRow:
    n: int
    witness: tuple[int, ...]
    value: int
    rederived: tuple[int, ...] | None

    @property
    def ok(self) -> bool:
        return self.value == self.n and self.rederived is not None


def verify_290_witnesses() -> list[CriticalRow]:
    """Check each stored witness and find an independent one by enumeration.

    The form is half the A4 norm, so n is represented iff A4 has a vector
    of norm 2n.
    """
    a4 = realize(A(4))
    rows = []
    for n, x in sorted(CRITICAL_INTEGER_WITNESSES.items()):
        rows.append(CriticalRow(n, x, quaternary_form_value(x), first_vector_of_norm(a4, 2 * n)))
    return rows


# ---------------------------------------------------------------- k = 1


@dataclass(frozen=True)
class OneGapEntry:
    case_no: int
    route: str
    verdict: GapVerdict


def classify_1_gap(cases: Iterable[MWCase]) -> list[OneGapEntry]:
    """Settle k = 1 for every positive-rank case, recording the route."""
    out = []
    for case in cases:
        if case.rank == 0:
            continue
        v = _one_gap(case)
        route = {"narrow-norm": "norm-4-narrow", "narrow-torsion": "norm-2-torsion",
                 "r1-square": "r1-criterion", "r1-interval": "r1-criterion",
                 "r1-criterion": "gap", "interval-square": "interval-square",
                 "qx-interval": "qx-interval", "special-witness": "special-witness",
                 "necessary": "gap", "undecided": "unknown"}[v.rule]
        out.append(OneGapEntry(case.case_no, route, v))
    return out


def _one_gap(case: MWCase) -> GapVerdict:
    found = sufficient_check(case, 1)
    if found is not None and found.rule in ("narrow-norm", "narrow-torsion"):
        return found
    if case.rank == 1 and case.torsion_free:
        return r1_torsion_free_witness(case, 1)
    return found if found is not None else decide_gap(case, 1)
