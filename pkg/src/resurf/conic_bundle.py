"""Conic classes on intersection graphs and conic-bundle fiber types.

A divisor D = sum n_i E_i is given by its intersection graph.  Curves are
smooth rational curves of self-intersection 0 (``star``), -1 (``section``)
or -2 (``component``).  D is a conic class when D.E_i = 0 for each curve in
its support and D.(-K) = 2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ClassificationError, DomainError
from .kodaira import (
    FiberConfiguration, IStar, II_STAR, III_STAR, IV_STAR, component_count, is_nonreduced,
    is_reduced, is_reducible,
)

STAR, SECTION, COMPONENT = "star", "section", "component"
SELF_INTERSECTION = {STAR: 0, SECTION: -1, COMPONENT: -2}
ANTICANONICAL = {STAR: 2, SECTION: 1, COMPONENT: 0}


@dataclass(frozen=True)
class CurveNode:
    kind: str
    mult: int = 1

    def __post_init__(self):
        if self.kind not in SELF_INTERSECTION:
            raise DomainError(f"unknown curve kind {self.kind!r}")
        if self.mult < 1:
            raise DomainError("multiplicity must be positive")

    @property
    def self_intersection(self) -> int:
        return SELF_INTERSECTION[self.kind]


@dataclass(frozen=True)
class DivisorGraph:
    nodes: tuple[CurveNode, ...]
    edges: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        merged: dict[tuple[int, int], int] = {}
        n = len(self.nodes)
        for e in self.edges:
            i, j, w = e
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise DomainError(f"bad edge {e}")
            if w < 0:
                raise DomainError("intersection numbers of distinct curves are non-negative")
            key = (min(i, j), max(i, j))
            merged[key] = merged.get(key, 0) + w
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(sorted((i, j, w) for (i, j), w in merged.items() if w)))

    @classmethod
    def from_json(cls, data: dict) -> "DivisorGraph":
        try:
            nodes = tuple(CurveNode(str(n["kind"]).lower(), int(n.get("mult", 1))) for n in data["nodes"])
            edges = tuple((int(a), int(b), int(w)) for a, b, w in data.get("edges", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed graph: {exc}") from exc
        return cls(nodes, edges)

    def to_json(self) -> dict:
        return {"nodes": [{"kind": n.kind, "mult": n.mult} for n in self.nodes],
                "edges": [list(e) for e in self.edges]}

    def dot(self, i: int, j: int) -> int:
        if i == j:
            return self.nodes[i].self_intersection
        a, b = min(i, j), max(i, j)
        for x, y, w in self.edges:
            if (x, y) == (a, b):
                return w
        return 0

    def neighbours(self, i: int) -> list[int]:
        return sorted({j for a, b, _ in self.edges for j in (a, b)
                       if i in (a, b) and j != i})

    def divisor_dot(self, i: int) -> int:
        """D.E_i."""
        return sum(n.mult * self.dot(j, i) for j, n in enumerate(self.nodes))

    def is_connected(self) -> bool:
        if not self.nodes:
            return False
        seen, stack = {0}, [0]
        while stack:
            for j in self.neighbours(stack.pop()):
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == len(self.nodes)


def load_graph(path: str | Path) -> DivisorGraph:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read graph {path}: {exc}") from exc
    return DivisorGraph.from_json(data)


def anticanonical_degree(g: DivisorGraph) -> int:
    return sum(n.mult * ANTICANONICAL[n.kind] for n in g.nodes)


@dataclass(frozen=True)
class ConicCheck:
    ok: bool
    degree: int
    products: tuple[int, ...]
    reason: str = ""

    def __bool__(self):
        return self.ok


def is_conic_class(g: DivisorGraph) -> ConicCheck:
    products = tuple(g.divisor_dot(i) for i in range(len(g.nodes)))
    degree = anticanonical_degree(g)
    for i, p in enumerate(products):
        if p != 0:
            return ConicCheck(False, degree, products, f"D.E_{i} = {p}, not 0 ({g.nodes[i].kind})")
    if degree != 2:
        return ConicCheck(False, degree, products, f"D.(-K) = {degree}, not 2")
    return ConicCheck(True, degree, products)


# ---------------------------------------------------------------- fiber types


@dataclass(frozen=True)
class ConicFiberType:
    family: str  # "0", "A" or "D"
    n: int = 0

    def __post_init__(self):
        ok = {"0": self.n == 0, "A": self.n >= 2, "D": self.n >= 3}
        if not ok.get(self.family, False):
            raise DomainError(f"no conic fiber type {self.family}{self.n}")

    def __str__(self):
        return "0" if self.family == "0" else f"{self.family}{self.n}"

    @classmethod
    def parse(cls, text: str) -> "ConicFiberType":
        t = text.strip()
        if t == "0":
            return cls("0")
        if len(t) >= 2 and t[0] in "AD" and t[1:].isdigit():
            return cls(t[0], int(t[1:]))
        raise DomainError(f"unknown conic fiber type {text!r}")


TYPE0 = ConicFiberType("0")
TYPE_A2 = ConicFiberType("A", 2)
TYPE_D3 = ConicFiberType("D", 3)


def TypeA(n: int) -> ConicFiberType:
    return ConicFiberType("A", n)


def TypeD(m: int) -> ConicFiberType:
    return ConicFiberType("D", m)


def template(t: ConicFiberType) -> DivisorGraph:
    """The standard divisor of each fiber type."""
    if t.family == "0":
        return DivisorGraph((CurveNode(STAR),))
    if t.family == "A":
        inner = [CurveNode(COMPONENT)] * (t.n - 2)
        nodes = (CurveNode(SECTION), *inner, CurveNode(SECTION))
        return DivisorGraph(nodes, tuple((i, i + 1, 1) for i in range(t.n - 1)))
    chain = t.n - 3
    nodes = [CurveNode(SECTION, 2)] + [CurveNode(COMPONENT, 2)] * chain
    nodes += [CurveNode(COMPONENT), CurveNode(COMPONENT)]
    edges = [(i, i + 1, 1) for i in range(chain)]
    end = chain
    edges += [(end, chain + 1, 1), (end, chain + 2, 1)]
    return DivisorGraph(tuple(nodes), tuple(edges))


def _path_order(g: DivisorGraph) -> list[int] | None:
    """Node order along a simple path with unit edges, or None."""
    n = len(g.nodes)
    if any(w != 1 for _, _, w in g.edges) or len(g.edges) != n - 1:
        return None
    degs = [len(g.neighbours(i)) for i in range(n)]
    if n == 1:
        return [0]
    ends = [i for i in range(n) if degs[i] == 1]
    if len(ends) != 2 or any(d > 2 for d in degs):
        return None
    order, prev = [ends[0]], None
    while len(order) < n:
        nxt = [j for j in g.neighbours(order[-1]) if j != prev]
        if not nxt:
            return None
        prev = order[-1]
        order.append(nxt[0])
    return order


def _match_a(g: DivisorGraph) -> ConicFiberType | None:
    order = _path_order(g)
    if order is None or len(order) < 2:
        return None
    if any(g.nodes[i].mult != 1 for i in order):
        return None
    kinds = [g.nodes[i].kind for i in order]
    if kinds[0] == kinds[-1] == SECTION and all(k == COMPONENT for k in kinds[1:-1]):
        return TypeA(len(order))
    return None


def _match_d(g: DivisorGraph) -> ConicFiberType | None:
    """Double section, then a chain of double components, then a fork of two simple ones."""
    n = len(g.nodes)
    if n < 3 or any(w != 1 for _, _, w in g.edges) or len(g.edges) != n - 1:
        return None
    heads = [i for i, c in enumerate(g.nodes) if c.kind == SECTION]
    leaves = [i for i, c in enumerate(g.nodes) if c.kind == COMPONENT and c.mult == 1]
    doubles = [i for i, c in enumerate(g.nodes) if c.kind == COMPONENT and c.mult == 2]
    if len(heads) != 1 or g.nodes[heads[0]].mult != 2 or len(leaves) != 2:
        return None
    if len(doubles) != n - 3:
        return None
    spine = [heads[0]]
    while True:
        nxt = [j for j in g.neighbours(spine[-1]) if j in doubles and j not in spine]
        if not nxt:
            break
        if len(nxt) > 1:
            return None
        spine.append(nxt[0])
    if len(spine) != n - 2:
        return None
    fork = spine[-1]
    if any(g.neighbours(j) != [fork] for j in leaves):
        return None
    return TypeD(n)


def classify_conic_fiber(g: DivisorGraph) -> ConicFiberType:
    check = is_conic_class(g)
    if not check:
        raise DomainError(f"not a conic class: {check.reason}")
    if not g.is_connected():
        raise DomainError("divisor is not connected")
    if len(g.nodes) == 1 and g.nodes[0].kind == STAR and g.nodes[0].mult == 1:
        return TYPE0
    for match in (_match_a, _match_d):
        t = match(g)
        if t is not None:
            return t
    raise ClassificationError("conic class fits none of the fiber types")


# ---------------------------------------------------------------- neighbour bounds


def neighbour_count(g: DivisorGraph, i: int) -> int:
    return len(g.neighbours(i))


def neighbour_bound_check(g: DivisorGraph) -> bool:
    """n(E_i) <= -n_i^2 E_i^2 for every curve of negative square."""
    return all(neighbour_count(g, i) <= -(c.mult ** 2) * c.self_intersection
               for i, c in enumerate(g.nodes) if c.self_intersection < 0)


def neighbour_bound_check_linear(g: DivisorGraph) -> bool:
    """The sharper n(E_i) <= -n_i E_i^2; experimental, not normative."""
    return all(neighbour_count(g, i) <= -c.mult * c.self_intersection
               for i, c in enumerate(g.nodes) if c.self_intersection < 0)


# ---------------------------------------------------------------- configurations


@dataclass(frozen=True)
class AdmissibleTypes:
    a2: bool
    a_n: bool
    d3: bool
    d_m: bool
    type0: bool = True

    def names(self) -> list[str]:
        labels = (("0", self.type0), ("A2", self.a2), ("A_n(n>=3)", self.a_n),
                  ("D3", self.d3), ("D_m(m>=4)", self.d_m))
        return [name for name, ok in labels if ok]

    def allows(self, t: ConicFiberType) -> bool:
        if t.family == "0":
            return self.type0
        if t.family == "A":
            return self.a2 if t.n == 2 else self.a_n
        return self.d3 if t.n == 3 else self.d_m


def generic_rank_of(c: FiberConfiguration) -> int:
    """Stated rank, or 8 - rank T when the configuration leaves it open."""
    if c.generic_rank is not None:
        return c.generic_rank
    return 8 - sum(component_count(f) - 1 for f in c.fibers)


def admissible_types(c: FiberConfiguration) -> AdmissibleTypes:
    fibers = c.fibers
    reducible = [f for f in fibers if is_reducible(f)]
    return AdmissibleTypes(
        a2=generic_rank_of(c) > 0 and III_STAR not in fibers,
        a_n=any(f != II_STAR for f in reducible),
        d3=len(reducible) >= 2,
        d_m=any(is_nonreduced(f) or (f.kind == "I" and f.n >= 4) for f in fibers),
    )


@dataclass(frozen=True)
class RNRFExtras:
    """Facts about sections that the fiber types alone do not fix.

    ``has_reducible_reduced_fiber`` is read off the configuration when None.
    """
    has_reducible_reduced_fiber: bool | None = None
    has_nontrivial_section: bool = False
    section_hits_near_component: bool = False
    has_conjugate_disjoint_sections: bool = False
    has_2torsion_section: bool = False


def rnrf_conditions(c: FiberConfiguration, extras: RNRFExtras | None = None) -> list[int]:
    """Numbers (1..6) of the sufficient conditions that hold."""
    x = extras or RNRFExtras()
    fibers = c.fibers
    reduced_reducible = x.has_reducible_reduced_fiber
    if reduced_reducible is None:
        reduced_reducible = any(is_reducible(f) and is_reduced(f) for f in fibers)
    has = fibers.__contains__
    out = []
    if has(II_STAR) or has(III_STAR) or any(has(IStar(n)) for n in (2, 3, 4)):
        out.append(1)
    if (has(IV_STAR) or has(IStar(0)) or has(IStar(1))) and reduced_reducible:
        out.append(2)
    if has(IV_STAR) and x.has_nontrivial_section:
        out.append(3)
    if has(IStar(1)) and x.section_hits_near_component:
        out.append(4)
    if has(IStar(1)) and x.has_conjugate_disjoint_sections:
        out.append(5)
    if fibers.count(IStar(0)) >= 2 and x.has_2torsion_section:
        out.append(6)
    return out


def rnrf_available(c: FiberConfiguration, extras: RNRFExtras | None = None) -> bool:
    return bool(rnrf_conditions(c, extras))
