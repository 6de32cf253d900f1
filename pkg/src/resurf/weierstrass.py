"""Weierstrass models over Q(t) and local fiber types.

Fibers are identified by valuations of the coefficients together with a
threshold table on L = min v(a_i)/i, which applies in characteristic 0 to
minimal models whose singular point sits at the origin.  ``classify_fiber``
moves every model to the short form y^2 = x^3 - 27 c4 x - 54 c6 first.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ClassificationError, DomainError, IncompletePlacesError, SingularSurfaceError
from .kodaira import FiberConfiguration, FiberType, I, IStar, II, III, IV, II_STAR, III_STAR, IV_STAR
from .lattice_core import RationalLike, format_rational, rational

INF = math.inf


# ---------------------------------------------------------------- polynomials


@dataclass(frozen=True)
class PolyQ:
    """Dense polynomial in t with rational coefficients, ascending degree."""
    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        c = [rational(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def of(cls, *coeffs: RationalLike) -> "PolyQ":
        return cls(tuple(coeffs))

    @classmethod
    def t(cls) -> "PolyQ":
        return cls.of(0, 1)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def _lift(self, other) -> "PolyQ":
        return other if isinstance(other, PolyQ) else PolyQ.of(other)

    def __add__(self, other) -> "PolyQ":
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return PolyQ(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self) -> "PolyQ":
        return PolyQ(tuple(-x for x in self.coeffs))

    def __sub__(self, other) -> "PolyQ":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "PolyQ":
        return self._lift(other) - self

    def __mul__(self, other) -> "PolyQ":
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return PolyQ()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return PolyQ(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "PolyQ":
        out = PolyQ.of(1)
        for _ in range(e):
            out = out * self
        return out

    def __call__(self, x: RationalLike) -> Fraction:
        x = rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod(self, other: "PolyQ") -> tuple["PolyQ", "PolyQ"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        q = [Fraction(0)] * max(len(r) - len(other.coeffs) + 1, 0)
        lead = other.coeffs[-1]
        for k in range(len(q) - 1, -1, -1):
            f = r[k + other.degree] / lead
            q[k] = f
            if f:
                for j, c in enumerate(other.coeffs):
                    r[k + j] -= f * c
        return PolyQ(tuple(q)), PolyQ(tuple(r))

    def derivative(self) -> "PolyQ":
        return PolyQ(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def monic(self) -> "PolyQ":
        return self if self.is_zero() else PolyQ(tuple(c / self.coeffs[-1] for c in self.coeffs))

    def reversed_to(self, cap: int) -> "PolyQ":
        """u^cap * p(1/u), the chart at infinity."""
        if self.degree > cap:
            raise DomainError(f"degree {self.degree} exceeds cap {cap}")
        c = list(self.coeffs) + [Fraction(0)] * (cap + 1 - len(self.coeffs))
        return PolyQ(tuple(reversed(c)))

    def shift(self, c: RationalLike) -> "PolyQ":
        """p(t + c)."""
        out = PolyQ()
        base = PolyQ.of(c, 1)
        for coeff in reversed(self.coeffs):
            out = out * base + coeff
        return out

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                coef = format_rational(c)
                if mono and c == 1:
                    coef = ""
                elif mono and c == -1:
                    coef = "-"
                terms.append(f"{coef}{'*' if coef not in ('', '-') and mono else ''}{mono}")
        return " + ".join(reversed(terms)).replace("+ -", "- ")


def poly_gcd(a: PolyQ, b: PolyQ) -> PolyQ:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


# ---------------------------------------------------------------- places


@dataclass(frozen=True)
class Place:
    """Either t = value (finite) or the place at infinity (value None)."""
    value: Fraction | None = None

    @classmethod
    def finite(cls, c: RationalLike) -> "Place":
        return cls(rational(c))

    @classmethod
    def infinity(cls) -> "Place":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    @classmethod
    def parse(cls, text: str) -> "Place":
        s = text.strip()
        if s.lower() in ("inf", "infinity", "∞"):
            return cls.infinity()
        return cls.finite(s)

    def __str__(self):
        return "inf" if self.is_infinite else format_rational(self.value)


def parse_places(text: str | Iterable[str]) -> list[Place]:
    items = text.split(",") if isinstance(text, str) else list(text)
    return [Place.parse(s) for s in items if s.strip()]


def valuation(p: PolyQ, place: Place, weight: int | None = None) -> int | float:
    """Order of vanishing of p at the place; math.inf for the zero polynomial.

    At infinity the polynomial is read as a form of degree ``weight``, so
    the valuation is weight - deg p.
    """
    if p.is_zero():
        return INF
    if place.is_infinite:
        if weight is None:
            raise DomainError("valuation at infinity needs a degree cap")
        if p.degree > weight:
            raise DomainError(f"degree {p.degree} exceeds cap {weight} at infinity")
        return weight - p.degree
    lin = PolyQ.of(-place.value, 1)
    v = 0
    while True:
        q, r = p.divmod(lin)
        if not r.is_zero():
            return v
        p, v = q, v + 1


# ---------------------------------------------------------------- models


INDICES = (1, 2, 3, 4, 6)


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6.

    ``cap_scale`` s bounds deg a_i by i*s; rational surfaces have s = 1.
    Local charts and the short form may carry other scales.
    """
    a1: PolyQ = PolyQ()
    a2: PolyQ = PolyQ()
    a3: PolyQ = PolyQ()
    a4: PolyQ = PolyQ()
    a6: PolyQ = PolyQ()
    cap_scale: int = 1

    def __post_init__(self):
        for i, p in zip(INDICES, self.coeffs()):
            if not isinstance(p, PolyQ):
                raise DomainError(f"a{i} must be a polynomial")
            if p.degree > i * self.cap_scale:
                raise DomainError(f"deg a{i} = {p.degree} exceeds {i * self.cap_scale}")

    @classmethod
    def from_coeffs(cls, a1=(), a2=(), a3=(), a4=(), a6=(), cap_scale: int = 1) -> "WeierstrassModel":
        return cls(PolyQ(tuple(a1)), PolyQ(tuple(a2)), PolyQ(tuple(a3)), PolyQ(tuple(a4)),
                   PolyQ(tuple(a6)), cap_scale)

    @classmethod
    def from_json(cls, data: dict) -> "WeierstrassModel":
        unknown = set(data) - {"a1", "a2", "a3", "a4", "a6", "cap_scale"}
        if unknown:
            raise DomainError(f"unknown model keys: {sorted(unknown)}")
        try:
            polys = {k: PolyQ(tuple(rational(x) for x in data.get(k, [])))
                     for k in ("a1", "a2", "a3", "a4", "a6")}
        except TypeError as exc:
            raise DomainError(f"bad coefficient list: {exc}") from exc
        return cls(**polys, cap_scale=int(data.get("cap_scale", 1)))

    def to_json(self) -> dict:
        d = {f"a{i}": p.to_json() for i, p in zip(INDICES, self.coeffs())}
        if self.cap_scale != 1:
            d["cap_scale"] = self.cap_scale
        return d

    def coeffs(self) -> tuple[PolyQ, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def cap(self, i: int) -> int:
        return i * self.cap_scale


def load_model(path: str | Path) -> WeierstrassModel:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read model {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise DomainError("model file must hold a JSON object")
    return WeierstrassModel.from_json(data)


def b_invariants(W: WeierstrassModel) -> tuple[PolyQ, PolyQ, PolyQ, PolyQ]:
    a1, a2, a3, a4, a6 = W.coeffs()
    b2 = a1 * a1 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 - a1 * a3 * a4 + 4 * a2 * a6 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def c_invariants(W: WeierstrassModel) -> tuple[PolyQ, PolyQ]:
    b2, b4, b6, _ = b_invariants(W)
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2 ** 3) + 36 * b2 * b4 - 216 * b6
    return c4, c6


def discriminant_unchecked(W: WeierstrassModel) -> PolyQ:
    b2, b4, b6, b8 = b_invariants(W)
    return -(b2 * b2 * b8) - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def discriminant(W: WeierstrassModel) -> PolyQ:
    delta = discriminant_unchecked(W)
    if delta.is_zero():
        raise SingularSurfaceError("discriminant vanishes identically")
    return delta


def cubic_discriminant(W: WeierstrassModel) -> PolyQ:
    """Disc(x^3 + a2 x^2 + a4 x + a6) as a polynomial in t."""
    a, b, c = W.a2, W.a4, W.a6
    return a * a * b * b - 4 * b ** 3 - 4 * a ** 3 * c - 27 * c * c + 18 * a * b * c


def short_form(W: WeierstrassModel) -> WeierstrassModel:
    """The isomorphic model y^2 = x^3 - 27 c4 x - 54 c6 (over Q(t))."""
    c4, c6 = c_invariants(W)
    return WeierstrassModel(a4=-27 * c4, a6=-54 * c6, cap_scale=W.cap_scale)


def local_chart(W: WeierstrassModel, place: Place) -> WeierstrassModel:
    """Re-centre so that the place becomes t = 0."""
    if place.is_infinite:
        return WeierstrassModel(*(p.reversed_to(W.cap(i)) for i, p in zip(INDICES, W.coeffs())),
                                cap_scale=W.cap_scale)
    if place.value == 0:
        return W
    return WeierstrassModel(*(p.shift(place.value) for p in W.coeffs()), cap_scale=W.cap_scale)


def _model_valuations(W: WeierstrassModel, place: Place) -> list[int | float]:
    return [valuation(p, place, W.cap(i)) for i, p in zip(INDICES, W.coeffs())]


def minimize_at(W: WeierstrassModel, place: Place) -> WeierstrassModel:
    """Divide a_i by u^i while every v(a_i) >= i, u the local parameter.

    At infinity the degree caps drop by i instead, which is the same
    rescaling seen in the other chart.
    """
    if all(p.is_zero() for p in W.coeffs()):
        raise SingularSurfaceError("all coefficients vanish")
    while all(v >= i for v, i in zip(_model_valuations(W, place), INDICES)):
        if place.is_infinite:
            if W.cap_scale == 0:
                break
            W = WeierstrassModel(*W.coeffs(), cap_scale=W.cap_scale - 1)
        else:
            u = PolyQ.of(-place.value, 1)
            W = WeierstrassModel(*(p.divmod(u ** i)[0] for i, p in zip(INDICES, W.coeffs())),
                                 cap_scale=W.cap_scale)
    return W


def _threshold(W: WeierstrassModel, place: Place) -> Fraction | float:
    vals = _model_valuations(W, place)
    return min(Fraction(v, i) if v != INF else INF for v, i in zip(vals, INDICES))


def classify_fiber(W: WeierstrassModel, place: Place) -> FiberType:
    S = minimize_at(short_form(W), place)
    w = 12 * S.cap_scale
    vd = valuation(discriminant(S), place, w)
    if vd == 0:
        return I(0)
    L = _threshold(S, place)
    if L == 0:
        return I(int(vd))
    _, _, b6, _ = b_invariants(S)
    v_b6 = valuation(b6, place, 6 * S.cap_scale)
    if L == Fraction(1, 6):
        return II
    if L == Fraction(1, 4):
        return III
    if L == Fraction(1, 3) and v_b6 == 2:
        return IV
    if L == Fraction(1, 2):
        v_d = valuation(cubic_discriminant(S), place, 12 * S.cap_scale)
        if v_d == 6:
            return IStar(0)
        aux = S.a2 * S.a2 - 3 * S.a4
        if v_d > 6 and valuation(aux, place, 4 * S.cap_scale) == 2:
            return IStar(int(vd) - 6)
    if L == Fraction(2, 3) and v_b6 == 4:
        return IV_STAR
    if L == Fraction(3, 4):
        return III_STAR
    if L == Fraction(5, 6):
        return II_STAR
    raise ClassificationError(f"no fiber type matches at t={place} (L={L}, v(disc)={vd})")


def _strip_root(p: PolyQ, c: Fraction) -> PolyQ:
    lin = PolyQ.of(-c, 1)
    while True:
        q, r = p.divmod(lin)
        if not r.is_zero():
            return p
        p = q


def classify_surface(W: WeierstrassModel, places: Sequence[Place]) -> FiberConfiguration:
    """Fiber configuration over all of P^1.

    Singular fibers off the listed places must be simple roots of the
    discriminant (type I1); anything else raises IncompletePlacesError.
    """
    delta = discriminant(W)
    fibers: list[FiberType] = []
    seen: set[Place] = set()
    rest = delta
    for place in places:
        if place in seen:
            continue
        seen.add(place)
        fibers.append(classify_fiber(W, place))
        if not place.is_infinite:
            rest = _strip_root(rest, place.value)
    if rest.degree > 0:
        if poly_gcd(rest, rest.derivative()).degree > 0:
            raise IncompletePlacesError("discriminant has a repeated root at an unlisted place")
        fibers.extend([I(1)] * rest.degree)
    if Place.infinity() not in seen:
        e_inf = 12 * W.cap_scale - delta.degree
        if e_inf == 1:
            fibers.append(I(1))
        elif e_inf > 1:
            raise IncompletePlacesError("infinity carries a singular fiber; list it in the places")
    return FiberConfiguration(tuple(f for f in fibers if f != I(0)))
