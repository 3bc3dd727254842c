"""Singular fibers of the seven-parameter Weierstrass family of K3 surfaces.

For ``a = (a0, a2, a4, a6, a8, a10, a14)`` the surface is

    y^2 = 4 z^3 - g2(x) z - g3(x),
    g2 = a0 x^5 + a4 x^4 + a8 x^3,
    g3 = a2 x^7 + a6 x^6 + a10 x^5 + a14 x^4,

fibred over the x-line.  Fiber types come from the vanishing orders of
``g2``, ``g3`` and ``Delta = 4 g2^3 + 27 g3^2`` at each place, with the
place at infinity read off from the degree deficits against (8, 12, 24).

Roots of ``Delta`` are grouped by exact polynomial factors over Q (never
split into conjugates), refined until every root in a group has the same
vanishing orders.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .exactmath import (
    UPoly,
    as_rational,
    bareiss_det,
    discriminant,
    rational_to_str,
    squarefree_decomposition,
    upoly_gcd,
)

WEIGHTS = (0, 2, 4, 6, 8, 10, 14)
PARAM_NAMES = ("a0", "a2", "a4", "a6", "a8", "a10", "a14")
INFINITE_ORDER = 10**9


class NotK3Error(ValueError):
    """The parameter point does not give a K3 surface."""


class FamilyParams(NamedTuple):
    a0: Fraction
    a2: Fraction
    a4: Fraction
    a6: Fraction
    a8: Fraction
    a10: Fraction
    a14: Fraction

    @classmethod
    def of(cls, *values) -> "FamilyParams":
        if len(values) == 1 and not isinstance(values[0], (int, Fraction, str)):
            values = tuple(values[0])
        if len(values) != 7:
            raise ValueError("expected 7 parameters (a0, a2, a4, a6, a8, a10, a14)")
        return cls(*(as_rational(v) for v in values))

    def to_strings(self) -> list[str]:
        return [rational_to_str(v) for v in self]


@dataclass(frozen=True)
class WeierstrassModel:
    g2: UPoly
    g3: UPoly

    @property
    def delta(self) -> UPoly:
        return self.g2 ** 3 * 4 + self.g3 ** 2 * 27


def build_model(a) -> WeierstrassModel:
    a = FamilyParams.of(a)
    if not any(a):
        raise ValueError("the zero parameter vector has no model")
    g2 = UPoly([0, 0, 0, a.a8, a.a4, a.a0])
    g3 = UPoly([0, 0, 0, 0, a.a14, a.a10, a.a6, a.a2])
    return WeierstrassModel(g2, g3)


# ---------------------------------------------------------------------------
# Kodaira types


EULER = {"II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10}


def euler_number(kind: str) -> int:
    if kind in EULER:
        return EULER[kind]
    if kind.endswith("*"):
        return int(kind[1:-1]) + 6
    return int(kind[1:])


def kodaira_type(o2: int, o3: int, od: int) -> str:
    """Fiber type from the vanishing orders of (g2, g3, Delta) in characteristic 0."""
    if o2 >= 4 and o3 >= 6:
        raise NotK3Error("not a K3 Weierstrass point (non-minimal model)")
    if od == 0:
        return "I0"
    if o2 == 0 and o3 == 0:
        return f"I{od}"
    if o2 >= 1 and o3 == 1 and od == 2:
        return "II"
    if o2 == 1 and o3 >= 2 and od == 3:
        return "III"
    if o2 >= 2 and o3 == 2 and od == 4:
        return "IV"
    if o2 >= 2 and o3 >= 3 and od == 6:
        return "I0*"
    if o2 == 2 and o3 == 3 and od > 6:
        return f"I{od - 6}*"
    if o2 >= 3 and o3 == 4 and od == 8:
        return "IV*"
    if o2 == 3 and o3 >= 5 and od == 9:
        return "III*"
    if o2 >= 4 and o3 == 5 and od == 10:
        return "II*"
    raise ValueError(f"inconsistent vanishing orders {(o2, o3, od)}")


@dataclass(frozen=True)
class FiberReport:
    place: str
    factor: UPoly | None
    ord_g2: int
    ord_g3: int
    ord_delta: int
    kodaira: str
    euler: int
    count: int

    def to_json(self) -> dict:
        def o(n):
            return "inf" if n >= INFINITE_ORDER else n

        return {
            "place": self.place,
            "ords": [o(self.ord_g2), o(self.ord_g3), o(self.ord_delta)],
            "type": self.kodaira,
            "count": self.count,
            "euler": self.euler,
        }


@dataclass
class FiberConfiguration:
    reports: list = field(default_factory=list)

    @property
    def total_euler(self) -> int:
        return sum(r.euler * r.count for r in self.reports)

    def type_counts(self) -> Counter:
        c: Counter = Counter()
        for r in self.reports:
            c[r.kodaira] += r.count
        return c

    def to_json(self) -> dict:
        return {
            "fibers": [r.to_json() for r in self.reports],
            "types": dict(sorted(self.type_counts().items())),
            "total_euler": self.total_euler,
        }


def _multiplicity(g: UPoly, f: UPoly) -> int:
    if g.is_zero():
        return INFINITE_ORDER
    n = 0
    while True:
        q, r = g.divmod(f)
        if not r.is_zero():
            return n
        g, n = q, n + 1


def _infinity_orders(m: WeierstrassModel):
    def deficit(p, bound):
        return INFINITE_ORDER if p.is_zero() else bound - p.degree

    return deficit(m.g2, 8), deficit(m.g3, 12), deficit(m.delta, 24)


def classify_place(m: WeierstrassModel, place) -> FiberReport:
    """Classify the fiber over ``place``: the string ``"inf"`` or a squarefree factor of Delta.

    The factor must be refined so that all its roots share vanishing orders
    (as produced by :func:`singular_places`).
    """
    if isinstance(place, str):
        if place not in ("inf", "infinity", "∞"):
            raise ValueError(f"unknown place {place!r}")
        o2, o3, od = _infinity_orders(m)
        kind = kodaira_type(o2, o3, od)
        return FiberReport("inf", None, o2, o3, od, kind, euler_number(kind) if kind != "I0" else 0, 1)
    f = place.monic()
    o2, o3, od = _multiplicity(m.g2, f), _multiplicity(m.g3, f), _multiplicity(m.delta, f)
    kind = kodaira_type(o2, o3, od)
    return FiberReport(f.to_str("x"), f, o2, o3, od, kind, euler_number(kind) if kind != "I0" else 0, f.degree)


def _refine(pieces, h: UPoly):
    out = []
    for f in pieces:
        g = upoly_gcd(f, h)
        if g.degree <= 0 or g.degree == f.degree:
            out.append(f)
        else:
            out += [g.monic(), f.exact_div(g).monic()]
    return out


def singular_places(m: WeierstrassModel) -> list[UPoly]:
    """Monic squarefree factors of Delta grouping roots with equal vanishing orders."""
    delta = m.delta
    if delta.is_zero():
        raise NotK3Error("discriminant vanishes identically")
    pieces = []
    for f, _ in squarefree_decomposition(delta):
        if f.degree > 0:
            pieces.append(f)
    # separate x = 0 first, then split by the derivatives of g2 and g3
    pieces = _refine(pieces, UPoly.x())
    for g in (m.g2, m.g3):
        d = g
        for _ in range(6):
            if d.is_zero():
                break
            pieces = _refine(pieces, d)
            d = d.derivative()
    return sorted(pieces, key=lambda p: (p.degree, p.coeffs))


def classify_model(m: WeierstrassModel) -> FiberConfiguration:
    reports = [classify_place(m, f) for f in singular_places(m)]
    inf = classify_place(m, "inf")
    if inf.kodaira != "I0":
        reports.append(inf)
    return FiberConfiguration([r for r in reports if r.kodaira != "I0"])


def classify_all(a) -> FiberConfiguration:
    """Every singular fiber of the surface for ``a``; raises NotK3Error outside the K3 locus."""
    a = FamilyParams.of(a)
    if a.a0 == 0 and a.a2 == 0:
        raise NotK3Error("a0 = a2 = 0 gives a rational surface, not a K3 surface")
    config = classify_model(build_model(a))
    if config.total_euler != 24:
        raise NotK3Error(f"Euler number {config.total_euler} != 24")
    return config


def is_k3(a) -> bool:
    try:
        classify_all(a)
    except NotK3Error:
        return False
    return True


# ---------------------------------------------------------------------------
# degeneration polynomials


def depressed_parts(a):
    """(g2 / x^3, g3 / x^4) as coefficient lists of formal degree 2 and 3."""
    a = FamilyParams.of(a)
    return [a.a8, a.a4, a.a0], [a.a14, a.a10, a.a6, a.a2]


def formal_resultant(p, q) -> Fraction:
    """Sylvester determinant for coefficient lists (lowest first) of formal degrees len-1."""
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(p)):
            row[i + j] = Fraction(c)
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(q)):
            row[i + j] = Fraction(c)
        rows.append(row)
    return Fraction(bareiss_det(rows))


def degeneration_resultant(a) -> Fraction:
    """Resultant of g2/x^3 and g3/x^4 in formal degrees (2, 3); weighted of weight 28."""
    p, q = depressed_parts(a)
    if not any(p) or not any(q):
        raise ValueError("undefined resultant: a depressed factor vanishes")
    return formal_resultant(p, q)


def depressed_delta(a) -> UPoly:
    """Delta / x^8, formal degree 7."""
    return build_model(a).delta.shift_down(8)


def formal_discriminant(p: UPoly, n: int) -> Fraction:
    """Discriminant of ``p`` regarded as a polynomial of formal degree ``n``."""
    if p.degree == n:
        return discriminant(p)
    if p.degree == n - 1 and n - 1 >= 1:
        return p.lc ** 2 * discriminant(p)
    return Fraction(0)


# normalization of the weight-84 factor; the value at (1, ..., 1) is pinned in tests
WEIGHT84_SCALE = Fraction(1)
REFERENCE_POINT = (1, 1, 1, 1, 1, 1, 1)


def delta_discriminant(a) -> Fraction:
    return formal_discriminant(depressed_delta(a), 7)


def weight84_discriminant(a) -> Fraction:
    """The weight-84 factor: disc(Delta / x^8) / r(a)^3, times a fixed scale."""
    r = degeneration_resultant(a)
    if r == 0:
        raise ValueError("weight-84 factor undefined on the resultant locus (compute the discriminant directly)")
    return WEIGHT84_SCALE * delta_discriminant(a) / r ** 3


def quotient_surface_coefficients(a):
    """(a0 x^3 + a4 x^2 + a8 x,  a2 x^4 + a6 x^3 + a10 x^2 + a14 x) for the quotient surface."""
    a = FamilyParams.of(a)
    return UPoly([0, a.a8, a.a4, a.a0]), UPoly([0, a.a14, a.a10, a.a6, a.a2])


# ---------------------------------------------------------------------------
# sampling


def _rand_rational(rng: random.Random, bound=9) -> Fraction:
    while True:
        v = Fraction(rng.randint(-bound, bound), rng.choice((1, 1, 1, 2, 3)))
        if v:
            return v


def _distinct_root_count(p: UPoly) -> int:
    return sum(f.degree for f, _ in squarefree_decomposition(p))


def random_generic(rng: random.Random) -> FamilyParams:
    """A random point with a0 a14 r(a) d84(a) != 0."""
    while True:
        a = FamilyParams.of([_rand_rational(rng) for _ in range(7)])
        if degeneration_resultant(a) != 0 and delta_discriminant(a) != 0:
            return a


SAMPLE_KINDS = ("type-II", "type-I2", "a0-zero", "a14-zero")


def degenerate_sample(kind: str, seed: int = 0) -> FamilyParams:
    """A rational point on one of the four degeneration loci.

    Each point satisfies its locus equations by construction.  Candidates
    are redrawn until the rest of the discriminant is as generic as the
    locus allows (counted through squarefree decomposition).
    """
    if kind not in SAMPLE_KINDS:
        raise ValueError(f"unknown sample kind {kind!r}; choose from {SAMPLE_KINDS}")
    rng = random.Random(f"{kind}:{seed}")
    for _ in range(1000):
        if kind == "type-II":
            # common root x = 1 of g2/x^3 and g3/x^4
            a0, a4, a2, a6, a10 = (_rand_rational(rng) for _ in range(5))
            a = FamilyParams.of(a0, a2, a4, a6, -a0 - a4, a10, -a2 - a6 - a10)
        elif kind == "type-I2":
            # g2(1) = -3, g3(1) = 2, g2'(1) + g3'(1) = 0 with a0 = a2 = 1 forces a double root of Delta at 1
            a6 = _rand_rational(rng)
            a = FamilyParams.of(1, 1, 7, a6, -11, -11 - 2 * a6, 12 + a6)
        elif kind == "a0-zero":
            a = FamilyParams.of([0] + [_rand_rational(rng) for _ in range(6)])
        else:
            a = FamilyParams.of([_rand_rational(rng) for _ in range(6)] + [0])
        delta = build_model(a).delta
        if delta.is_zero():
            continue
        away = delta.shift_down(delta.order_at_zero())
        lead = (a.a2, a.a14) if kind == "a0-zero" else (a.a0, a.a8) if kind == "a14-zero" else (a.a0, a.a14)
        if 0 in lead:
            continue
        if kind != "type-II" and degeneration_resultant(a) == 0:
            continue
        if _distinct_root_count(away) == 6:
            return a
    raise RuntimeError(f"no generic {kind} sample found")


EXPECTED_CONFIGURATIONS = {
    "generic": {"III*": 1, "IV*": 1, "I1": 7},
    "type-II": {"III*": 1, "IV*": 1, "II": 1, "I1": 5},
    "type-I2": {"III*": 1, "IV*": 1, "I2": 1, "I1": 5},
    "a0-zero": {"II*": 1, "IV*": 1, "I1": 6},
    "a14-zero": {"III*": 2, "I1": 6},
}
