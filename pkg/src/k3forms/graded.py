"""Weight bookkeeping for the parameter space and the ring of modular forms.

The multiplicative group acts on parameters by ``a_k -> lam^k a_k``.  The
normal forms below are weighted-homogeneous coordinates on the quotient;
``hilbert_count`` counts monomials of a given weight, and the reflection
group table records the degree data the weights are compared against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .ellfib import WEIGHTS, FamilyParams
from .exactmath import MPoly, as_rational
from .outcome import Outcome


class WeightSystem(NamedTuple):
    names: tuple
    weights: tuple


A_SYSTEM = WeightSystem(("a0", "a2", "a4", "a6", "a8", "a10", "a14"), WEIGHTS)
U_SYSTEM = WeightSystem(("u2", "u4", "u6", "u8", "u10", "u14"), (2, 4, 6, 8, 10, 14))
T_SYSTEM = WeightSystem(("t4", "t6", "t10", "t12", "t18"), (4, 6, 10, 12, 18))


@dataclass(frozen=True)
class WeightedPoly:
    poly: MPoly
    system: WeightSystem

    def __post_init__(self):
        if tuple(self.poly.names) != tuple(self.system.names):
            raise ValueError("polynomial variables do not match the weight system")


def monomial_weight(exps, weights) -> int:
    return sum(e * w for e, w in zip(exps, weights))


def is_weighted_homogeneous(p: WeightedPoly) -> int | None:
    """Common weight of all monomials, or None (also None for the zero polynomial)."""
    ws = {monomial_weight(e, p.system.weights) for e in p.poly.terms}
    return ws.pop() if len(ws) == 1 else None


def scale_action(a, lam) -> FamilyParams:
    a = FamilyParams.of(a)
    lam = as_rational(lam)
    if lam == 0:
        raise ValueError("the scaling factor must be nonzero")
    return FamilyParams.of([lam ** w * x for w, x in zip(WEIGHTS, a)])


def scale_weighted(values, weights, lam) -> tuple:
    lam = as_rational(lam)
    return tuple(lam ** w * as_rational(v) for w, v in zip(weights, values))


def canonical_u(a) -> tuple:
    """Normal form for a0 != 0; weights (2, 4, 6, 8, 10, 14)."""
    a = FamilyParams.of(a)
    if a.a0 == 0:
        raise ValueError("a0 = 0: use canonical_t")
    return (a.a2 / a.a0, a.a4, a.a6, a.a0 * a.a8, a.a0 * a.a10, a.a0 ** 2 * a.a14)


def canonical_t(a) -> tuple:
    """Normal form on a0 = 0, a2 != 0; weights (4, 6, 10, 12, 18)."""
    a = FamilyParams.of(a)
    if a.a0 != 0 or a.a2 == 0:
        raise ValueError("canonical_t needs a0 = 0 and a2 != 0")
    return (a.a4, a.a6, a.a2 * a.a8, a.a2 * a.a10, a.a2 ** 2 * a.a14)


def u_params(a) -> FamilyParams:
    """The parameter point (1, u2, u4, ...) carrying the same surface as ``a``."""
    return FamilyParams.of((1,) + canonical_u(a))


def humbert_polynomial() -> WeightedPoly:
    v = {n: MPoly.var(A_SYSTEM.names, n) for n in A_SYSTEM.names}
    first = v["a10"] * v["a2"] + Fraction(1, 27) * v["a4"] ** 3 - Fraction(1, 4) * v["a6"] ** 2
    second = v["a4"] * v["a6"] + 6 * v["a2"] * v["a8"]
    return WeightedPoly(first ** 2 + Fraction(1, 27) * v["a4"] * second ** 2, A_SYSTEM)


def humbert_M(a) -> Fraction:
    a = FamilyParams.of(a)
    first = a.a10 * a.a2 + a.a4 ** 3 / 27 - a.a6 ** 2 / 4
    second = a.a4 * a.a6 + 6 * a.a2 * a.a8
    return first ** 2 + a.a4 * second ** 2 / 27


def hilbert_count(ws: WeightSystem, k: int) -> int:
    """Number of monomials of weight exactly ``k``."""
    if k < 0:
        raise ValueError("weight must be non-negative")
    if any(w <= 0 for w in ws.weights):
        raise ValueError("every weight must be positive for a finite count")
    counts = [1] + [0] * k
    for w in ws.weights:
        for j in range(w, k + 1):
            counts[j] += counts[j - w]
    return counts[k]


# ---------------------------------------------------------------------------
# reflection groups


@dataclass(frozen=True)
class ReflectionGroupRecord:
    shephard_todd: int
    rank: int
    degrees: tuple
    order2_reflections: int
    kappa: int
    modular_weights: tuple
    discriminant_weight: int


REFLECTION_GROUPS = (
    ReflectionGroupRecord(34, 6, (6, 12, 18, 24, 30, 42), 126, 3, (2, 4, 6, 8, 10, 14), 42),
    ReflectionGroupRecord(33, 5, (4, 6, 10, 12, 18), 45, 1, (4, 6, 10, 12, 18), 45),
    ReflectionGroupRecord(31, 4, (8, 12, 20, 24), 60, 2, (4, 6, 10, 12), 30),
    ReflectionGroupRecord(23, 3, (2, 6, 10), 15, 1, (2, 6, 10), 15),
)

# weights of the objects entering the discriminant factorization
U14_WEIGHT = 14
D84_WEIGHT = 84
ROOT_U14_WEIGHT = 7
ROOT_D84_WEIGHT = 42
DISCRIMINANT_WEIGHT = 98
QUADRIC_AMBIENT_DIM = 6


def canonical_degree_from_adjunction(weights=U_SYSTEM.weights) -> int:
    """Solve 5 = -sum(w) + d/2, with 5 = (ambient dim + 1) - 2 from adjunction on a quadric."""
    twist = (QUADRIC_AMBIENT_DIM + 1) - 2
    return 2 * (twist + sum(weights))


def numerology_check() -> Outcome:
    out = Outcome()
    for g in REFLECTION_GROUPS:
        tag = f"ST{g.shephard_todd}"
        out.require(f"{tag} degrees = kappa * weights", g.degrees == tuple(g.kappa * w for w in g.modular_weights))
        out.require(f"{tag} rank", len(g.degrees) == g.rank)
        out.require(f"{tag} reflections = sum(d - 1)", g.order2_reflections == sum(d - 1 for d in g.degrees))
        out.require(
            f"{tag} reflections = kappa * discriminant weight",
            g.order2_reflections == g.kappa * g.discriminant_weight,
        )
    top = REFLECTION_GROUPS[0]
    out.require("3 * (2,4,6,8,10,14) = ST34 degrees", tuple(3 * w for w in U_SYSTEM.weights) == top.degrees)
    out.require("98 = 14 + 84", DISCRIMINANT_WEIGHT == U14_WEIGHT + D84_WEIGHT)
    out.require("44 = sum of u-weights", sum(U_SYSTEM.weights) == 44)
    out.require("7 - 2 = 5", (QUADRIC_AMBIENT_DIM + 1) - 2 == 5)
    out.require("adjunction gives 98", canonical_degree_from_adjunction() == DISCRIMINANT_WEIGHT)
    out.require("49 = 7 + 42", ROOT_U14_WEIGHT + ROOT_D84_WEIGHT == 49)
    out.require("2 * 49 = 98", 2 * (ROOT_U14_WEIGHT + ROOT_D84_WEIGHT) == DISCRIMINANT_WEIGHT)
    out.require("square roots halve weights", 2 * ROOT_U14_WEIGHT == U14_WEIGHT and 2 * ROOT_D84_WEIGHT == D84_WEIGHT)
    out.require("126 = 3 * 42", top.order2_reflections == 3 * 42)
    out.require("60 = 2 * 30", REFLECTION_GROUPS[2].order2_reflections == 2 * 30)
    out.require("Humbert polynomial has weight 24", is_weighted_homogeneous(humbert_polynomial()) == 24)
    return out
