"""The full verification suite run by ``k3forms verify all``."""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import ellfib, graded, k3cat
from .outcome import Outcome

SAMPLES = 20


@dataclass(frozen=True)
class Check:
    id: str
    anchor: str
    run: Callable[[int], Outcome]


def _lattice_catalog(seed):
    return k3cat.check_catalog()


def _disc_generators(seed):
    return k3cat.discriminant_generators_check()


def _complement(seed):
    return k3cat.complement_check()


def _kummer(seed):
    return k3cat.verify_kummer_lattice()


def _nikulin(seed):
    return k3cat.nikulin_quotient_check()


def _twists(seed):
    return k3cat.verify_twist_identities()


def _fibers_generic(seed):
    out = Outcome()
    rng = random.Random(seed)
    want = ellfib.EXPECTED_CONFIGURATIONS["generic"]
    for i in range(SAMPLES):
        a = ellfib.random_generic(rng)
        config = ellfib.classify_all(a)
        got = dict(config.type_counts())
        out.require(f"sample {i} types", got == want, f"{a.to_strings()} -> {got}")
        out.require(f"sample {i} Euler 24", config.total_euler == 24)
        place_types = {r.place: r.kodaira for r in config.reports}
        out.require(f"sample {i} IV* over 0, III* over infinity", place_types.get("x") == "IV*" and place_types.get("inf") == "III*")
    return out


def _fibers_degenerations(seed):
    out = Outcome()
    for kind in ellfib.SAMPLE_KINDS:
        a = ellfib.degenerate_sample(kind, seed)
        config = ellfib.classify_all(a)
        got = dict(config.type_counts())
        out.require(f"{kind} types", got == ellfib.EXPECTED_CONFIGURATIONS[kind], f"{a.to_strings()} -> {got}")
        out.require(f"{kind} Euler 24", config.total_euler == 24)
    out.require("rational surface rejected", not ellfib.is_k3((0, 0, 1, 0, 0, 0, 0)))
    out.require("all-ones point is K3", ellfib.is_k3(ellfib.REFERENCE_POINT))
    q2, q3 = ellfib.quotient_surface_coefficients((1, 2, 3, 4, 5, 6, 7))
    out.require("quotient surface coefficients", q2.coeffs == (0, 5, 3, 1) and q3.coeffs == (0, 7, 6, 4, 2))
    return out


def _degeneration_polynomials(seed):
    out = Outcome()
    rng = random.Random(seed + 1)
    ratios = set()
    for i in range(SAMPLES):
        a = ellfib.random_generic(rng)
        lam = rng.choice((Fraction(2), Fraction(3), Fraction(5, 7), Fraction(-1, 2)))
        b = graded.scale_action(a, lam)
        r_a, r_b = ellfib.degeneration_resultant(a), ellfib.degeneration_resultant(b)
        d_a, d_b = ellfib.weight84_discriminant(a), ellfib.weight84_discriminant(b)
        out.require(f"pair {i} weight 84", d_b == lam ** 84 * d_a)
        out.require(f"pair {i} weight 28", r_b == lam ** 28 * r_a)
        ratios.add(ellfib.delta_discriminant(a) / (r_a ** 3 * d_a))
    out.require("disc / (r^3 d84) constant", len(ratios) == 1, str(sorted(ratios)))
    for s in range(3):
        a = ellfib.degenerate_sample("type-I2", seed + s)
        out.require(f"d84 vanishes on I2 sample {s}", ellfib.weight84_discriminant(a) == 0)
    a = ellfib.degenerate_sample("type-II", seed)
    out.require("r vanishes on type-II sample", ellfib.degeneration_resultant(a) == 0)
    out.require("r(1,0,0,0,0,0,1) = 1", ellfib.degeneration_resultant((1, 0, 0, 0, 0, 0, 1)) == 1)
    return out


def _graded_equivariance(seed):
    out = Outcome()
    rng = random.Random(seed + 2)
    u_w, t_w = graded.U_SYSTEM.weights, graded.T_SYSTEM.weights
    for i in range(SAMPLES):
        a = ellfib.random_generic(rng)
        lam = Fraction(rng.choice((-3, -2, 2, 3, 5)), rng.choice((1, 2, 7)))
        b = graded.scale_action(a, lam)
        out.require(f"u {i}", graded.canonical_u(b) == graded.scale_weighted(graded.canonical_u(a), u_w, lam))
        t_a = ellfib.FamilyParams.of((0,) + tuple(a[1:]))
        t_b = graded.scale_action(t_a, lam)
        out.require(f"t {i}", graded.canonical_t(t_b) == graded.scale_weighted(graded.canonical_t(t_a), t_w, lam))
        out.require(f"Humbert {i}", graded.humbert_M(b) == lam ** 24 * graded.humbert_M(a))
        types_a = ellfib.classify_all(a).type_counts()
        out.require(f"scaling keeps fibers {i}", ellfib.classify_all(b).type_counts() == types_a)
        out.require(f"normal form keeps fibers {i}", ellfib.classify_all(graded.u_params(a)).type_counts() == types_a)
    out.require("Humbert weight 24", graded.is_weighted_homogeneous(graded.humbert_polynomial()) == 24)
    counts = [graded.hilbert_count(graded.U_SYSTEM, k) for k in range(0, 61, 2)]
    out.require("u-system counts nondecreasing", all(x <= y for x, y in zip(counts, counts[1:])))
    out.require("odd weights empty", all(graded.hilbert_count(graded.U_SYSTEM, k) == 0 for k in range(1, 40, 2)))
    return out


def _numerology(seed):
    return graded.numerology_check()


CHECKS = (
    Check("lattice_catalog", "even lattice catalog A_j, M_j, B_j and the K3 lattice (signatures, parity, determinants)", _lattice_catalog),
    Check("discriminant_generators", "explicit generators of the discriminant group of A", _disc_generators),
    Check("m0_complement", "U+E7(-1)+E6(-1) embeds primitively in the K3 lattice with complement A", _complement),
    Check("kummer_transcendental", "transcendental lattice of the generic double-cover family and its B_1, B_2, B_1' sublattices", _kummer),
    Check("nikulin_quotient", "Lambda(2) from the halved diagonal E8 intersection is isometric to A", _nikulin),
    Check("twist_identities", "B_j = A_j(2) for j = 1, 2, 3 while B_0 is not A_0(2)", _twists),
    Check("fibers_generic", "generic singular fibres III* + IV* + 7 I_1", _fibers_generic),
    Check("fibers_degenerations", "degeneration loci (type II, I_2, a0 = 0, a14 = 0) and the quotient surface equation", _fibers_degenerations),
    Check("degeneration_polynomials", "resultant r(a) and the weight-84 discriminant factor d_84(a)", _degeneration_polynomials),
    Check("graded_equivariance", "weighted normal forms, Humbert polynomial weight and ring generator counts", _graded_equivariance),
    Check("numerology", "modular weights, reflection group degrees and the weight 98 = 14 + 84 split", _numerology),
)

CHECK_IDS = tuple(c.id for c in CHECKS)

# every computational item the suite is meant to cover, mapped to the checks that do so
IN_SCOPE_ITEMS = {
    "lattice catalogs A_j and B_j": ("lattice_catalog", "twist_identities"),
    "discriminant group generators of A": ("discriminant_generators",),
    "Weierstrass family and generic fibre configuration": ("fibers_generic",),
    "resultant r(a) and weight-84 polynomial": ("degeneration_polynomials",),
    "degeneration loci": ("fibers_degenerations", "degeneration_polynomials"),
    "sublattice M, its complement and primitivity": ("m0_complement",),
    "canonical forms for a0 != 0 and a0 = 0": ("graded_equivariance",),
    "double cover and quotient surface": ("fibers_degenerations", "kummer_transcendental"),
    "Humbert polynomial": ("graded_equivariance",),
    "subfamily tables": ("lattice_catalog", "kummer_transcendental", "twist_identities"),
    "ring generators and weights": ("graded_equivariance", "numerology"),
    "weight 98 and the 7 + 42 factorization": ("numerology",),
    "reflection counts": ("numerology",),
    "transcendental lattice of the double-cover family": ("kummer_transcendental",),
    "Lambda(2) isometric to A": ("nikulin_quotient",),
}


def run_checks(seed: int = 0, only=None) -> list[dict]:
    if only is not None:
        unknown = [o for o in only if o not in CHECK_IDS]
        if unknown:
            raise KeyError(f"unknown check id(s): {', '.join(unknown)}")
    results = []
    for check in CHECKS:
        if only is not None and check.id not in only:
            continue
        start = time.perf_counter()
        try:
            outcome = check.run(seed)
            status = "pass" if outcome.passed else "fail"
            detail = outcome.summary()
        except Exception as exc:  # a crashing check is a failing check
            status, detail = "fail", f"{type(exc).__name__}: {exc}"
        results.append(
            {
                "id": check.id,
                "anchor": check.anchor,
                "status": status,
                "detail": detail,
                "elapsed_ms": int(1000 * (time.perf_counter() - start)),
            }
        )
    return results


def summarize(results) -> dict:
    c = Counter(r["status"] for r in results)
    return {"pass": c["pass"], "fail": c["fail"], "skipped": c["skipped"], "total": len(results)}
