"""Acceptance gate: one test per criterion, run at the stated tolerance and time limit."""

import random
import subprocess
import sys
import time
from collections import Counter
from fractions import Fraction

import pytest

from k3forms import ellfib, graded, k3cat
from k3forms.isometry import find_isometry
from k3forms.lattice import (
    Lattice,
    element_order,
    elementary_divisors,
    gram_of_span,
    is_primitive,
    orth_complement,
    signature,
    verify_disc_generators,
    verify_isometry,
)

SAMPLES = 20


def _witness(G1, G2):
    P = find_isometry(G1, G2)
    assert P is not None, "no witness found"
    assert verify_isometry(G1, G2, P)
    return P


@pytest.mark.criterion(1, "lattice catalog signatures, |det A0| = 6, discriminant group and its generators")
def test_criterion_01_lattice_catalog():
    start = time.perf_counter()
    for j in range(4):
        assert tuple(signature(k3cat.catalog(f"A{j}"))) == (2, 5 - j, 0)
    A0 = k3cat.catalog("A0")
    assert abs(A0.det) == 6
    assert elementary_divisors(A0) == [2, 3]
    gens = k3cat.a0_disc_generators()
    assert [element_order(A0, y) for y in gens] == [3, 3, 2]
    assert verify_disc_generators(A0, gens, [3, 3, 2])
    assert time.perf_counter() - start < 1.0


@pytest.mark.criterion(2, "complement of the embedded M0 is isometric to A0 with a unimodular witness")
def test_criterion_02_complement_identity():
    start = time.perf_counter()
    span = k3cat.embed_M0()
    comp = orth_complement(span)
    CG = gram_of_span(comp)
    assert abs(span.lattice().det) == 6
    assert abs(Lattice(CG).det) == 6
    _witness(CG, k3cat.catalog("A0").matrix())
    assert time.perf_counter() - start < 30.0


@pytest.mark.criterion(3, "generic fibre configuration III* + IV* + 7 I1 on 20 seeded points")
def test_criterion_03_generic_fibers():
    start = time.perf_counter()
    rng = random.Random(0)
    for _ in range(SAMPLES):
        config = ellfib.classify_all(ellfib.random_generic(rng))
        assert config.type_counts() == Counter({"III*": 1, "IV*": 1, "I1": 7})
        assert config.total_euler == 24
    assert time.perf_counter() - start < 5.0


@pytest.mark.criterion(4, "the four degeneration samples give their fibre configurations")
def test_criterion_04_degeneration_loci():
    expected = {
        "type-II": {"III*": 1, "IV*": 1, "II": 1, "I1": 5},
        "type-I2": {"III*": 1, "IV*": 1, "I2": 1, "I1": 5},
        "a0-zero": {"II*": 1, "IV*": 1, "I1": 6},
        "a14-zero": {"III*": 2, "I1": 6},
    }
    for kind, want in expected.items():
        config = ellfib.classify_all(ellfib.degenerate_sample(kind, 0))
        assert dict(config.type_counts()) == want, kind
        assert config.total_euler == 24, kind


@pytest.mark.criterion(5, "weight-84 factor: homogeneity, constant factorization ratio, vanishing on I2 samples")
def test_criterion_05_weight84_contract():
    start = time.perf_counter()
    rng = random.Random(0)
    ratios = set()
    for _ in range(SAMPLES):
        a = ellfib.random_generic(rng)
        lam = rng.choice((Fraction(2), Fraction(3), Fraction(5, 7)))
        d = ellfib.weight84_discriminant(a)
        assert ellfib.weight84_discriminant(graded.scale_action(a, lam)) == lam**84 * d
        ratios.add(ellfib.delta_discriminant(a) / (ellfib.degeneration_resultant(a) ** 3 * d))
    assert len(ratios) == 1
    for seed in range(3):
        assert ellfib.weight84_discriminant(ellfib.degenerate_sample("type-I2", seed)) == 0
    assert time.perf_counter() - start < 30.0


@pytest.mark.criterion(6, "rank-7 span is U(2)^2 + the 3x3 block, primitive, with the three sub-spans")
def test_criterion_06_transcendental_span():
    b = k3cat.default_basis()
    vecs = k3cat.kummer_vectors(b)
    target = k3cat.catalog("B0").matrix()
    assert target == Lattice(
        [
            [0, 2, 0, 0, 0, 0, 0],
            [2, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 2, 0, 0, 0],
            [0, 0, 2, 0, 0, 0, 0],
            [0, 0, 0, 0, -2, 0, 1],
            [0, 0, 0, 0, 0, -2, 1],
            [0, 0, 0, 0, 1, 1, -4],
        ]
    ).matrix()
    _witness(b.gram(vecs["full"]), target)
    assert is_primitive(b.span(vecs["full"]))
    for name in ("B1", "B2", "B1'"):
        _witness(gram_of_span(b.span(vecs[name])), k3cat.catalog(name).matrix())


@pytest.mark.criterion(7, "halved diagonal Gram matches entrywise and its doubling is A2(-1) + A1(-1)")
def test_criterion_07_halved_diagonal():
    b = k3cat.default_basis()
    H = b.gram(k3cat.halved_vectors(b))
    half = Fraction(1, 2)
    assert H == [[-1, -1, half], [-1, -2, half], [half, half, -1]]
    doubled = [[int(2 * x) for x in row] for row in H]
    _witness(doubled, [[-2, 1, 0], [1, -2, 0], [0, 0, -2]])


@pytest.mark.criterion(8, "B_j = A_j(2) for j = 1, 2, 3 and B0 differs from A0(2) by determinant")
def test_criterion_08_twists():
    for j in (1, 2, 3):
        _witness(k3cat.catalog(f"B{j}").matrix(), k3cat.catalog(f"A{j}").twist(2).matrix())
    assert abs(k3cat.catalog("B0").det) == 192
    assert abs(k3cat.catalog("A0").twist(2).det) == 768


@pytest.mark.criterion(9, "weight and reflection-group numerology")
def test_criterion_09_numerology():
    st34 = next(g for g in graded.REFLECTION_GROUPS if g.shephard_todd == 34)
    assert tuple(3 * w for w in (2, 4, 6, 8, 10, 14)) == st34.degrees == (6, 12, 18, 24, 30, 42)
    assert 98 == 14 + 84 == graded.canonical_degree_from_adjunction()
    assert sum(graded.U_SYSTEM.weights) == 44
    assert 49 == 7 + 42 and 2 * 49 == 98
    assert st34.order2_reflections == 126 == 3 * 42
    for g in graded.REFLECTION_GROUPS:
        assert g.degrees == tuple(g.kappa * w for w in g.modular_weights)
    assert graded.numerology_check().passed


@pytest.mark.criterion(10, "equivariance of the normal forms, Humbert weight 24 and fibre types on 20 samples")
def test_criterion_10_equivariance():
    rng = random.Random(0)
    for _ in range(SAMPLES):
        a = ellfib.random_generic(rng)
        lam = Fraction(rng.choice((-3, -2, 2, 3, 5)), rng.choice((1, 2, 7)))
        b = graded.scale_action(a, lam)
        assert graded.canonical_u(b) == graded.scale_weighted(graded.canonical_u(a), graded.U_SYSTEM.weights, lam)
        t_a = ellfib.FamilyParams.of((0,) + tuple(a[1:]))
        t_b = graded.scale_action(t_a, lam)
        assert graded.canonical_t(t_b) == graded.scale_weighted(graded.canonical_t(t_a), graded.T_SYSTEM.weights, lam)
        assert graded.humbert_M(b) == lam**24 * graded.humbert_M(a)
        assert ellfib.classify_all(b).type_counts() == ellfib.classify_all(a).type_counts()


@pytest.mark.criterion(11, "verify all exits 0 within 120 s and the tampered run exits 1")
def test_criterion_11_end_to_end():
    start = time.perf_counter()
    ok = subprocess.run([sys.executable, "-m", "k3forms", "verify", "all"], capture_output=True, text=True, timeout=300)
    elapsed = time.perf_counter() - start
    assert ok.returncode == 0, ok.stderr
    assert elapsed < 120.0
    bad = subprocess.run(
        [sys.executable, "-m", "k3forms", "verify", "all", "--tamper", "B0:4:4:-2"],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert bad.returncode == 1
    assert "kummer_transcendental" in bad.stderr
