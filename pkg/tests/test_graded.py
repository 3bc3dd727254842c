import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from k3forms import ellfib, graded
from k3forms.exactmath import MPoly

rational = st.fractions(min_value=-6, max_value=6, max_denominator=5)
nonzero = rational.filter(lambda x: x != 0)
params = st.tuples(*[rational] * 7)


# --- scaling action ---------------------------------------------------------------


def test_scale_action_examples():
    ones = (1,) * 7
    assert graded.scale_action(ones, 1) == ellfib.FamilyParams.of(ones)
    assert graded.scale_action(ones, 2) == ellfib.FamilyParams.of(1, 4, 16, 64, 256, 1024, 16384)
    with pytest.raises(ValueError):
        graded.scale_action(ones, 0)


@settings(max_examples=50, deadline=None)
@given(params, nonzero, nonzero)
def test_scale_action_is_a_group_action(a, lam, mu):
    assert graded.scale_action(graded.scale_action(a, lam), mu) == graded.scale_action(a, lam * mu)


# --- normal forms -------------------------------------------------------------------


def test_canonical_u_examples():
    assert graded.canonical_u((2, 4, 6, 8, 10, 12, 14)) == (2, 6, 8, 20, 24, 56)
    assert graded.canonical_u((1, 3, 5, 7, 9, 11, 13)) == (3, 5, 7, 9, 11, 13)
    with pytest.raises(ValueError, match="canonical_t"):
        graded.canonical_u((0, 1, 1, 1, 1, 1, 1))


def test_canonical_t_examples():
    assert graded.canonical_t((0, 1, 1, 1, 1, 1, 1)) == (1, 1, 1, 1, 1)
    assert graded.canonical_t((0, 2, 3, 5, 7, 11, 13)) == (3, 5, 14, 22, 52)
    with pytest.raises(ValueError):
        graded.canonical_t((1, 1, 1, 1, 1, 1, 1))
    with pytest.raises(ValueError):
        graded.canonical_t((0, 0, 1, 1, 1, 1, 1))


@settings(max_examples=60, deadline=None)
@given(params.filter(lambda a: a[0] != 0), nonzero)
def test_canonical_u_equivariance(a, lam):
    got = graded.canonical_u(graded.scale_action(a, lam))
    assert got == graded.scale_weighted(graded.canonical_u(a), (2, 4, 6, 8, 10, 14), lam)


@settings(max_examples=60, deadline=None)
@given(params.filter(lambda a: a[1] != 0).map(lambda a: (0,) + a[1:]), nonzero)
def test_canonical_t_equivariance(a, lam):
    got = graded.canonical_t(graded.scale_action(a, lam))
    assert got == graded.scale_weighted(graded.canonical_t(a), (4, 6, 10, 12, 18), lam)


@settings(max_examples=60, deadline=None)
@given(params.filter(lambda a: a[0] != 0))
def test_canonical_u_is_idempotent(a):
    u = graded.canonical_u(a)
    assert graded.canonical_u(graded.u_params(a)) == u


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_normal_form_preserves_fibers(seed):
    a = ellfib.random_generic(random.Random(seed))
    assert ellfib.classify_all(graded.u_params(a)).type_counts() == ellfib.classify_all(a).type_counts()


# --- Humbert polynomial ------------------------------------------------------------------


def test_humbert_examples():
    assert graded.humbert_M((0, 1, 0, 0, 0, 2, 0)) == 4
    assert graded.humbert_M((0,) * 7) == 0


def test_humbert_symbolic_and_numeric_agree():
    p = graded.humbert_polynomial()
    for a in [(1, 2, 3, 4, 5, 6, 7), (0, Fraction(1, 3), -2, 5, 1, 0, 9)]:
        assert p.poly.evaluate([Fraction(x) for x in a]) == graded.humbert_M(a)


@settings(max_examples=60, deadline=None)
@given(params, nonzero)
def test_humbert_has_weight_24(a, lam):
    assert graded.humbert_M(graded.scale_action(a, lam)) == lam**24 * graded.humbert_M(a)


def test_weighted_homogeneity():
    assert graded.is_weighted_homogeneous(graded.humbert_polynomial()) == 24
    names = graded.U_SYSTEM.names
    u = {n: MPoly.var(names, n) for n in names}
    assert graded.is_weighted_homogeneous(graded.WeightedPoly(u["u2"] * u["u4"] + u["u6"], graded.U_SYSTEM)) == 6
    assert graded.is_weighted_homogeneous(graded.WeightedPoly(u["u2"] + u["u4"], graded.U_SYSTEM)) is None


def test_weighted_poly_rejects_mismatched_variables():
    p = MPoly.var(("x",), "x")
    with pytest.raises(ValueError):
        graded.WeightedPoly(p, graded.U_SYSTEM)


# --- monomial counts -----------------------------------------------------------------


def brute_force_count(weights, k):
    ranges = [range(k // w + 1) for w in weights]
    return sum(1 for e in itertools.product(*ranges) if sum(x * w for x, w in zip(e, weights)) == k)


def test_hilbert_count_examples():
    u = graded.U_SYSTEM
    assert graded.hilbert_count(u, 0) == 1
    assert graded.hilbert_count(u, 2) == 1
    assert graded.hilbert_count(u, 1) == 0
    # u2^4, u2^2 u4, u4^2, u2 u6, u8
    assert graded.hilbert_count(u, 8) == 5
    with pytest.raises(ValueError):
        graded.hilbert_count(graded.A_SYSTEM, 4)
    with pytest.raises(ValueError):
        graded.hilbert_count(u, -1)


@pytest.mark.parametrize("system", [graded.U_SYSTEM, graded.T_SYSTEM], ids=["u", "t"])
@pytest.mark.parametrize("k", range(0, 41))
def test_hilbert_count_matches_enumeration(system, k):
    assert graded.hilbert_count(system, k) == brute_force_count(system.weights, k)


def test_hilbert_counts_nondecreasing_on_even_weights():
    counts = [graded.hilbert_count(graded.U_SYSTEM, k) for k in range(0, 101, 2)]
    assert all(x <= y for x, y in zip(counts, counts[1:]))


# --- reflection groups and weights ---------------------------------------------------


def test_reflection_table():
    by_number = {g.shephard_todd: g for g in graded.REFLECTION_GROUPS}
    assert by_number[34].degrees == (6, 12, 18, 24, 30, 42)
    assert by_number[23].degrees == (2, 6, 10) and by_number[23].kappa == 1
    assert by_number[31].degrees == (8, 12, 20, 24)
    assert [by_number[n].order2_reflections for n in (34, 33, 31, 23)] == [126, 45, 60, 15]


def test_canonical_degree_by_adjunction():
    assert sum(graded.U_SYSTEM.weights) == 44
    assert graded.canonical_degree_from_adjunction() == 98 == 14 + 84


def test_numerology_check_passes():
    out = graded.numerology_check()
    assert out.passed, out.failures
