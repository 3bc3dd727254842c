from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from sympy.polys.subresultants_qq_zz import sylvester as sympy_sylvester

from k3forms.exactmath import (
    MPoly,
    UPoly,
    bareiss_det,
    discriminant,
    hermite_normal_form,
    integer_kernel,
    invariant_factors,
    matmul,
    rational_to_str,
    resultant,
    smith_normal_form,
    squarefree_decomposition,
    upoly_gcd,
)

X = UPoly.x()
SX = sp.symbols("x")

coeff = st.integers(-9, 9)
small_poly = st.lists(coeff, min_size=1, max_size=7).map(UPoly)
nonzero_poly = small_poly.filter(lambda p: not p.is_zero())
int_matrix = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m))
)


def to_sympy(p: UPoly):
    return sp.Poly(list(reversed([sp.Rational(c.numerator, c.denominator) for c in p.coeffs])) or [0], SX)


# --- gcd -------------------------------------------------------------------


def test_gcd_shared_linear_factor():
    assert upoly_gcd(X**2 - 1, X - 1) == X - 1


def test_gcd_with_zero_is_monic_input():
    p = UPoly([2, 0, 4])
    assert upoly_gcd(p, UPoly()) == p.monic()
    assert upoly_gcd(UPoly(), UPoly()).is_zero()


def test_gcd_of_septic_and_derivative_is_one():
    p = UPoly([27, 0, 0, 54, 0, 0, 27, 4])
    assert upoly_gcd(p, p.derivative()) == UPoly([1])
    # independent oracle
    assert sp.gcd(to_sympy(p), to_sympy(p.derivative())) == 1


# --- resultant and discriminant ------------------------------------------------


def test_resultant_of_linear_pair_is_standard_sylvester_value():
    assert resultant(X - 1, X - 2) == -1


def test_resultant_equal_inputs_vanishes():
    assert resultant(X**2 + 1, X**2 + 1) == 0


def test_resultant_quadratic_cubic():
    assert resultant(X**2 - 2, X**3 - X) == -2


def test_resultant_rejects_zero():
    with pytest.raises(ValueError, match="undefined resultant"):
        resultant(UPoly(), X)


def test_discriminant_examples():
    assert discriminant(X**2 - 1) == 4
    assert discriminant(X**3 - 3 * X + 2) == 0
    assert discriminant((X - 1) ** 2 * (X - 2)) == 0
    with pytest.raises(ValueError):
        discriminant(UPoly([5]))


@settings(max_examples=60, deadline=None)
@given(nonzero_poly, nonzero_poly)
def test_resultant_matches_independent_sylvester_determinant(p, q):
    # sympy's own resultant() drops a sign when deg p < deg q with odd product of degrees,
    # so the oracle is the determinant of sympy's Sylvester matrix
    if p.degree < 1 or q.degree < 1:
        return
    oracle = sympy_sylvester(to_sympy(p).as_expr(), to_sympy(q).as_expr(), SX, 1).det()
    assert resultant(p, q) == oracle


@settings(max_examples=40, deadline=None)
@given(nonzero_poly.filter(lambda p: p.degree >= 1), nonzero_poly.filter(lambda p: p.degree >= 1))
def test_resultant_antisymmetry(p, q):
    sign = -1 if (p.degree * q.degree) % 2 else 1
    assert resultant(p, q) == sign * resultant(q, p)


@settings(max_examples=60, deadline=None)
@given(nonzero_poly, nonzero_poly)
def test_resultant_vanishes_iff_common_factor(p, q):
    if p.degree < 1 or q.degree < 1:
        return
    assert (resultant(p, q) == 0) == (upoly_gcd(p, q).degree >= 1)


@settings(max_examples=60, deadline=None)
@given(small_poly.filter(lambda p: p.degree >= 1))
def test_discriminant_matches_sympy(p):
    assert discriminant(p) == sp.discriminant(to_sympy(p))


@settings(max_examples=40, deadline=None)
@given(
    st.lists(coeff, min_size=2, max_size=4).map(UPoly).filter(lambda p: p.degree >= 1),
    st.lists(coeff, min_size=2, max_size=4).map(UPoly).filter(lambda p: p.degree >= 1),
)
def test_discriminant_of_product(p, q):
    if upoly_gcd(p, q).degree >= 1:
        return
    assert discriminant(p * q) == discriminant(p) * discriminant(q) * resultant(p, q) ** 2


# --- squarefree decomposition -----------------------------------------------


def test_squarefree_constructed_input():
    got = squarefree_decomposition((X - 1) ** 2 * (X + 3))
    assert got == [(X + 3, 1), (X - 1, 2)]


def test_squarefree_identity_and_power():
    p = UPoly([1, 0, 2])
    assert squarefree_decomposition(p) == [(p.monic(), 1)]
    assert squarefree_decomposition(X**5) == [(X, 5)]


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.lists(coeff, min_size=2, max_size=3), st.integers(1, 3)), min_size=1, max_size=3))
def test_squarefree_reconstructs_input(parts):
    p = UPoly([1])
    for cs, m in parts:
        f = UPoly(cs)
        if f.is_zero():
            continue
        p = p * f**m
    dec = squarefree_decomposition(p)
    prod = UPoly([p.lc])
    for f, m in dec:
        assert f.lc == 1
        assert upoly_gcd(f, f.derivative()).degree == 0
        prod = prod * f**m
    assert prod == p
    for i, (f, _) in enumerate(dec):
        for g, _ in dec[i + 1 :]:
            assert upoly_gcd(f, g).degree == 0


# --- normal forms -------------------------------------------------------------


def test_snf_examples():
    assert invariant_factors([[2, 0], [0, -2]]) == [2, 2]
    assert invariant_factors([[-2, 1], [1, -2]]) == [1, 3]
    assert invariant_factors([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == [1, 1, 1]


def test_snf_does_not_cycle_on_indefinite_blocks():
    U, D, V = smith_normal_form([[0, 2], [2, -4]])
    assert [D[0][0], D[1][1]] == [2, 2]


@settings(max_examples=100, deadline=None)
@given(int_matrix)
def test_snf_properties(M):
    U, D, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    assert abs(bareiss_det(U)) == 1 and abs(bareiss_det(V)) == 1
    diag = [D[i][i] for i in range(min(len(M), len(M[0])))]
    for i in range(len(D)):
        for j in range(len(D[0])):
            if i != j:
                assert D[i][j] == 0
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert diag[: len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    oracle = sympy_snf(sp.Matrix(M), domain=sp.ZZ)
    assert sorted(abs(oracle[i, i]) for i in range(len(diag))) == sorted(diag)


def test_hnf_examples():
    assert hermite_normal_form([[2, 0], [0, 3]])[0] == [[2, 0], [0, 3]]
    H, _ = hermite_normal_form([[1, 2], [1, 2]])
    assert [r for r in H if any(r)] == [[1, 2]]
    assert hermite_normal_form([[2, 0], [3, 0]])[0] == [[1, 0], [0, 0]]


def _in_row_lattice(v, rows):
    # v is an integer combination of rows iff appending it does not change the HNF
    H1 = [r for r in hermite_normal_form(rows)[0] if any(r)]
    H2 = [r for r in hermite_normal_form(rows + [v])[0] if any(r)]
    return H1 == H2


@settings(max_examples=80, deadline=None)
@given(int_matrix)
def test_hnf_properties(M):
    H, T = hermite_normal_form(M)
    assert matmul(T, M) == H
    assert abs(bareiss_det(T)) == 1
    for r in M:
        assert _in_row_lattice(r, [h for h in H if any(h)] or [[0] * len(M[0])])
    for h in H:
        assert _in_row_lattice(h, M)


@settings(max_examples=60, deadline=None)
@given(int_matrix)
def test_integer_kernel_is_saturated_kernel(M):
    n = len(M[0])
    K = integer_kernel(M, n)
    for k in K:
        assert all(sum(a * b for a, b in zip(row, k)) == 0 for row in M)
    assert len(K) == n - sp.Matrix(M).rank()
    if K:
        assert all(d == 1 for d in invariant_factors(K))


# --- multivariate and printing ------------------------------------------------


def test_mpoly_arithmetic_and_evaluation():
    names = ("u", "v")
    u, v = MPoly.var(names, "u"), MPoly.var(names, "v")
    p = (u + v) ** 2 - u * u
    assert p.evaluate([2, 3]) == 21
    assert (p - p).is_zero()


def test_rational_strings():
    assert rational_to_str(Fraction(-3, 6)) == "-1/2"
    assert rational_to_str(Fraction(4)) == "4"
