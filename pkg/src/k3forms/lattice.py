"""Integral lattices given by Gram matrices.

Everything is exact: signatures come from congruence diagonalization over Q,
discriminant groups from the Smith normal form of the Gram matrix, and
sublattice operations from Hermite normal forms of coordinate matrices.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .exactmath import (
    bareiss_det,
    bilinear,
    block_diag,
    common_denominator,
    hermite_normal_form,
    integer_kernel,
    invariant_factors,
    matmul,
    matvec,
    rational_nullspace,
    rational_rank,
    scale_matrix,
    smith_normal_form,
    transpose,
)


class LatticeError(ValueError):
    pass


class Signature(NamedTuple):
    positive: int
    negative: int
    zero: int


def _as_gram(gram) -> tuple[tuple[int, ...], ...]:
    rows = tuple(tuple(int(x) for x in row) for row in gram)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise LatticeError("Gram matrix must be square")
    for i in range(n):
        for j in range(i):
            if rows[i][j] != rows[j][i]:
                raise LatticeError("Gram matrix must be symmetric")
    return rows


@dataclass(frozen=True)
class Lattice:
    gram: tuple
    label: str | None = field(default=None, compare=False)

    def __init__(self, gram, label=None):
        object.__setattr__(self, "gram", _as_gram(gram))
        object.__setattr__(self, "label", label)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return int(bareiss_det([list(r) for r in self.gram]))

    def matrix(self) -> list[list[int]]:
        return [list(r) for r in self.gram]

    def twist(self, n: int) -> "Lattice":
        label = f"{self.label}({n})" if self.label else None
        return Lattice(scale_matrix(self.gram, n), label)

    def __repr__(self):
        name = self.label or "Lattice"
        return f"<{name} rank={self.rank}>"


# ---------------------------------------------------------------------------
# constructors


def _dynkin_gram(n: int, edges) -> list[list[int]]:
    G = [[0] * n for _ in range(n)]
    for i in range(n):
        G[i][i] = 2
    for a, b in edges:
        G[a][b] = G[b][a] = -1
    return G


def e_type_edges(n: int) -> list[tuple[int, int]]:
    """Edges of E_n (n = 6, 7, 8), 0-based: a chain 0..n-2 with node n-1 hung on node 2."""
    if n not in (6, 7, 8):
        raise LatticeError(f"E_{n} is not defined")
    return [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]


def make_named(name: str, twist: int = 1) -> Lattice:
    """Standard lattice (root norm +2 before twisting) scaled by ``twist``.

    Names: ``U``, ``A<n>``, ``D<n>``, ``E6``, ``E7``, ``E8`` (underscores allowed).
    """
    if twist == 0:
        raise LatticeError("twist must be nonzero")
    key = name.replace("_", "").upper()
    if key == "U":
        G = [[0, 1], [1, 0]]
    elif m := re.fullmatch(r"A(\d+)", key):
        n = int(m.group(1))
        if n < 1:
            raise LatticeError("A_n needs n >= 1")
        G = _dynkin_gram(n, [(i, i + 1) for i in range(n - 1)])
    elif m := re.fullmatch(r"D(\d+)", key):
        n = int(m.group(1))
        if n < 4:
            raise LatticeError("D_n needs n >= 4")
        G = _dynkin_gram(n, [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)])
    elif m := re.fullmatch(r"E(\d+)", key):
        n = int(m.group(1))
        G = _dynkin_gram(n, e_type_edges(n))
    else:
        raise LatticeError(f"unknown lattice name {name!r}")
    label = name if twist == 1 else f"{name}({twist})"
    return Lattice(scale_matrix(G, twist), label)


def direct_sum(parts: Sequence[Lattice], label: str | None = None) -> Lattice:
    return Lattice(block_diag(*[p.matrix() for p in parts]), label)


# ---------------------------------------------------------------------------
# invariants


def congruence_diagonal(gram) -> list[Fraction]:
    """Diagonal of a rational congruence diagonalization P^T G P."""
    A = [[Fraction(x) for x in row] for row in gram]
    n = len(A)
    diag = []
    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if A[i][i] != 0), None)
        if piv is None:
            pair = next(
                ((i, j) for i in range(k, n) for j in range(i + 1, n) if A[i][j] != 0),
                None,
            )
            if pair is None:
                diag.extend([Fraction(0)] * (n - k))
                break
            i, j = pair
            # e_i <- e_i + e_j makes the diagonal entry 2 a_ij (a_ii = a_jj = 0)
            for r in range(n):
                A[r][i] += A[r][j]
            for c in range(n):
                A[i][c] += A[j][c]
            piv = i
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            for row in A:
                row[k], row[piv] = row[piv], row[k]
        p = A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / p
            if f:
                for c in range(k, n):
                    A[i][c] -= f * A[k][c]
                for r in range(k, n):
                    A[r][i] -= f * A[r][k]
        diag.append(p)
        k += 1
    return diag


def signature(L) -> Signature:
    gram = L.gram if isinstance(L, Lattice) else L
    d = congruence_diagonal(gram)
    return Signature(sum(x > 0 for x in d), sum(x < 0 for x in d), sum(x == 0 for x in d))


def is_even(L) -> bool:
    gram = L.gram if isinstance(L, Lattice) else L
    return all(gram[i][i] % 2 == 0 for i in range(len(gram)))


def content(gram) -> int:
    """gcd of all Gram entries (the scale of the lattice)."""
    from math import gcd

    g = 0
    for row in gram:
        for x in row:
            g = gcd(g, int(x))
    return g


@dataclass(frozen=True)
class DiscGroup:
    """Discriminant group L^v / L with its finite quadratic form.

    ``generators[i]`` is a vector in the coordinates of the lattice basis,
    of order ``invariant_factors[i]``.  ``qvalues`` are norms mod 2 for even
    lattices (mod 1 for odd ones), ``pairings`` the bilinear values mod 1.
    """

    invariant_factors: tuple
    generators: tuple
    qvalues: tuple
    pairings: tuple
    modulus: int

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out


def _mod(q: Fraction, m: int) -> Fraction:
    return q - m * (q.numerator // (q.denominator * m))


def disc_group(L: Lattice) -> DiscGroup:
    G = L.matrix()
    if L.rank and L.det == 0:
        raise LatticeError("degenerate lattice has no finite discriminant group")
    U, D, V = smith_normal_form(G)
    gens, factors = [], []
    for i in range(L.rank):
        d = D[i][i]
        if d > 1:
            factors.append(d)
            gens.append(tuple(Fraction(V[r][i], d) for r in range(L.rank)))
    modulus = 2 if is_even(L) else 1
    q = tuple(_mod(bilinear(G, g, g), modulus) for g in gens)
    b = tuple(tuple(_mod(bilinear(G, g, h), 1) for h in gens) for g in gens)
    return DiscGroup(tuple(factors), tuple(gens), q, b, modulus)


def element_order(L: Lattice, v) -> int:
    """Order of a dual vector ``v`` in L^v / L (raises if v is not in L^v)."""
    Gv = matvec(L.matrix(), [Fraction(x) for x in v])
    if any(x.denominator != 1 for x in Gv):
        raise LatticeError("vector is not in the dual lattice")
    return common_denominator([v])


def _subgroup_index_lattice(vectors, n):
    """Rational HNF basis of Z^n + span(vectors), plus its covolume."""
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rows += [[Fraction(x) for x in v] for v in vectors]
    d = common_denominator(rows)
    H, _ = hermite_normal_form([[int(x * d) for x in r] for r in rows])
    basis = [r for r in H if any(r)]
    covol = Fraction(abs(bareiss_det(basis)), d ** n)
    return basis, covol


def verify_disc_generators(L: Lattice, gens, claimed_orders) -> bool:
    gens = [[Fraction(x) for x in g] for g in gens]
    if len(gens) != len(claimed_orders):
        return False
    try:
        if any(element_order(L, g) != k for g, k in zip(gens, claimed_orders)):
            return False
    except LatticeError:
        return False
    _, covol = _subgroup_index_lattice(gens, L.rank)
    return 1 / covol == abs(L.det)


def disc_form_multiset(L: Lattice) -> tuple:
    """Sorted multiset of q-values over all elements of the discriminant group."""
    dg = disc_group(L)
    G = L.matrix()
    counts: Counter = Counter()
    for coeffs in itertools.product(*[range(d) for d in dg.invariant_factors]):
        v = [sum(c * g[i] for c, g in zip(coeffs, dg.generators)) for i in range(L.rank)]
        counts[_mod(bilinear(G, v, v), dg.modulus)] += 1
    return tuple(sorted(counts.items()))


def elementary_divisors(L: Lattice) -> list[int]:
    """Prime-power decomposition of the discriminant group, e.g. Z/6 -> [2, 3]."""
    out = []
    for d in invariant_factors(L.matrix()):
        p = 2
        while d > 1:
            if d % p == 0:
                q = 1
                while d % p == 0:
                    d //= p
                    q *= p
                out.append(q)
            p += 1
    return sorted(out)


class GenusFingerprint(NamedTuple):
    signature: Signature
    even: bool
    scale: int
    invariant_factors: tuple
    qvalues: tuple


def genus_invariants(L: Lattice) -> GenusFingerprint:
    """Isometry-invariant fingerprint; unequal fingerprints certify non-isometry."""
    if L.det == 0:
        raise LatticeError("fingerprint needs a nondegenerate lattice")
    return GenusFingerprint(
        signature(L),
        is_even(L),
        content(L.gram),
        tuple(invariant_factors(L.matrix())),
        disc_form_multiset(L),
    )


# ---------------------------------------------------------------------------
# sublattices of an ambient lattice


@dataclass(frozen=True)
class SpanInAmbient:
    ambient: Lattice
    basis: tuple

    def __init__(self, ambient: Lattice, basis):
        vecs = tuple(tuple(int(x) for x in v) for v in basis)
        if any(len(v) != ambient.rank for v in vecs):
            raise LatticeError("basis vectors must live in ambient coordinates")
        if vecs and rational_rank(vecs) != len(vecs):
            raise LatticeError("basis vectors are linearly dependent")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", vecs)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def lattice(self, label=None) -> Lattice:
        return Lattice(gram_of_span(self), label)


def gram_of_span(span, ambient_gram=None):
    """Matrix of pairwise ambient inner products.

    Accepts a :class:`SpanInAmbient` or a list of (possibly rational)
    vectors together with ``ambient_gram``.
    """
    if isinstance(span, SpanInAmbient):
        vectors, G = span.basis, span.ambient.matrix()
    else:
        vectors, G = span, ambient_gram
    Gv = [matvec(G, v) for v in vectors]
    out = [[sum(a * b for a, b in zip(u, gv)) for gv in Gv] for u in vectors]
    if all(isinstance(x, int) or getattr(x, "denominator", 1) == 1 for r in out for x in r):
        return [[int(x) for x in r] for r in out]
    return out


def orth_complement(span: SpanInAmbient) -> SpanInAmbient:
    """Saturated sublattice of vectors orthogonal to ``span``."""
    G = span.ambient.matrix()
    if span.ambient.det == 0:
        raise LatticeError("ambient lattice is degenerate")
    if not span.basis:
        return SpanInAmbient(span.ambient, [[int(i == j) for j in range(span.ambient.rank)] for i in range(span.ambient.rank)])
    constraints = matmul([list(v) for v in span.basis], G)
    return SpanInAmbient(span.ambient, integer_kernel(constraints, span.ambient.rank))


def is_primitive(span: SpanInAmbient) -> bool:
    if not span.basis:
        return True
    factors = invariant_factors([list(v) for v in span.basis])
    return len(factors) == span.rank and all(d == 1 for d in factors)


def saturation(span: SpanInAmbient) -> SpanInAmbient:
    """Smallest primitive sublattice containing ``span``."""
    n = span.ambient.rank
    perp = rational_nullspace([list(v) for v in span.basis], n)
    d = common_denominator(perp) if perp else 1
    eqs = [[int(x * d) for x in v] for v in perp]
    if not eqs:
        basis = [[int(i == j) for j in range(n)] for i in range(n)]
    else:
        basis = integer_kernel(eqs, n)
    return SpanInAmbient(span.ambient, basis)


def intersect_with_subspace(gens, subspace_basis) -> list[list[Fraction]]:
    """HNF basis of {v in Z-span(gens) : v in Q-span(subspace_basis)}."""
    gens = [[Fraction(x) for x in g] for g in gens]
    if not gens:
        return []
    n = len(gens[0])
    sub = [[Fraction(x) for x in w] for w in subspace_basis]
    if sub:
        normals = rational_nullspace(sub, n)
    else:
        normals = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    if normals:
        # coefficient vectors a with sum a_i <c, g_i> = 0 for every normal c
        cond = [[sum(c * x for c, x in zip(normal, g)) for g in gens] for normal in normals]
        d = common_denominator(cond)
        coeffs = integer_kernel([[int(x * d) for x in row] for row in cond], len(gens))
    else:
        coeffs = [[int(i == j) for j in range(len(gens))] for i in range(len(gens))]
    vecs = [[sum(a * g[k] for a, g in zip(c, gens)) for k in range(n)] for c in coeffs]
    if not vecs:
        return []
    d = common_denominator(vecs)
    H, _ = hermite_normal_form([[int(x * d) for x in v] for v in vecs])
    return [[Fraction(x, d) for x in row] for row in H if any(row)]


def verify_isometry(G1, G2, P) -> bool:
    """True iff P^T G1 P == G2 with P unimodular."""
    n = len(G1)
    if len(G2) != n or len(P) != n or any(len(r) != n for r in P):
        raise LatticeError("dimension mismatch")
    if abs(bareiss_det(P)) != 1:
        return False
    return matmul(transpose(P), matmul([list(r) for r in G1], P)) == [list(map(int, r)) for r in G2]
