"""Isometry search between integral lattices.

This is a semi-decision procedure.  Definite lattices are handled by
backtracking over short vectors, pruned by an inner-product profile that is
invariant under isometries.  Indefinite lattices (even or odd) are reduced by
splitting off hyperbolic planes ``[[0, k], [k, 0]]`` (k = 1 or 2) and
recursing on the orthogonal complements.  Anything else falls back to a
bounded coordinate search.

``find_isometry`` returns a witness, raises :class:`NotIsometric` when an
invariant differs, and returns ``None`` when the budget runs out.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from fractions import Fraction
from math import gcd

from .exactmath import (
    bareiss_det,
    block_diag,
    identity,
    integer_inverse,
    integer_kernel,
    matmul,
    matvec,
    transpose,
    xgcd,
)
from .lattice import LatticeError, content, disc_form_multiset, invariant_factors, is_even, signature, Lattice

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**6


class NotIsometric(LatticeError):
    """Raised when an isometry invariant differs between two lattices."""


class BudgetExceeded(Exception):
    pass


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def tick(self, n=1):
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded


def _gram(G):
    if isinstance(G, Lattice):
        return G.matrix()
    return [[int(x) for x in row] for row in G]


def _congruent(G, P):
    return matmul(transpose(P), matmul(G, P))


# ---------------------------------------------------------------------------
# definite lattices


def gram_schmidt(G):
    """Rational Gram-Schmidt data (mu, squared norms) from a Gram matrix."""
    n = len(G)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = Fraction(G[i][j]) - sum(mu[j][k] * mu[i][k] * bstar[k] for k in range(j))
            mu[i][j] = s / bstar[j]
        bstar[i] = Fraction(G[i][i]) - sum(mu[i][k] ** 2 * bstar[k] for k in range(i))
        mu[i][i] = Fraction(1)
    return mu, bstar


def lll_reduce(G, delta=Fraction(3, 4)):
    """LLL on a positive definite Gram matrix; returns (P, P^T G P)."""
    n = len(G)
    P = identity(n)
    G = [list(r) for r in G]
    if n < 2:
        return P, G

    def col_op(k, j, q):
        # b_k <- b_k - q b_j
        for row in P:
            row[k] -= q * row[j]
        for r in range(n):
            G[r][k] -= q * G[r][j]
        for c in range(n):
            G[k][c] -= q * G[j][c]

    def swap(a, b):
        for row in P:
            row[a], row[b] = row[b], row[a]
        G[a], G[b] = G[b], G[a]
        for row in G:
            row[a], row[b] = row[b], row[a]

    k = 1
    while k < n:
        mu, bstar = gram_schmidt(G)
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                col_op(k, j, q)
                mu, bstar = gram_schmidt(G)
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            swap(k, k - 1)
            k = max(k - 1, 1)
    return P, G


def short_vectors(G, max_norm, budget=None):
    """All nonzero x with x^T G x <= max_norm for positive definite G (Fincke-Pohst)."""
    n = len(G)
    mu, bstar = gram_schmidt(G)
    out = []
    x = [0] * n
    bound = Fraction(max_norm)

    def centre(i):
        return -sum(mu[j][i] * x[j] for j in range(i + 1, n))

    def rec(i, remaining):
        if budget is not None:
            budget.tick()
        if i < 0:
            if any(x):
                out.append(list(x))
            return
        c = centre(i)
        r2 = remaining / bstar[i]
        half = math.isqrt(int(r2) + 1) + 1
        base = math.floor(c)
        for xi in range(base - half, base + half + 2):
            t = (xi - c) ** 2
            if t <= r2:
                x[i] = xi
                rec(i - 1, remaining - t * bstar[i])
        x[i] = 0

    rec(n - 1, bound)
    return out


def _profile(v, G, pool):
    Gv = matvec(G, v)
    return Counter((norm, sum(a * b for a, b in zip(w, Gv))) for w, norm in pool)


def _definite_search(G1, G2, budget):
    if G1 == G2:
        return identity(len(G1))
    n = len(G1)
    if signature(G1).negative == n:
        G1 = [[-x for x in r] for r in G1]
        G2 = [[-x for x in r] for r in G2]
    P1, R1 = lll_reduce(G1)
    P2, R2 = lll_reduce(G2)
    norms = sorted({R2[i][i] for i in range(n)})
    top = norms[-1]
    pool1 = [(v, sum(a * b for a, b in zip(v, matvec(R1, v)))) for v in short_vectors(R1, top, budget)]
    pool1 = [(v, q) for v, q in pool1 if q in norms]
    pool2 = [(v, sum(a * b for a, b in zip(v, matvec(R2, v)))) for v in short_vectors(R2, top, budget)]
    pool2 = [(v, q) for v, q in pool2 if q in norms]
    budget.tick(len(pool1) * len(pool1) // 64 + 1)

    target_profiles = []
    for i in range(n):
        e = [int(i == j) for j in range(n)]
        target_profiles.append(_profile(e, R2, pool2))
    by_norm = {}
    for v, q in pool1:
        by_norm.setdefault(q, []).append(v)
    profile_cache = {}
    candidates = []
    for i in range(n):
        cands = []
        for v in by_norm.get(R2[i][i], []):
            key = tuple(v)
            if key not in profile_cache:
                profile_cache[key] = _profile(v, R1, pool1)
            if profile_cache[key] == target_profiles[i]:
                cands.append(v)
        if not cands:
            return None
        candidates.append(cands)

    # connected-first ordering so that inner-product constraints bite early
    order = []
    remaining = set(range(n))
    while remaining:
        start = min(remaining, key=lambda i: len(candidates[i]))
        frontier = [start]
        remaining.discard(start)
        while frontier:
            i = frontier.pop(0)
            order.append(i)
            nbrs = sorted((j for j in remaining if R2[i][j] != 0), key=lambda j: len(candidates[j]))
            for j in nbrs:
                remaining.discard(j)
                frontier.append(j)

    image = {}
    R1v = {}

    def rec(pos):
        budget.tick()
        if pos == n:
            return True
        i = order[pos]
        for v in candidates[i]:
            key = tuple(v)
            if key not in R1v:
                R1v[key] = matvec(R1, v)
            Gv = R1v[key]
            ok = True
            for j, w in image.items():
                if sum(a * b for a, b in zip(w, Gv)) != R2[i][j]:
                    ok = False
                    break
            if ok:
                image[i] = v
                if rec(pos + 1):
                    return True
                del image[i]
        return False

    if not rec(0):
        return None
    W = transpose([image[i] for i in range(n)])
    return matmul(matmul(P1, W), integer_inverse(P2))


# ---------------------------------------------------------------------------
# indefinite lattices


def _sparse_vectors(n, max_height, max_support):
    """Nonzero integer vectors ordered by support size, then height."""
    for support in range(1, max_support + 1):
        for h in range(1, max_height + 1):
            values = [v for v in range(-h, h + 1) if v]
            for idx in itertools.combinations(range(n), support):
                for vals in itertools.product(values, repeat=support):
                    if max(abs(v) for v in vals) != h:
                        continue
                    x = [0] * n
                    for i, v in zip(idx, vals):
                        x[i] = v
                    yield x


def _vec_gcd(v):
    g = 0
    for a in v:
        g = gcd(g, a)
    return g


def _solve_linear_form(coeffs, target):
    """Integer y with coeffs . y == target, or None."""
    g, y = 0, [0] * len(coeffs)
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if g == 0:
            g, y = abs(c), [0] * len(coeffs)
            y[i] = 1 if c > 0 else -1
            continue
        ng, s, t = xgcd(g, c)
        y = [s * a for a in y]
        y[i] += t
        g = ng
    if g == 0 or target % g:
        return None
    return [a * (target // g) for a in y]


def hyperbolic_splits(G, k, budget, max_height=2, max_support=4):
    """Yield (Q, R): Q unimodular with Q^T G Q = [[0,k],[k,0]] (+) R."""
    n = len(G)
    if n < 3:
        return
    # in an odd lattice the partner may also need a parity correction
    residues = k if is_even(G) else max(k, 2)
    seen = set()
    for x in _sparse_vectors(n, max_height, max_support):
        budget.tick()
        if _vec_gcd(x) != 1 or x[next(i for i, a in enumerate(x) if a)] < 0:
            continue
        Gx = matvec(G, x)
        if sum(a * b for a, b in zip(x, Gx)) != 0 or _vec_gcd(Gx) != k:
            continue
        y0 = _solve_linear_form(Gx, k)
        if y0 is None:
            continue
        perp = integer_kernel([Gx], n)
        for cs in itertools.product(range(residues), repeat=len(perp)):
            budget.tick()
            y = list(y0)
            for c, z in zip(cs, perp):
                if c:
                    y = [a + c * b for a, b in zip(y, z)]
            Gy = matvec(G, y)
            yy = sum(a * b for a, b in zip(y, Gy))
            if yy % (2 * k) or any(a % k for a in Gy):
                continue
            t = yy // (2 * k)
            y = [a - t * b for a, b in zip(y, x)]
            Gy = matvec(G, y)
            rest = integer_kernel([Gx, Gy], n)
            Q = transpose([x, y] + rest)
            if abs(bareiss_det(Q)) != 1:
                continue
            R = _congruent(G, Q)
            key = tuple(map(tuple, R))
            if key in seen:
                break
            seen.add(key)
            yield Q, [row[2:] for row in R[2:]]
            break


def _box_search(G1, G2, budget, height=3):
    """Column-by-column search for P with P^T G1 P = G2 in a coordinate box."""
    n = len(G1)
    pool = [list(v) for v in itertools.product(range(-height, height + 1), repeat=n) if any(v)]
    budget.tick(len(pool))
    norm_of = {}
    for v in pool:
        norm_of[tuple(v)] = sum(a * b for a, b in zip(v, matvec(G1, v)))
    image = []

    def rec(i):
        budget.tick()
        if i == n:
            return abs(bareiss_det(transpose(image))) == 1
        for v in pool:
            if norm_of[tuple(v)] != G2[i][i]:
                continue
            Gv = matvec(G1, v)
            if all(sum(a * b for a, b in zip(w, Gv)) == G2[i][j] for j, w in enumerate(image)):
                image.append(v)
                if rec(i + 1):
                    return True
                image.pop()
        return False

    return transpose(image) if rec(0) else None


def _cheap_invariants(G):
    return (len(G), tuple(signature(G)), abs(bareiss_det(G)), is_even(G), content(G))


def _search(G1, G2, budget, depth=0):
    n = len(G1)
    if n == 0:
        return []
    if _cheap_invariants(G1) != _cheap_invariants(G2):
        return None
    if G1 == G2:
        return identity(n)
    c = content(G1)
    if c > 1:
        G1 = [[x // c for x in r] for r in G1]
        G2 = [[x // c for x in r] for r in G2]
    sig = signature(G1)
    if sig.positive == 0 or sig.negative == 0:
        return _definite_search(G1, G2, budget)
    for k in (1, 2):
        split2 = next(hyperbolic_splits(G2, k, budget), None)
        if split2 is None:
            continue
        Q2, R2 = split2
        Q2inv = integer_inverse(Q2)
        for tries, (Q1, R1) in enumerate(hyperbolic_splits(G1, k, budget)):
            if tries >= 64:
                break
            W = _search(R1, R2, budget, depth + 1)
            if W is not None:
                T = block_diag(identity(2), W) if W else identity(2)
                return matmul(matmul(Q1, T), Q2inv)
        return None
    if n <= 4:
        return _box_search(G1, G2, budget)
    return None


def check_invariants(G1, G2):
    """Raise NotIsometric if a genus-level invariant differs."""
    G1, G2 = _gram(G1), _gram(G2)
    if len(G1) != len(G2):
        raise NotIsometric(f"rank {len(G1)} != {len(G2)}")
    s1, s2 = signature(G1), signature(G2)
    if s1 != s2:
        raise NotIsometric(f"signature {tuple(s1)} != {tuple(s2)}")
    d1, d2 = abs(bareiss_det(G1)), abs(bareiss_det(G2))
    if d1 != d2:
        raise NotIsometric(f"|det| {d1} != {d2}")
    if is_even(G1) != is_even(G2):
        raise NotIsometric("parity differs")
    if content(G1) != content(G2):
        raise NotIsometric("scale differs")
    if invariant_factors(G1) != invariant_factors(G2):
        raise NotIsometric("discriminant groups differ")
    if d1 and d1 <= 4096:
        if disc_form_multiset(Lattice(G1)) != disc_form_multiset(Lattice(G2)):
            raise NotIsometric("discriminant forms differ")


def find_isometry(G1, G2, budget: int = DEFAULT_BUDGET):
    """Search for unimodular P with P^T G1 P = G2.

    Returns the witness, or ``None`` when the search gives up (unknown).
    Raises :class:`NotIsometric` when an invariant rules isometry out.
    """
    G1, G2 = _gram(G1), _gram(G2)
    check_invariants(G1, G2)
    tracker = _Budget(budget)
    try:
        P = _search(G1, G2, tracker)
    except BudgetExceeded:
        log.info("isometry search exhausted its budget of %d nodes", budget)
        return None
    if P is None:
        return None
    if _congruent(G1, P) != G2 or abs(bareiss_det(P)) != 1:
        raise AssertionError("isometry search produced an invalid witness")
    return P
