"""Fixed coordinates on the K3 lattice and the catalog of lattices built in them.

The K3 lattice is ``U^3 (+) E8(-1)^2`` with coordinates ordered as
``e1, f1, e2, f2, e3, f3`` followed by the two E8 copies ``p1..p8`` and
``q1..q8``.  How the labels 1..8 sit on the E8 diagram is not fixed a priori:
:func:`derive_e8_labeling` recovers it from the inner products the
transcendental-lattice construction needs.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .exactmath import scale_matrix
from .isometry import NotIsometric, find_isometry
from .lattice import (
    Lattice,
    LatticeError,
    SpanInAmbient,
    direct_sum,
    disc_group,
    element_order,
    elementary_divisors,
    genus_invariants,
    gram_of_span,
    intersect_with_subspace,
    is_even,
    is_primitive,
    make_named,
    orth_complement,
    signature,
    verify_disc_generators,
    verify_isometry,
)
from .outcome import Outcome

K3_RANK = 22

# E8 diagram on abstract nodes: 0-1-2 is the two-edge arm, 3 the one-edge arm,
# 2-4-5-6-7 the four-edge arm.
E8_NODE_EDGES = ((0, 1), (1, 2), (2, 3), (2, 4), (4, 5), (5, 6), (6, 7))

KUMMER_BLOCK = [[-2, 0, 1], [0, -2, 1], [1, 1, -4]]
HALF_GRAM = [
    [Fraction(-1), Fraction(-1), Fraction(1, 2)],
    [Fraction(-1), Fraction(-2), Fraction(1, 2)],
    [Fraction(1, 2), Fraction(1, 2), Fraction(-1)],
]
ROOT_BLOCK = [[-2, 1, 0], [1, -2, 0], [0, 0, -2]]


class LabelingError(LatticeError):
    pass


class E8Labeling:
    """Assignment of labels 1..8 to the nodes of the E8 diagram."""

    def __init__(self, nodes):
        nodes = tuple(int(x) for x in nodes)
        if sorted(nodes) != list(range(1, 9)):
            raise LabelingError("labels must be a permutation of 1..8")
        self.nodes = nodes
        self.edges = tuple(sorted(tuple(sorted((nodes[a], nodes[b]))) for a, b in E8_NODE_EDGES))
        self._adj = frozenset(self.edges)

    def adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self._adj

    def root_gram(self) -> list[list[int]]:
        """Gram of E8(-1) in label order 1..8."""
        return [[-2 if i == j else (1 if self.adjacent(i, j) else 0) for j in range(1, 9)] for i in range(1, 9)]

    def __eq__(self, other):
        return isinstance(other, E8Labeling) and self.nodes == other.nodes

    def __hash__(self):
        return hash(self.nodes)

    def __repr__(self):
        return f"E8Labeling({self.nodes})"


class K3Basis:
    """The K3 lattice in fixed coordinates for a given E8 labeling."""

    def __init__(self, labeling: E8Labeling):
        self.labeling = labeling
        G = [[0] * K3_RANK for _ in range(K3_RANK)]
        for j in range(3):
            G[2 * j][2 * j + 1] = G[2 * j + 1][2 * j] = 1
        R = labeling.root_gram()
        for off in (6, 14):
            for i in range(8):
                for k in range(8):
                    G[off + i][off + k] = R[i][k]
        self.lattice = Lattice(G, "LK3")

    @staticmethod
    def _unit(i):
        v = [0] * K3_RANK
        v[i] = 1
        return v

    def e(self, j):
        return self._unit(2 * (j - 1))

    def f(self, j):
        return self._unit(2 * (j - 1) + 1)

    def p(self, j):
        return self._unit(5 + j)

    def q(self, j):
        return self._unit(13 + j)

    def diag_sum(self, j):
        """p_j + q_j, a root of the diagonal E8(-2)."""
        return add(self.p(j), self.q(j))

    def plane_basis(self):
        """Four vectors spanning a copy of U(2)^2: (iso1, co1, iso2, co2)."""
        n = self.diag_sum
        iso1 = add(scale(-1, n(5)), n(7), scale(2, add(self.e(1), self.f(1))))
        co1 = scale(-1, n(4))
        iso2 = add(n(7), n(8), scale(2, add(self.e(1), self.e(2), self.e(3), self.f(3))))
        co2 = n(6)
        return iso1, co1, iso2, co2

    def gram(self, vectors):
        return gram_of_span(vectors, self.lattice.matrix())

    def span(self, vectors) -> SpanInAmbient:
        return SpanInAmbient(self.lattice, vectors)


def add(*vs):
    return [sum(xs) for xs in zip(*vs)]


def scale(c, v):
    return [c * x for x in v]


# ---------------------------------------------------------------------------
# labeling reconstruction


# The plane vectors are (U^3 part, coefficients on p_j + q_j).  Since
# (p_i + q_i).(p_j + q_j) = 2 R_ij for the E8(-1) Gram R, every inner product
# needed below is cheap to evaluate from R alone.
_PLANE_COEFFS = (
    ((2, 2, 0, 0, 0, 0), {5: -1, 7: 1}),
    ((0, 0, 0, 0, 0, 0), {4: -1}),
    ((2, 0, 2, 0, 2, 2), {7: 1, 8: 1}),
    ((0, 0, 0, 0, 0, 0), {6: 1}),
)


def _u3_product(x, y):
    return sum(x[2 * k] * y[2 * k + 1] + x[2 * k + 1] * y[2 * k] for k in range(3))


def _plane_gram(lab: E8Labeling):
    R = lab.root_gram()
    out = []
    for ux, cx in _PLANE_COEFFS:
        row = []
        for uy, cy in _PLANE_COEFFS:
            nu = sum(a * b * 2 * R[i - 1][j - 1] for i, a in cx.items() for j, b in cy.items())
            row.append(_u3_product(ux, uy) + nu)
        out.append(row)
    return out


def _is_doubled_hyperbolic(block) -> bool:
    (a, b), (c, d) = block
    return a == 0 and b == c and abs(b) == 2 and d % 4 == 0


def _labeling_constraints(lab: E8Labeling) -> bool:
    if not lab.adjacent(1, 2):
        return False
    R = lab.root_gram()
    # orthogonality to p1 and q1 (hence to p1 + q1) and to p2 + q2
    for _, coeffs in _PLANE_COEFFS:
        for node in (1, 2):
            if sum(c * R[node - 1][j - 1] for j, c in coeffs.items()):
                return False
    G = _plane_gram(lab)
    first = [row[:2] for row in G[:2]]
    second = [row[2:] for row in G[2:]]
    cross = [row[2:] for row in G[:2]]
    return _is_doubled_hyperbolic(first) and _is_doubled_hyperbolic(second) and not any(x for r in cross for x in r)


@lru_cache(maxsize=None)
def surviving_labelings() -> tuple:
    """All E8 labelings compatible with the transcendental-lattice Gram facts.

    Kept: 1 and 2 adjacent; (iso1, co1) and (iso2, co2) span mutually
    orthogonal copies of U(2); all four plane vectors are orthogonal to
    p1, q1 and p2 + q2.
    """
    out = [E8Labeling(perm) for perm in itertools.permutations(range(1, 9))]
    return tuple(sorted((lab for lab in out if _labeling_constraints(lab)), key=lambda l: l.nodes))


def derive_e8_labeling() -> E8Labeling:
    survivors = surviving_labelings()
    if not survivors:
        raise LabelingError("E8 labeling reconstruction failed: no assignment satisfies the constraints")
    return survivors[0]


@lru_cache(maxsize=None)
def default_basis() -> K3Basis:
    return K3Basis(derive_e8_labeling())


# ---------------------------------------------------------------------------
# catalog


def _U(t=1):
    return make_named("U", t)


def _raw(G, label):
    return Lattice(G, label)


def _a_lattices():
    return {
        "A0": direct_sum([_U(), _U(), make_named("A2", -1), make_named("A1", -1)], "A0"),
        "A1": direct_sum([_U(), _U(), make_named("A2", -1)], "A1"),
        "A1'": direct_sum([_U(), _U(), make_named("A1", -1), make_named("A1", -1)], "A1'"),
        "A2": direct_sum([_U(), _U(), make_named("A1", -1)], "A2"),
        "A3": direct_sum([_U(), _raw([[2, 1], [1, -2]], None)], "A3"),
    }


def _b_lattices():
    return {
        "B0": direct_sum([_U(2), _U(2), _raw(KUMMER_BLOCK, None)], "B0"),
        "B1": direct_sum([_U(2), _U(2), make_named("A2", -2)], "B1"),
        "B1'": direct_sum([_U(2), _U(2), make_named("A1", -1), make_named("A1", -1)], "B1'"),
        "B2": direct_sum([_U(2), _U(2), make_named("A1", -2)], "B2"),
        "B3": direct_sum([_U(2), _raw([[4, 2], [2, -4]], None)], "B3"),
    }


def a_lattice_embedding(name: str, basis: K3Basis | None = None) -> SpanInAmbient:
    """A primitive embedding of A0..A3 or A1' into the K3 lattice.

    Hyperbolic planes go to {e1, f1} and {e2, f2}; negative roots are taken
    from adjacent p-nodes and from q-nodes.  A3 uses e3 + f3 and e3 + p1.
    """
    b = basis or default_basis()
    lab = b.labeling
    # any edge of the diagram gives an A2(-1) pair
    i, j = lab.edges[0]
    planes = [b.e(1), b.f(1), b.e(2), b.f(2)]
    vectors = {
        "A0": planes + [b.p(i), b.p(j), b.q(1)],
        "A1": planes + [b.p(i), b.p(j)],
        "A1'": planes + [b.p(1), b.q(1)],
        "A2": planes + [b.q(1)],
        "A3": [b.e(1), b.f(1), add(b.e(3), b.f(3)), add(b.e(3), b.p(1))],
    }
    if name not in vectors:
        raise LatticeError(f"no embedding recorded for {name!r}")
    return b.span(vectors[name])


@lru_cache(maxsize=None)
def _catalog_table():
    table = {}
    table.update(_a_lattices())
    table.update(_b_lattices())
    table["LK3"] = direct_sum([_U(), _U(), _U(), make_named("E8", -1), make_named("E8", -1)], "LK3")
    table["M"] = direct_sum([_U(), make_named("E7", -1), make_named("E6", -1)], "M")
    table["M0"] = Lattice(table["M"].gram, "M0")
    return table


@lru_cache(maxsize=None)
def _complement_entry(key: str) -> Lattice:
    # M1..M3 need the labeled K3 basis, so they are built only on request
    return orth_complement(a_lattice_embedding("A" + key[1:])).lattice(key)


CATALOG_NAMES = ("A0", "A1", "A2", "A3", "A1'", "M0", "M1", "M2", "M3", "B0", "B1", "B1'", "B2", "B3", "LK3", "M")


_OVERRIDES: dict = {}


def _catalog_key(name: str) -> str:
    key = name.strip().replace("′", "'")
    if key.endswith("p"):
        key = key[:-1] + "'"
    return key


def catalog(name: str) -> Lattice:
    """Named lattice.  ``A1p``/``B1p`` are accepted for the primed entries."""
    key = _catalog_key(name)
    if key in _OVERRIDES:
        return _OVERRIDES[key]
    if key in ("M1", "M2", "M3"):
        return _complement_entry(key)
    table = _catalog_table()
    if key not in table:
        raise LatticeError(f"unknown catalog name {name!r}")
    return table[key]


class override_catalog:
    """Context manager replacing one catalog entry (used for negative controls)."""

    def __init__(self, name: str, lattice: Lattice):
        self.key = _catalog_key(name)
        self.lattice = lattice

    def __enter__(self):
        self.previous = _OVERRIDES.get(self.key)
        _OVERRIDES[self.key] = self.lattice
        return self.lattice

    def __exit__(self, *exc):
        if self.previous is None:
            _OVERRIDES.pop(self.key, None)
        else:
            _OVERRIDES[self.key] = self.previous
        return False


# ---------------------------------------------------------------------------
# embeddings and checks


def embed_M0(basis: K3Basis | None = None) -> SpanInAmbient:
    """U (+) E7(-1) (+) E6(-1) inside the K3 lattice.

    U is {e1, f1}; E7(-1) is the p-diagram without node 7; E6(-1) the
    q-diagram without nodes 6 and 7.
    """
    b = basis or default_basis()
    vecs = [b.e(1), b.f(1)]
    vecs += [b.p(j) for j in range(1, 9) if j != 7]
    vecs += [b.q(j) for j in range(1, 9) if j not in (6, 7)]
    return b.span(vecs)


def _witness(outcome: Outcome, name: str, G1, G2, budget=None):
    kwargs = {} if budget is None else {"budget": budget}
    try:
        P = find_isometry(G1, G2, **kwargs)
    except NotIsometric as exc:
        outcome.require(name, False, f"not isometric: {exc}")
        return None
    ok = P is not None and verify_isometry(G1, G2, P)
    outcome.require(name, ok, "" if ok else "no witness within budget")
    if ok:
        outcome.data.setdefault("witnesses", {})[name] = P
    return P


def check_catalog() -> Outcome:
    """Signatures, parity and determinants of the catalog."""
    out = Outcome()
    lk3 = catalog("LK3")
    out.require("LK3 even unimodular (3,19)", is_even(lk3) and abs(lk3.det) == 1 and tuple(signature(lk3)) == (3, 19, 0))
    for j in range(4):
        A, M = catalog(f"A{j}"), catalog(f"M{j}")
        out.require(f"A{j} signature", tuple(signature(A)) == (2, 5 - j, 0), str(tuple(signature(A))))
        out.require(f"M{j} signature", tuple(signature(M)) == (1, 14 + j, 0), str(tuple(signature(M))))
        out.require(f"|det A{j}| = |det M{j}|", abs(A.det) == abs(M.det))
    for name in CATALOG_NAMES:
        L = catalog(name)
        out.require(f"{name} even", is_even(L))
        out.require(f"{name} disc order", disc_group(L).order == abs(L.det))
    A0 = catalog("A0")
    out.require("|det A0| = 6", abs(A0.det) == 6)
    out.require("A0 elementary divisors (2, 3)", elementary_divisors(A0) == [2, 3])
    return out


def a0_disc_generators():
    """Dual vectors of A0 in its basis (e1, f1, e2, f2, a1, a2, a3)."""
    third, two_thirds, half = Fraction(1, 3), Fraction(2, 3), Fraction(1, 2)
    y1 = [0, 0, 0, 0, third, two_thirds, 0]
    y2 = [0, 0, 0, 0, two_thirds, third, 0]
    y3 = [0, 0, 0, 0, 0, 0, half]
    return [y1, y2, y3]


def discriminant_generators_check() -> Outcome:
    out = Outcome()
    A = catalog("A0")
    y1, y2, y3 = a0_disc_generators()
    orders = [element_order(A, y) for y in (y1, y2, y3)]
    out.require("orders (3, 3, 2)", orders == [3, 3, 2], str(orders))
    out.require("y1 + y2 in the lattice", all(Fraction(a + b).denominator == 1 for a, b in zip(y1, y2)))
    out.require("generate the discriminant group", verify_disc_generators(A, [y1, y2, y3], [3, 3, 2]))
    out.require("y1 alone does not", not verify_disc_generators(A, [y1], [3]))
    out.require("group order 6", disc_group(A).order == 6)
    return out


def complement_check(budget=None) -> Outcome:
    """M0 embeds primitively and its complement is isometric to A0."""
    out = Outcome()
    span = embed_M0()
    G = gram_of_span(span)
    _witness(out, "embedding Gram ~ M", G, catalog("M").matrix(), budget)
    out.require("M0 primitive", is_primitive(span))
    comp = orth_complement(span)
    CG = gram_of_span(comp)
    out.require("complement rank 7", comp.rank == 7)
    out.require("|det M0| = |det complement| = 6", abs(span.lattice().det) == 6 and abs(Lattice(CG).det) == 6)
    _witness(out, "complement ~ A0", CG, catalog("A0").matrix(), budget)
    out.data["complement_basis"] = [list(v) for v in comp.basis]
    return out


def kummer_vectors(basis: K3Basis):
    """Spans used for the transcendental lattice and its three sublattices."""
    planes = list(basis.plane_basis())
    n1, n2 = basis.diag_sum(1), basis.diag_sum(2)
    return {
        "full": planes + [basis.p(1), basis.q(1), n2],
        "B1": planes + [n1, n2],
        "B2": planes + [n1],
        "B1'": planes + [basis.p(1), basis.q(1)],
    }


def expected_kummer_gram():
    return [
        [0, 2, 0, 0, 0, 0, 0],
        [2, -4, 0, 0, 0, 0, 0],
        [0, 0, 0, 2, 0, 0, 0],
        [0, 0, 2, -4, 0, 0, 0],
        [0, 0, 0, 0, -2, 0, 1],
        [0, 0, 0, 0, 0, -2, 1],
        [0, 0, 0, 0, 1, 1, -4],
    ]


def verify_kummer_lattice(budget=None, all_labelings: bool = True) -> Outcome:
    """The rank-7 span is U(2)^2 (+) KUMMER_BLOCK, primitive, with the expected sublattices."""
    out = Outcome()
    labelings = surviving_labelings() if all_labelings else (derive_e8_labeling(),)
    fingerprints = set()
    for lab in labelings:
        b = K3Basis(lab)
        tag = "".join(map(str, lab.nodes))
        vecs = kummer_vectors(b)
        G = b.gram(vecs["full"])
        fingerprints.add(genus_invariants(Lattice(G)))
        if lab == derive_e8_labeling():
            out.require("Gram of the rank-7 span", G == expected_kummer_gram(), str(G))
        _witness(out, f"[{tag}] span ~ B0", G, catalog("B0").matrix(), budget)
        out.require(f"[{tag}] primitive", is_primitive(b.span(vecs["full"])))
        for name in ("B1", "B2", "B1'"):
            sub = b.span(vecs[name])
            out.require(f"[{tag}] {name} span primitive", is_primitive(sub))
            _witness(out, f"[{tag}] {name} span ~ {name}", gram_of_span(sub), catalog(name).matrix(), budget)
    out.require("fingerprint independent of labeling", len(fingerprints) == 1)
    return out


def halved_vectors(basis: K3Basis):
    half = Fraction(1, 2)
    return [scale(half, basis.diag_sum(1)), basis.q(1), scale(half, basis.diag_sum(2))]


def quotient_lattice(basis: K3Basis):
    """Rational basis of (transcendental span (x) Q) meet (K3 lattice + <(p_j + q_j)/2>)."""
    half = Fraction(1, 2)
    gens = [basis._unit(i) for i in range(K3_RANK)]
    gens += [scale(half, basis.diag_sum(j)) for j in range(1, 9)]
    return intersect_with_subspace(gens, kummer_vectors(basis)["full"])


def nikulin_quotient_check(budget=None, all_labelings: bool = True) -> Outcome:
    out = Outcome()
    labelings = surviving_labelings() if all_labelings else (derive_e8_labeling(),)
    A0 = catalog("A0")
    for lab in labelings:
        b = K3Basis(lab)
        tag = "".join(map(str, lab.nodes))
        H = b.gram(halved_vectors(b))
        out.require(f"[{tag}] halved Gram", H == HALF_GRAM, str(H))
        doubled = [[int(2 * x) for x in row] for row in H]
        out.require(f"[{tag}] doubled Gram", doubled == [[-2, -2, 1], [-2, -4, 1], [1, 1, -2]])
        _witness(out, f"[{tag}] doubled ~ A2(-1)+A1(-1)", doubled, ROOT_BLOCK, budget)
        basis_q = quotient_lattice(b)
        out.require(f"[{tag}] intersection rank 7", len(basis_q) == 7, str(len(basis_q)))
        if len(basis_q) == 7:
            twisted = scale_matrix(b.gram(basis_q), 2)
            integral = all(Fraction(x).denominator == 1 for r in twisted for x in r)
            out.require(f"[{tag}] twist by 2 integral", integral)
            if integral:
                T = Lattice([[int(x) for x in r] for r in twisted])
                out.require(f"[{tag}] twist fingerprint = A0", genus_invariants(T) == genus_invariants(A0))
                _witness(out, f"[{tag}] twist ~ A0", T.matrix(), A0.matrix(), budget)
    return out


def verify_twist_identities(budget=None) -> Outcome:
    out = Outcome()
    for j in (1, 2, 3):
        _witness(out, f"B{j} ~ A{j}(2)", catalog(f"B{j}").matrix(), catalog(f"A{j}").twist(2).matrix(), budget)
    B0, A02 = catalog("B0"), catalog("A0").twist(2)
    out.require("|det B0| = 192", abs(B0.det) == 192)
    out.require("|det A0(2)| = 768", abs(A02.det) == 768)
    try:
        find_isometry(B0.matrix(), A02.matrix())
        out.require("B0 not A0(2)", False, "invariants agree")
    except NotIsometric as exc:
        out.require("B0 not A0(2)", True, str(exc))
    return out


__all__ = [
    "CATALOG_NAMES",
    "E8Labeling",
    "K3Basis",
    "a0_disc_generators",
    "a_lattice_embedding",
    "catalog",
    "check_catalog",
    "complement_check",
    "default_basis",
    "derive_e8_labeling",
    "discriminant_generators_check",
    "embed_M0",
    "expected_kummer_gram",
    "halved_vectors",
    "kummer_vectors",
    "nikulin_quotient_check",
    "override_catalog",
    "quotient_lattice",
    "surviving_labelings",
    "verify_kummer_lattice",
    "verify_twist_identities",
]
