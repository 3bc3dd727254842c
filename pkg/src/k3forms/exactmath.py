"""Exact arithmetic over Z and Q.

Rationals are ``fractions.Fraction``.  Univariate polynomials (:class:`UPoly`)
are dense and immutable; multivariate ones (:class:`MPoly`) are sparse maps
from exponent tuples to coefficients.  Integer matrices are plain lists of
lists of ``int``; every routine here returns fresh lists and never mutates its
input.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import zip_longest
from math import gcd
from numbers import Rational as _RationalABC

Rational = Fraction


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and strings like ``"2/3"`` to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rational_to_str(q) -> str:
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# univariate polynomials


class UPoly:
    """Dense univariate polynomial over Q, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> "UPoly":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "UPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, c, n: int) -> "UPoly":
        return cls([0] * n + [c])

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UPoly((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UPoly({[rational_to_str(c) for c in self.coeffs]})"

    def __str__(self):
        return self.to_str()

    def to_str(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for n in range(self.degree, -1, -1):
            c = self.coeffs[n]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if n == 0:
                body = rational_to_str(mag)
            else:
                mono = var if n == 1 else f"{var}^{n}"
                body = mono if mag == 1 else f"{rational_to_str(mag)}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def _coerce(self, other) -> "UPoly":
        if isinstance(other, UPoly):
            return other
        return UPoly((as_rational(other),))

    def __add__(self, other):
        other = self._coerce(other)
        return UPoly(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    __radd__ = __add__

    def __neg__(self):
        return UPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return UPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = UPoly((1,)), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, t):
        acc = Fraction(0) if not isinstance(t, UPoly) else UPoly()
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def divmod(self, other: "UPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        dlc, dd = other.lc, other.degree
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            f = c / dlc
            q[k - dd] = f
            for j, b in enumerate(other.coeffs):
                rem[k - dd + j] -= f * b
        return UPoly(q), UPoly(rem)

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def exact_div(self, other: "UPoly") -> "UPoly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def derivative(self) -> "UPoly":
        return UPoly(n * c for n, c in enumerate(self.coeffs) if n)

    def monic(self) -> "UPoly":
        if not self.coeffs:
            return self
        lc = self.lc
        return UPoly(c / lc for c in self.coeffs)

    def shift_down(self, k: int) -> "UPoly":
        """Divide by x**k, which must divide exactly."""
        if any(self.coeffs[:k]):
            raise ArithmeticError(f"x^{k} does not divide {self}")
        return UPoly(self.coeffs[k:])

    def order_at_zero(self) -> int | None:
        """Multiplicity of the root x = 0; None for the zero polynomial."""
        for n, c in enumerate(self.coeffs):
            if c != 0:
                return n
        return None


def upoly_gcd(p: UPoly, q: UPoly) -> UPoly:
    """Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0."""
    a, b = p, q
    while b:
        a, b = b, a % b
    return a.monic()


def sylvester_matrix(p: UPoly, q: UPoly) -> list[list[Fraction]]:
    m, n = p.degree, q.degree
    size = m + n
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([Fraction(0)] * i + pc + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + qc + [Fraction(0)] * (size - n - 1 - i))
    return rows


def resultant(p: UPoly, q: UPoly) -> Fraction:
    """Res(p, q) = det Sylvester(p, q) = lc(p)^deg q * prod q(alpha), p(alpha) = 0."""
    if p.is_zero() or q.is_zero():
        raise ValueError("undefined resultant: zero polynomial")
    if p.degree == 0 and q.degree == 0:
        return Fraction(1)
    return bareiss_det(sylvester_matrix(p, q))


def discriminant(p: UPoly) -> Fraction:
    """(-1)^(d(d-1)/2) Res(p, p') / lc(p)."""
    d = p.degree
    if d < 1:
        raise ValueError("discriminant of a constant polynomial")
    if d == 1:
        return Fraction(1)
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * resultant(p, p.derivative()) / p.lc


def squarefree_decomposition(p: UPoly) -> list[tuple[UPoly, int]]:
    """Yun's algorithm: monic, pairwise coprime squarefree factors with multiplicities.

    ``p == p.lc * prod(f**m for f, m in result)``.
    """
    if p.is_zero():
        raise ValueError("squarefree decomposition of zero")
    if p.degree == 0:
        return []
    f = p.monic()
    out = []
    a = upoly_gcd(f, f.derivative())
    b = f.exact_div(a)
    c = f.derivative().exact_div(a)
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        g = upoly_gcd(b, d)
        if g.degree > 0:
            out.append((g, i))
        b = b.exact_div(g)
        c = d.exact_div(g)
        d = c - b.derivative()
        i += 1
    return out


# ---------------------------------------------------------------------------
# multivariate polynomials


class MPoly:
    """Sparse polynomial over Q in a fixed tuple of named variables."""

    __slots__ = ("names", "terms")

    def __init__(self, names, terms=None):
        self.names = tuple(names)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(self.names):
                raise ValueError("exponent vector length does not match variables")
            c = as_rational(c)
            if c != 0:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if clean[exps] == 0:
                    del clean[exps]
        self.terms = clean

    @classmethod
    def var(cls, names, name: str) -> "MPoly":
        names = tuple(names)
        exps = tuple(1 if n == name else 0 for n in names)
        if sum(exps) != 1:
            raise KeyError(name)
        return cls(names, {exps: 1})

    @classmethod
    def const(cls, names, c) -> "MPoly":
        return cls(names, {(0,) * len(tuple(names)): c})

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.names != self.names:
                raise ValueError("variable sets differ")
            return other
        return MPoly.const(self.names, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return MPoly(self.names, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.names, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return MPoly(self.names, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = MPoly.const(self.names, 1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.names == other.names and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.names, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, values) -> Fraction:
        if isinstance(values, dict):
            values = [values[n] for n in self.names]
        vals = [as_rational(v) for v in values]
        total = Fraction(0)
        for exps, c in self.terms.items():
            t = c
            for v, k in zip(vals, exps):
                if k:
                    t *= v ** k
            total += t
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.names, exps) if k
            )
            coeff = rational_to_str(c)
            parts.append(coeff if not mono else (mono if c == 1 else f"{coeff}*{mono}"))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# integer / rational matrices


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M):
    return [list(r) for r in zip(*M)] if M else []


def matmul(A, B):
    if not A:
        return []
    Bt = transpose(B)
    if not Bt:
        return [[] for _ in A]
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v):
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def bilinear(G, u, v):
    """u^T G v."""
    return dot(u, matvec(G, v))


def scale_matrix(M, k):
    return [[k * x for x in row] for row in M]


def block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


def bareiss_det(M) -> Fraction | int:
    """Determinant by fraction-free (Bareiss) elimination.

    Integer input yields an int; rational input a Fraction.
    """
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    if any(len(row) != n for row in A):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0 * A[0][0]
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                num = row_i[j] * akk - aik * row_k[j]
                row_i[j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
            row_i[k] = 0
        prev = akk
    return sign * A[n - 1][n - 1]


def rational_inverse(M) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over Q."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def rational_rank(M) -> int:
    A = [[Fraction(x) for x in row] for row in M]
    rank = 0
    cols = len(A[0]) if A else 0
    for col in range(cols):
        piv = next((r for r in range(rank, len(A)) if A[r][col] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for r in range(rank + 1, len(A)):
            if A[r][col] != 0:
                f = A[r][col] / A[rank][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


def rational_nullspace(M, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {v : M v = 0} over Q (reduced row echelon)."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    A = [[Fraction(x) for x in row] for row in M]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][col]
        A[r] = [x / p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][fc]
        basis.append(v)
    return basis


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def hermite_normal_form(M) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style HNF: returns (H, T) with H = T M, T unimodular.

    H is upper echelon, pivots positive, entries above a pivot reduced into
    [0, pivot).  Zero rows sit at the bottom.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    H = [[int(x) for x in row] for row in M]
    T = identity(m)
    r = 0
    for col in range(n):
        if r >= m:
            break
        # clear the column below row r by repeated extended-gcd row steps
        for i in range(r + 1, m):
            if H[i][col] == 0:
                continue
            a, b = H[r][col], H[i][col]
            g, s, t = xgcd(a, b)
            u, v = a // g, b // g
            Hr, Hi = H[r], H[i]
            H[r] = [s * x + t * y for x, y in zip(Hr, Hi)]
            H[i] = [-v * x + u * y for x, y in zip(Hr, Hi)]
            Tr, Ti = T[r], T[i]
            T[r] = [s * x + t * y for x, y in zip(Tr, Ti)]
            T[i] = [-v * x + u * y for x, y in zip(Tr, Ti)]
        if H[r][col] == 0:
            continue
        if H[r][col] < 0:
            H[r] = [-x for x in H[r]]
            T[r] = [-x for x in T[r]]
        p = H[r][col]
        for i in range(r):
            q = H[i][col] // p
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                T[i] = [x - q * y for x, y in zip(T[i], T[r])]
        r += 1
    return H, T


def integer_kernel(M, ncols: int | None = None) -> list[list[int]]:
    """Z-basis (rows) of {v in Z^n : M v = 0}, in Hermite normal form."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        return identity(ncols)
    Mt = transpose([[int(x) for x in row] for row in M])
    H, T = hermite_normal_form(Mt)
    kernel = [T[i] for i in range(len(H)) if not any(H[i])]
    if not kernel:
        return []
    K, _ = hermite_normal_form(kernel)
    return [row for row in K if any(row)]


def _pivot_step(a, b):
    # 2x2 unimodular step sending (a, b) to (g, 0); a plain subtraction when a | b
    # so that entries already cleared elsewhere stay cleared
    if b % a == 0:
        return 1, 0, 1, b // a
    g, s, t = xgcd(a, b)
    return s, t, a // g, b // g


def smith_normal_form(M):
    """Smith normal form with transforms: returns (U, D, V) with D = U M V.

    D is diagonal (rectangular allowed) with d_1 | d_2 | ... and d_i >= 0;
    U and V are unimodular.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    D = [[int(x) for x in row] for row in M]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def clear_column(t):
        for i in range(t + 1, m):
            if D[i][t]:
                s, tt, u, v = _pivot_step(D[t][t], D[i][t])
                for X in (D, U):
                    Xt, Xi = X[t], X[i]
                    X[t] = [s * x + tt * y for x, y in zip(Xt, Xi)]
                    X[i] = [-v * x + u * y for x, y in zip(Xt, Xi)]

    def clear_row(t):
        for j in range(t + 1, n):
            if D[t][j]:
                s, tt, u, v = _pivot_step(D[t][t], D[t][j])
                for X in (D, V):
                    for row in X:
                        x, y = row[t], row[j]
                        row[t], row[j] = s * x + tt * y, -v * x + u * y

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            # each pass either finishes or strictly shrinks |D[t][t]|
            clear_column(t)
            clear_row(t)
            if any(D[i][t] for i in range(t + 1, m)):
                continue
            p = D[t][t]
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            D[t] = [x + y for x, y in zip(D[t], D[bad])]
            U[t] = [x + y for x, y in zip(U[t], U[bad])]
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return U, D, V


def invariant_factors(M) -> list[int]:
    """Diagonal of the Smith normal form (zeros dropped)."""
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def is_unimodular(P) -> bool:
    return len(P) == len(P[0]) and abs(bareiss_det(P)) == 1 if P else True


def integer_inverse(P) -> list[list[int]]:
    """Inverse of a unimodular integer matrix."""
    inv = rational_inverse(P)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def lcm(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else 0


def common_denominator(vectors) -> int:
    d = 1
    for v in vectors:
        for x in v:
            d = lcm(d, as_rational(x).denominator)
    return d
