"""Exact integer and rational matrix algebra.

Matrices are tuples of row tuples holding Python ints (or ``Fraction`` for the
rational inverse). Nothing in this module touches floating point.

The Smith normal form uses a fixed pivoting rule (smallest nonzero absolute
value, ties broken by lowest row then column) so that transforms are
reproducible, which the downstream golden tests rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DimensionError, NoSolutionError, RankError, SingularMatrixError

IntMatrix = tuple[tuple[int, ...], ...]
RatMatrix = tuple[tuple[Fraction, ...], ...]
Vector = tuple[int, ...]


def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if m and len({len(r) for r in m}) != 1:
        raise DimensionError("ragged matrix rows")
    return m


def shape(A: Sequence[Sequence]) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(A: Sequence[Sequence]) -> tuple:
    if not A:
        return ()
    return tuple(zip(*A))


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> tuple:
    if A and B and len(A[0]) != len(B):
        raise DimensionError(f"cannot multiply {shape(A)} by {shape(B)}")
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def content(v: Iterable[int]) -> int:
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> tuple[Vector, int]:
    """Return ``(v / c, c)`` with ``c = content(v)``."""
    c = content(v)
    if c == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(x // c for x in v), c


# -- determinants and inverses -------------------------------------------------


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n, m = shape(A)
    if n != m:
        raise DimensionError(f"determinant of non-square {n}x{m} matrix")
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rational_inverse(A: Sequence[Sequence[int]]) -> RatMatrix:
    n, m = shape(A)
    if n != m:
        raise DimensionError(f"inverse of non-square {n}x{m} matrix")
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise SingularMatrixError("matrix is singular", det=0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return tuple(tuple(row[n:]) for row in M)


def lcm_of_denominators(row: Iterable) -> int:
    out = 1
    for x in row:
        out = lcm(out, Fraction(x).denominator)
    return out


# -- Smith normal form ---------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        r, c = shape(self.D)
        return tuple(self.D[i][i] for i in range(min(r, c)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Nonzero diagonal entries, in divisibility order."""
        return tuple(d for d in self.diagonal if d != 0)


def smith_normal_form(A: Sequence[Sequence[int]]) -> SmithDecomposition:
    rows, cols = shape(A)
    D = [list(r) for r in A]
    U = [list(r) for r in identity(rows)]
    Ui = [list(r) for r in identity(rows)]
    V = [list(r) for r in identity(cols)]
    Vi = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        if i == j:
            return
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, c):  # row_i += c * row_j
        if c == 0:
            return
        D[i] = [x + c * y for x, y in zip(D[i], D[j])]
        U[i] = [x + c * y for x, y in zip(U[i], U[j])]
        for row in Ui:
            row[j] -= c * row[i]

    def negate_row(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]
        for row in Ui:
            row[i] = -row[i]

    def swap_cols(i, j):
        if i == j:
            return
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_col(i, j, c):  # col_i += c * col_j
        if c == 0:
            return
        for row in D:
            row[i] += c * row[j]
        for row in V:
            row[i] += c * row[j]
        Vi[j] = [x - c * y for x, y in zip(Vi[j], Vi[i])]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = D[i][j]
                if x != 0 and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        p = D[t][t]
        dirty = False
        for i in range(t + 1, rows):
            if D[i][t]:
                add_row(i, t, -(D[i][t] // p))
                dirty = dirty or D[i][t] != 0
        for j in range(t + 1, cols):
            if D[t][j]:
                add_col(j, t, -(D[t][j] // p))
                dirty = dirty or D[t][j] != 0
        if dirty:
            continue
        bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                    if D[i][j] % p), None)
        if bad is not None:
            add_row(t, bad[0], 1)
            continue
        if p < 0:
            negate_row(t)
        t += 1

    return SmithDecomposition(
        U=as_matrix(U), D=as_matrix(D), V=as_matrix(V),
        U_inv=as_matrix(Ui), V_inv=as_matrix(Vi),
    )


def invariant_factors(A: Sequence[Sequence[int]]) -> tuple[int, ...]:
    return smith_normal_form(A).invariant_factors


# -- Hermite normal form and lattices ------------------------------------------


def hermite_normal_form(rows: Iterable[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Row-style HNF basis of the lattice spanned by ``rows``.

    Echelon form with positive pivots; entries above a pivot lie in
    ``[0, pivot)``. Zero rows are dropped.
    """
    A = [list(r) for r in rows]
    if ncols is None:
        ncols = len(A[0]) if A else 0
    A = [r for r in A if any(r)]
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(A)) if A[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(A[i][c]), i))
            A[r], A[i0] = A[i0], A[r]
            done = True
            for i in range(r + 1, len(A)):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    done = done and A[i][c] == 0
            if done:
                break
        if r >= len(A) or A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
        r += 1
        A = A[:r] + [row for row in A[r:] if any(row)]
    return as_matrix(A[:r])


def _pivot(row: Sequence[int]) -> int:
    return next(i for i, x in enumerate(row) if x != 0)


def hnf_reduce(H: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    """Canonical representative of ``v`` modulo the lattice with HNF basis ``H``."""
    v = list(v)
    for row in H:
        p = _pivot(row)
        q = v[p] // row[p]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return tuple(v)


def hnf_solve(H: Sequence[Sequence[int]], v: Sequence[int]) -> Vector | None:
    """Integer coordinates of ``v`` in the HNF basis ``H``, or None if ``v`` is not in the lattice."""
    v = list(v)
    coeffs = []
    for row in H:
        p = _pivot(row)
        q, rem = divmod(v[p], row[p])
        if rem:
            return None
        coeffs.append(q)
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    if any(v):
        return None
    return tuple(coeffs)


@dataclass(frozen=True)
class LatticeBasis:
    """A sublattice of ``Z^ambient`` given by linearly independent vectors."""

    ambient: int
    vectors: tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.vectors)

    def columns(self) -> IntMatrix:
        """The basis as an ``ambient x rank`` matrix with basis vectors as columns."""
        if not self.vectors:
            return tuple(() for _ in range(self.ambient))
        return transpose(self.vectors)

    def hnf(self) -> IntMatrix:
        return hermite_normal_form(self.vectors, self.ambient)

    def __contains__(self, v) -> bool:
        return hnf_solve(self.hnf(), v) is not None

    def same_lattice(self, other: "LatticeBasis") -> bool:
        return self.ambient == other.ambient and self.hnf() == other.hnf()


def lattice(vectors: Iterable[Sequence[int]], ambient: int) -> LatticeBasis:
    """HNF basis of the lattice spanned by arbitrary (possibly dependent) vectors."""
    return LatticeBasis(ambient, hermite_normal_form(vectors, ambient))


def saturate_columns(B: LatticeBasis) -> LatticeBasis:
    """Basis of ``span_R(B) ∩ Z^n``."""
    k = B.rank
    if k == 0:
        return B
    snf = smith_normal_form(B.columns())
    if snf.rank != k:
        raise RankError(f"{k} vectors span a rank-{snf.rank} lattice")
    cols = [tuple(snf.U_inv[i][j] for i in range(B.ambient)) for j in range(k)]
    return LatticeBasis(B.ambient, hermite_normal_form(cols, B.ambient))


def integer_kernel(A: Sequence[Sequence[int]]) -> LatticeBasis:
    """Saturated basis of ``{x in Z^cols : A x = 0}``."""
    rows, cols = shape(A)
    if rows == 0:
        return LatticeBasis(cols, identity(cols))
    snf = smith_normal_form(A)
    r = snf.rank
    vecs = [tuple(snf.V[i][j] for i in range(cols)) for j in range(r, cols)]
    return LatticeBasis(cols, hermite_normal_form(vecs, cols))


def lattice_index(sub: LatticeBasis, sup: LatticeBasis) -> int:
    """Index ``[sup : sub]`` for full-rank-in-each-other lattices of equal rank."""
    if sub.rank != sup.rank:
        raise RankError("index is infinite: ranks differ")
    H = sup.hnf()
    coords = []
    for v in sub.vectors:
        c = hnf_solve(H, v)
        if c is None:
            raise ValueError("first lattice is not contained in the second")
        coords.append(c)
    return abs(determinant(coords)) if coords else 1


# -- linear Diophantine equations ----------------------------------------------


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``.

    When ``a`` divides ``b`` the coefficient of ``b`` is 0.
    """
    if a != 0 and b % a == 0:
        return abs(a), (1 if a > 0 else -1), 0
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def solve_diophantine(chi: Sequence[int], t: int) -> Vector:
    """Canonical integer ``b`` with ``b . chi == t``.

    Coefficients come from a left-to-right extended Euclid; when the first two
    weights allow it, ``b[0]`` is then shifted into the residue class of least
    absolute value modulo ``chi[1] / gcd(chi[0], chi[1])``.
    """
    chi = [int(x) for x in chi]
    if not chi:
        if t == 0:
            return ()
        raise NoSolutionError("empty equation with nonzero right-hand side")
    g = chi[0]
    coeff = [1]
    if g < 0:
        g, coeff = -g, [-1]
    for x in chi[1:]:
        g2, p, q = ext_gcd(g, x)
        coeff = [p * c for c in coeff] + [q]
        g = g2
    if g == 0:
        if t == 0:
            return tuple(0 for _ in chi)
        raise NoSolutionError("all coefficients are zero")
    if t % g:
        raise NoSolutionError(f"gcd {g} does not divide {t}")
    b = [c * (t // g) for c in coeff]
    if len(chi) >= 2:
        g12 = gcd(chi[0], chi[1])
        mod = abs(chi[1]) // g12 if g12 else 0
        if mod > 1:
            # moving along (chi1, -chi0)/g12 keeps b . chi fixed
            step0, step1 = chi[1] // g12, -chi[0] // g12
            r = b[0] % mod
            if r > mod // 2:
                r -= mod
            k = (b[0] - r) // step0
            b[0] -= k * step0
            b[1] -= k * step1
    assert sum(x * y for x, y in zip(b, chi)) == t
    return tuple(b)
