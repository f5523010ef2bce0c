"""Characteristic pairs ``(Q, lambda)`` and their local groups.

Facets are 0-based internally; ``lam[i]`` is the vector attached to facet
``i``. Faces are defining facet sets as in :mod:`toricorb.polytope`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import linalg
from .errors import DimensionError, NotRCharacteristicError, ValidationError
from .polytope import SimplePolytope, vertex_label


@dataclass(frozen=True, order=True)
class FiniteAbelianGroup:
    """``Z/d1 + Z/d2 + ...`` with ``d1 | d2 | ...`` and every ``d_i > 1``."""

    invariants: tuple[int, ...] = ()

    @classmethod
    def from_factors(cls, factors: Iterable[int]) -> "FiniteAbelianGroup":
        fs = tuple(abs(d) for d in factors)
        if any(d == 0 for d in fs):
            raise ValueError("infinite factor in a finite group")
        diag = [[d if i == j else 0 for j in range(len(fs))] for i, d in enumerate(fs)]
        return cls(tuple(d for d in linalg.invariant_factors(diag) if d != 1) if fs else ())

    @classmethod
    def cokernel(cls, A: Sequence[Sequence[int]]) -> "FiniteAbelianGroup":
        """``Z^rows / (column span of A)`` for a square nonsingular ``A``."""
        return cls.from_factors(linalg.smith_normal_form(A).diagonal)

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariants:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.invariants

    def __str__(self) -> str:
        return " + ".join(f"Z{d}" for d in self.invariants) if self.invariants else "1"


@dataclass(frozen=True)
class Violation:
    kind: str  # "primitivity" or "singular"
    message: str
    facet: int | None = None
    vertex: frozenset | None = None


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class CharacteristicPair:
    polytope: SimplePolytope
    lam: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        P = self.polytope
        if len(self.lam) != P.n_facets:
            raise DimensionError(f"{len(self.lam)} vectors for {P.n_facets} facets")
        for i, v in enumerate(self.lam):
            if len(v) != P.dim:
                raise DimensionError(f"lambda_{i + 1} has length {len(v)}, expected {P.dim}")

    @property
    def dim(self) -> int:
        return self.polytope.dim

    def matrix(self) -> linalg.IntMatrix:
        """The ``n x m`` characteristic matrix, columns in facet order."""
        return linalg.transpose(self.lam)

    def columns(self, idx: Iterable[int]) -> linalg.IntMatrix:
        """``n x k`` matrix whose columns are the vectors of the given facets, sorted."""
        cols = [self.lam[i] for i in sorted(idx)]
        if not cols:
            return tuple(() for _ in range(self.dim))
        return linalg.transpose(cols)

    def vertex_determinant(self, v: Iterable[int]) -> int:
        return linalg.determinant(self.columns(v))


def make_pair(polytope: SimplePolytope, lam: Iterable[Iterable[int]]) -> CharacteristicPair:
    return CharacteristicPair(polytope, tuple(tuple(int(x) for x in v) for v in lam))


def validate(pair: CharacteristicPair) -> ValidationReport:
    out = []
    for i, v in enumerate(pair.lam):
        if linalg.content(v) != 1:
            out.append(Violation("primitivity", f"lambda_{i + 1} = {list(v)} is not primitive", facet=i))
    for v in pair.polytope.vertices:
        if pair.vertex_determinant(v) == 0:
            out.append(Violation(
                "singular", f"vectors at {vertex_label(v)} are linearly dependent", vertex=v))
    return ValidationReport(tuple(out))


def require_valid(pair: CharacteristicPair) -> CharacteristicPair:
    report = validate(pair)
    if not report.ok:
        raise ValidationError(report.violations[0].message)
    return pair


def local_group_at_vertex(pair: CharacteristicPair, v: Iterable[int]) -> FiniteAbelianGroup:
    v = frozenset(v)
    if not pair.polytope.is_vertex(v):
        raise ValidationError(f"{sorted(v)} is not a vertex")
    return FiniteAbelianGroup.cokernel(pair.columns(v))


def face_lattices(pair: CharacteristicPair, E: Iterable[int]) -> tuple[linalg.LatticeBasis, linalg.LatticeBasis]:
    """``(M(E), M*(E))``: span of the vectors on ``E`` and its saturation."""
    E = frozenset(E)
    M = linalg.LatticeBasis(pair.dim, tuple(pair.lam[i] for i in sorted(E)))
    return M, linalg.saturate_columns(M)


def face_group(pair: CharacteristicPair, E: Iterable[int]) -> FiniteAbelianGroup:
    """``G_E = M*(E) / M(E)``."""
    M, Msat = face_lattices(pair, E)
    if M.rank == 0:
        return FiniteAbelianGroup()
    H = Msat.hnf()
    coords = [linalg.hnf_solve(H, v) for v in M.vectors]
    return FiniteAbelianGroup.cokernel(linalg.transpose(coords))


def quotient_projection(pair: CharacteristicPair, E: Iterable[int]) -> linalg.IntMatrix:
    """Rows of an isomorphism ``Z^n / M*(E) -> Z^(n-k)``.

    The rows are the HNF basis of the lattice of integer functionals that
    vanish on ``M*(E)``; that lattice is saturated, so the map is onto.
    """
    _, Msat = face_lattices(pair, E)
    if Msat.rank == 0:
        return linalg.identity(pair.dim)
    return linalg.integer_kernel(Msat.vectors).vectors


@dataclass(frozen=True)
class InducedPair:
    face: frozenset[int]
    rank: int
    projection: linalg.IntMatrix
    lam: dict[int, tuple[int, ...]] = field(hash=False)
    multipliers: dict[int, int] = field(hash=False)

    @property
    def facets(self) -> tuple[int, ...]:
        return tuple(sorted(self.lam))

    def primitive(self) -> dict[int, tuple[int, ...]]:
        return {j: tuple(x // self.multipliers[j] for x in v) for j, v in self.lam.items()}

    def vertex_matrix(self, v: Iterable[int], reduced: bool = False) -> linalg.IntMatrix:
        vecs = self.primitive() if reduced else self.lam
        cols = [vecs[j] for j in sorted(frozenset(v) - self.face)]
        return linalg.transpose(cols) if cols else ()


def induced_pair(pair: CharacteristicPair, E: Iterable[int],
                 projection: Sequence[Sequence[int]] | None = None) -> InducedPair:
    """Project the vectors of facets meeting ``E`` to ``Z^n / M*(E)``.

    ``projection`` overrides the default basis choice; any surjection with
    kernel ``M*(E)`` gives isomorphic local groups.
    """
    E = frozenset(E)
    P = pair.polytope
    if not P.is_face(E) or not E:
        raise ValidationError(f"{sorted(E)} is not a proper face")
    proj = linalg.as_matrix(projection) if projection is not None else quotient_projection(pair, E)
    lam = {}
    mult = {}
    for j in P.facets_of_face(E):
        w = linalg.matvec(proj, pair.lam[j])
        lam[j] = w
        mult[j] = linalg.content(w)
    return InducedPair(E, pair.dim - len(E), proj, lam, mult)


def local_group_on_face(pair: CharacteristicPair, E: Iterable[int], v: Iterable[int],
                        reduced: bool = False) -> FiniteAbelianGroup:
    """``G_E(v)``; with ``reduced`` the primitive vectors of the induced pair are used."""
    E, v = frozenset(E), frozenset(v)
    if not E:
        return local_group_at_vertex(pair, v)
    if not (E <= v and pair.polytope.is_vertex(v)):
        raise ValidationError(f"{vertex_label(v)} is not a vertex of the face {sorted(E)}")
    ind = induced_pair(pair, E)
    if ind.rank == 0:
        return FiniteAbelianGroup()
    return FiniteAbelianGroup.cokernel(ind.vertex_matrix(v, reduced))


def lens_group(xi: Sequence[Sequence[int]]) -> FiniteAbelianGroup:
    """``Z^(n+1) / Z(xi)`` for the square matrix whose columns are the ``xi`` vectors."""
    A = linalg.as_matrix(xi)
    r, c = linalg.shape(A)
    if r != c:
        raise DimensionError("lens data must be square")
    snf = linalg.smith_normal_form(A)
    if snf.rank != r:
        raise NotRCharacteristicError(f"xi has rank {snf.rank} < {r}")
    return FiniteAbelianGroup.from_factors(snf.diagonal)
