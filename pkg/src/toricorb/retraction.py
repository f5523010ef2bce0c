"""Retraction sequences of simple polytopes.

A vertex ``v`` is *free* in a complex ``B`` when exactly one maximal face of
``B`` contains it and that face has dimension ``dim B``. It is *admissible
free* when deleting it leaves a complex that still has a free vertex (the
local definition); :meth:`RetractionExplorer.dead_ends` separately reports the
admissible free vertices from which no complete retraction exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator

from .errors import EnumerationCapError, NoAdmissibleRetractionError, ValidationError
from .polytope import SimplePolytope, Subcomplex, delete_vertex, product, vertex_label

DEFAULT_MAX_VERTICES = 12


def _sorted_vertices(vs) -> tuple:
    return tuple(sorted(vs, key=sorted))


def free_vertices(B: Subcomplex) -> tuple[frozenset, ...]:
    d = B.dim
    out = []
    for v in B.vertices:
        at = B.maximal_faces_at(v)
        if len(at) == 1 and B.parent.dim - len(at[0]) == d:
            out.append(v)
    return _sorted_vertices(out)


def is_free(B: Subcomplex, v) -> bool:
    return frozenset(v) in free_vertices(B)


def top_face_at(B: Subcomplex, v) -> frozenset:
    """The unique top-dimensional face of ``B`` containing the free vertex ``v``."""
    at = B.maximal_faces_at(frozenset(v))
    if len(at) != 1 or B.parent.dim - len(at[0]) != B.dim:
        raise ValidationError(f"{vertex_label(v)} is not a free vertex")
    return at[0]


def admissible_free_vertices(B: Subcomplex) -> tuple[frozenset, ...]:
    if len(B.vertices) <= 1:
        return ()
    return tuple(v for v in free_vertices(B) if free_vertices(delete_vertex(B, v)))


@dataclass(frozen=True)
class RetractionStep:
    B: Subcomplex
    E: frozenset
    b: frozenset

    @property
    def dim(self) -> int:
        return self.B.dim

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "maximal_faces": [[i + 1 for i in S] for S in self.B.key()],
            "face": sorted(i + 1 for i in self.E),
            "vertex": sorted(i + 1 for i in self.b),
        }


@dataclass(frozen=True)
class RetractionSequence:
    steps: tuple[RetractionStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def polytope(self) -> SimplePolytope:
        return self.steps[0].B.parent

    @property
    def vertices(self) -> tuple[frozenset, ...]:
        return tuple(s.b for s in self.steps)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.steps)

    @property
    def is_complete(self) -> bool:
        last = self.steps[-1].B
        return len(last.vertices) == 1 and len(self.steps) == len(self.polytope.vertices)

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.steps]


def sequence_from_vertices(Q: SimplePolytope, order) -> RetractionSequence:
    """Build a retraction by deleting vertices in ``order``, checking freeness each step."""
    B = Q.full_complex()
    steps = []
    order = [frozenset(v) for v in order]
    for i, b in enumerate(order):
        if b not in B.vertices:
            raise ValidationError(f"{vertex_label(b)} is not in B_{i + 1}")
        E = top_face_at(B, b)
        steps.append(RetractionStep(B, E, b))
        if i + 1 < len(order):
            B = delete_vertex(B, b)
    return RetractionSequence(tuple(steps))


@dataclass(frozen=True)
class DimensionProfile:
    n: int
    k: dict
    p: dict
    dims: tuple[int, ...]


def dimension_profile(f: tuple[int, ...]) -> DimensionProfile:
    """Per-step dimensions of any admissible retraction, from the f-vector alone."""
    n = len(f) - 1
    k = {n: 1}
    p = {n: 1}
    for j in range(n):
        d = n - j - 1
        k[d] = f[d] - sum(comb(n - i, d) * k[n - i] for i in range(j + 1))
        p[d] = p[d + 1] + k[d]
    dims = []
    for ell in range(1, p[0] + 1):
        if ell == 1:
            dims.append(n)
            continue
        dims.append(next(d for d in range(n - 1, -1, -1) if p[d + 1] < ell <= p[d]))
    return DimensionProfile(n, k, p, tuple(dims))


class RetractionExplorer:
    """Memoised search over the complexes reachable by deleting free vertices."""

    def __init__(self, Q: SimplePolytope, max_vertices: int | None = DEFAULT_MAX_VERTICES):
        if max_vertices is not None and len(Q.vertices) > max_vertices:
            raise EnumerationCapError(
                f"{len(Q.vertices)} vertices exceeds the exhaustive-search cap of {max_vertices}")
        self.Q = Q
        self._complexes: dict[tuple, Subcomplex] = {}
        self._children: dict[tuple, tuple] = {}
        self._completable: dict[tuple, bool] = {}

    def _intern(self, B: Subcomplex) -> tuple:
        key = B.key()
        self._complexes.setdefault(key, B)
        return key

    def children(self, B: Subcomplex) -> tuple[tuple[frozenset, Subcomplex], ...]:
        key = self._intern(B)
        if key not in self._children:
            if len(B.vertices) <= 1:
                self._children[key] = ()
            else:
                out = []
                for v in free_vertices(B):
                    C = delete_vertex(B, v)
                    out.append((v, self._complexes[self._intern(C)]))
                self._children[key] = tuple(out)
        return self._children[key]

    def completable(self, B: Subcomplex) -> bool:
        key = self._intern(B)
        if key not in self._completable:
            if len(B.vertices) == 1:
                ok = True
            else:
                ok = any(self.completable(C) for _, C in self.children(B))
            self._completable[key] = ok
        return self._completable[key]

    def sequences(self, start=None, limit: int | None = None) -> Iterator[RetractionSequence]:
        """Depth-first stream of all admissible retractions, vertices tried in index order."""
        Q = self.Q.full_complex()
        starts = [frozenset(start)] if start is not None else None
        count = 0

        def rec(B: Subcomplex, prefix: list, choices):
            nonlocal count
            if len(B.vertices) == 1:
                (b,) = B.vertices
                yield RetractionSequence(tuple(prefix + [RetractionStep(B, top_face_at(B, b), b)]))
                return
            for v, C in self.children(B):
                if choices is not None and v not in choices:
                    continue
                if not self.completable(C):
                    continue
                step = RetractionStep(B, top_face_at(B, v), v)
                yield from rec(C, prefix + [step], None)

        for seq in rec(Q, [], starts):
            yield seq
            count += 1
            if limit is not None and count >= limit:
                return

    def reachable(self) -> tuple[Subcomplex, ...]:
        """Every complex that occurs in some admissible retraction, in discovery order."""
        root = self.Q.full_complex()
        if not self.completable(root):
            return ()
        seen = {self._intern(root): root}
        stack = [root]
        while stack:
            B = stack.pop()
            for _, C in self.children(B):
                if self.completable(C) and C.key() not in seen:
                    seen[C.key()] = C
                    stack.append(C)
        return tuple(sorted(seen.values(), key=lambda B: (-len(B.vertices), B.key())))

    def r_vector(self) -> tuple[int, ...]:
        """``(r_n, ..., r_2)``: joint minimum over all admissible retractions and steps."""
        complexes = self.reachable()
        if not complexes:
            raise NoAdmissibleRetractionError("the polytope has no admissible retraction")
        n = self.Q.dim
        best: dict[int, int] = {}
        for B in complexes:
            if B.dim >= 2:
                c = len(admissible_free_vertices(B))
                best[B.dim] = min(best.get(B.dim, c), c)
        return tuple(best[j] for j in range(n, 1, -1))

    def dead_ends(self) -> list[tuple[Subcomplex, frozenset]]:
        """Admissible free vertices whose deletion cannot be completed to a retraction."""
        out = []
        for B in self.reachable():
            for v in admissible_free_vertices(B):
                if not self.completable(delete_vertex(B, v)):
                    out.append((B, v))
        return out


def enumerate_admissible_retractions(Q: SimplePolytope, start=None, limit: int | None = None,
                                     max_vertices: int | None = DEFAULT_MAX_VERTICES
                                     ) -> Iterator[RetractionSequence]:
    return RetractionExplorer(Q, max_vertices).sequences(start, limit)


def r_vector(Q: SimplePolytope, max_vertices: int | None = DEFAULT_MAX_VERTICES) -> tuple[int, ...]:
    return RetractionExplorer(Q, max_vertices).r_vector()


def product_order(retP: RetractionSequence, retQ: RetractionSequence) -> list[tuple[int, int]]:
    """Index pairs ``(a, b)`` (0-based) of ``V(P) x V(Q)`` in increasing order.

    Vertices whose stages have larger total dimension come first; ties are
    broken by the ``Q`` index and then the ``P`` index, so the order starts
    at ``(x_1, y_1)``.
    """
    dp, dq = retP.dims, retQ.dims
    pairs = [(a, b) for a in range(len(dp)) for b in range(len(dq))]
    return sorted(pairs, key=lambda ab: (-(dp[ab[0]] + dq[ab[1]]), ab[1], ab[0]))


def product_retraction(retP: RetractionSequence, retQ: RetractionSequence) -> RetractionSequence:
    if not (retP.is_complete and retQ.is_complete):
        raise ValidationError("product_retraction needs two complete retractions")
    P, Q = retP.polytope, retQ.polytope
    PQ = product(P, Q)
    shift = P.n_facets
    xs, ys = retP.vertices, retQ.vertices
    order = [xs[a] | frozenset(j + shift for j in ys[b]) for a, b in product_order(retP, retQ)]
    seq = sequence_from_vertices(PQ, order)
    for step in seq.steps[:-1]:
        if step.b not in admissible_free_vertices(step.B):
            raise ValidationError(f"{vertex_label(step.b)} is not admissible free")
    return seq
