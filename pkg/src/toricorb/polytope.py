"""Simple polytopes as facet-vertex incidence data.

A vertex is the frozenset of (0-based) facets containing it and a face is
named by its defining facet set ``S``; ``S`` is a face exactly when it is
contained in some vertex. Realizability of the incidence data is never
checked, only the combinatorial sanity conditions in :func:`build_polytope`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable

from .errors import ValidationError

Facets = frozenset[int]


def vertex_label(v: Iterable[int]) -> str:
    """1-based label such as ``v123`` (comma separated once facets reach 10)."""
    idx = sorted(i + 1 for i in v)
    if all(i < 10 for i in idx):
        return "v" + "".join(map(str, idx))
    return "v" + ",".join(map(str, idx))


@dataclass(frozen=True)
class SimplePolytope:
    dim: int
    n_facets: int
    vertices: tuple[Facets, ...]
    _vertex_set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_vertex_set", frozenset(self.vertices))

    def is_face(self, S: Iterable[int]) -> bool:
        S = frozenset(S)
        return any(S <= v for v in self.vertices)

    def face_vertices(self, S: Iterable[int]) -> tuple[Facets, ...]:
        S = frozenset(S)
        return tuple(v for v in self.vertices if S <= v)

    def face_dim(self, S: Iterable[int]) -> int:
        return self.dim - len(frozenset(S))

    def is_vertex(self, v) -> bool:
        return frozenset(v) in self._vertex_set

    @cached_property
    def faces(self) -> frozenset[Facets]:
        """Every face, as its defining facet set (the empty set is the polytope itself)."""
        out = set()
        for v in self.vertices:
            for k in range(self.dim + 1):
                out.update(frozenset(c) for c in combinations(sorted(v), k))
        return frozenset(out)

    def facets_of_face(self, S: Iterable[int]) -> tuple[int, ...]:
        """Facets ``F_j`` (``j`` not in ``S``) meeting the face ``S`` in a facet of it."""
        S = frozenset(S)
        return tuple(j for j in range(self.n_facets) if j not in S and self.is_face(S | {j}))

    def f_vector(self) -> tuple[int, ...]:
        counts = [0] * (self.dim + 1)
        for S in self.faces:
            counts[self.dim - len(S)] += 1
        return tuple(counts)

    def full_complex(self) -> "Subcomplex":
        return Subcomplex(self, frozenset({frozenset()}))


def _neighbours(vertices: tuple[Facets, ...], n: int) -> dict[Facets, list[Facets]]:
    adj: dict[Facets, list[Facets]] = {v: [] for v in vertices}
    for a, b in combinations(vertices, 2):
        if len(a & b) == n - 1:
            adj[a].append(b)
            adj[b].append(a)
    return adj


def build_polytope(n: int, m: int, vertex_facet_sets: Iterable[Iterable[int]]) -> SimplePolytope:
    """Validate raw incidence data (0-based facet indices) and build the polytope."""
    if n < 1:
        raise ValidationError(f"dimension must be positive, got {n}")
    verts = []
    for raw in vertex_facet_sets:
        v = frozenset(int(i) for i in raw)
        if len(v) != n:
            raise ValidationError(
                f"vertex {sorted(raw)} lies on {len(v)} distinct facets, expected {n}")
        bad = [i for i in v if not 0 <= i < m]
        if bad:
            raise ValidationError(f"vertex {sorted(raw)} uses facet indices outside 0..{m - 1}")
        verts.append(v)
    if len(set(verts)) != len(verts):
        raise ValidationError("duplicate vertices")
    if not verts:
        raise ValidationError("no vertices")
    unused = set(range(m)) - set().union(*verts)
    if unused:
        raise ValidationError(f"facets {sorted(i + 1 for i in unused)} contain no vertex")
    verts_t = tuple(sorted(verts, key=lambda v: sorted(v)))
    adj = _neighbours(verts_t, n)
    for v, nb in adj.items():
        if len(nb) != n:
            raise ValidationError(
                f"vertex {vertex_label(v)} has {len(nb)} neighbours; a simple {n}-polytope needs {n}")
    # every ridge (n-1 facets of a vertex) is an edge shared by exactly two vertices
    for v in verts_t:
        for r in combinations(sorted(v), n - 1):
            r = frozenset(r)
            if sum(1 for w in verts_t if r <= w) != 2:
                raise ValidationError(f"edge {sorted(i + 1 for i in r)} is not shared by two vertices")
    seen = {verts_t[0]}
    queue = deque([verts_t[0]])
    while queue:
        for w in adj[queue.popleft()]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != len(verts_t):
        raise ValidationError("vertex-edge graph is disconnected")
    return SimplePolytope(n, m, verts_t)


def simplex(n: int) -> SimplePolytope:
    """The n-simplex: facets ``0..n``, one vertex omitting each facet."""
    facets = range(n + 1)
    return build_polytope(n, n + 1, [[j for j in facets if j != i] for i in facets])


def product(P: SimplePolytope, Q: SimplePolytope) -> SimplePolytope:
    """Facets of ``Q`` are shifted past those of ``P``."""
    verts = [v | frozenset(j + P.n_facets for j in w) for v in P.vertices for w in Q.vertices]
    return build_polytope(P.dim + Q.dim, P.n_facets + Q.n_facets, verts)


def product_of_simplices(dims: Iterable[int]) -> SimplePolytope:
    dims = list(dims)
    out = simplex(dims[0])
    for d in dims[1:]:
        out = product(out, simplex(d))
    return out


def cube(n: int = 3) -> SimplePolytope:
    return product_of_simplices([1] * n)


def polygon(m: int) -> SimplePolytope:
    """m-gon with facets (edges) ``0..m-1`` in cyclic order."""
    return build_polytope(2, m, [[i, (i + 1) % m] for i in range(m)])


def f_vector_of_product(f: tuple[int, ...], g: tuple[int, ...]) -> tuple[int, ...]:
    """Face counts of a product: ``h_k = sum_{i+j=k} f_i g_j``."""
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return tuple(out)


def simplex_face_count(n: int, codim: int) -> int:
    return comb(n + 1, codim)


@dataclass(frozen=True)
class Subcomplex:
    """A polytopal subcomplex of ``parent`` stored by its maximal faces.

    ``maximal`` holds defining facet sets, so a *smaller* set is a *bigger*
    face. The faces of the complex are all faces of the parent that contain
    (as facet sets) one of the maximal sets.
    """

    parent: SimplePolytope
    maximal: frozenset[Facets]

    @property
    def dim(self) -> int:
        if not self.maximal:
            return -1
        return self.parent.dim - min(len(S) for S in self.maximal)

    def contains_face(self, T: Iterable[int]) -> bool:
        T = frozenset(T)
        return self.parent.is_face(T) and any(S <= T for S in self.maximal)

    @cached_property
    def vertices(self) -> tuple[Facets, ...]:
        return tuple(v for v in self.parent.vertices if any(S <= v for S in self.maximal))

    @cached_property
    def faces(self) -> frozenset[Facets]:
        return frozenset(T for T in self.parent.faces if any(S <= T for S in self.maximal))

    def maximal_faces_at(self, v: Facets) -> tuple[Facets, ...]:
        return tuple(sorted((S for S in self.maximal if S <= v), key=sorted))

    def f_vector(self) -> tuple[int, ...]:
        d = self.dim
        counts = [0] * (d + 1)
        for T in self.faces:
            counts[self.parent.dim - len(T)] += 1
        return tuple(counts)

    def key(self) -> tuple:
        """Canonical hashable description (sorted maximal facet sets)."""
        return tuple(sorted(tuple(sorted(S)) for S in self.maximal))

    def is_closed(self) -> bool:
        """Polytopal-complex axioms, checked on the face set."""
        faces = self.faces
        for T in faces:
            for U in faces:
                meet = T | U
                if self.parent.is_face(meet) and meet not in faces:
                    return False
            for j in self.parent.facets_of_face(T):
                if T | {j} not in faces:
                    return False
        return True


def delete_vertex(C: Subcomplex, v: Iterable[int]) -> Subcomplex:
    """Remove every face of ``C`` containing the vertex ``v``."""
    v = frozenset(v)
    if v not in C.vertices:
        raise ValidationError(f"{vertex_label(v)} is not a vertex of the complex")
    P = C.parent
    candidates = set()
    for S in C.maximal:
        if not S <= v:
            candidates.add(S)
            continue
        for f in range(P.n_facets):
            if f not in v and P.is_face(S | {f}):
                candidates.add(S | {f})
    minimal = frozenset(S for S in candidates if not any(T < S for T in candidates))
    return Subcomplex(P, minimal)
