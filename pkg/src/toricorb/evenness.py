"""Sufficient criterion for even, torsion-free cohomology of a toric orbifold.

For each complex ``B`` occurring in an admissible retraction we collect the
orders ``|G_E(v)|`` over the admissible free vertices ``v`` of ``B`` (``E`` the
top face of ``B`` at ``v``) and ask that the collection be ``r_j``-relatively
prime, ``j = dim B``. A failed check means only that the criterion is not
met; it is not evidence of torsion.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from . import linalg
from .charpair import CharacteristicPair, induced_pair, require_valid
from .errors import EnumerationCapError, NoAdmissibleRetractionError
from .polytope import Subcomplex, delete_vertex
from .retraction import (DEFAULT_MAX_VERTICES, RetractionExplorer, admissible_free_vertices,
                         top_face_at)

SATISFIED = "satisfied"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"


def prime_factors(n: int) -> list[int]:
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _check_k(S: Sequence[int], k: int) -> None:
    if k < 1 or k > len(S):
        raise ValueError(f"k={k} must lie in 1..{len(S)}")
    if any(s < 1 for s in S):
        raise ValueError("entries must be positive integers")


def blocking_prime(S: Sequence[int], k: int) -> int | None:
    """A prime dividing at least ``k`` members of ``S``, if one exists."""
    _check_k(S, k)
    counts: dict[int, int] = {}
    for s in S:
        for p in prime_factors(s):
            counts[p] = counts.get(p, 0) + 1
    bad = sorted(p for p, c in counts.items() if c >= k)
    return bad[0] if bad else None


def k_relatively_prime(S: Sequence[int], k: int) -> bool:
    """Every ``k``-element sub-multiset of ``S`` has gcd 1."""
    return blocking_prime(S, k) is None


def k_relatively_prime_naive(S: Sequence[int], k: int) -> bool:
    _check_k(S, k)
    for sub in combinations(S, k):
        g = 0
        for s in sub:
            g = gcd(g, s)
        if g != 1:
            return False
    return True


@dataclass(frozen=True)
class GcdCollection:
    complex: Subcomplex
    step: int
    dim: int
    vertices: tuple[frozenset, ...]
    orders: tuple[int, ...]
    reduced_orders: tuple[int, ...]
    path: tuple[frozenset, ...]

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "dim": self.dim,
            "maximal_faces": [[i + 1 for i in S] for S in self.complex.key()],
            "vertices": [sorted(i + 1 for i in v) for v in self.vertices],
            "orders": list(self.orders),
            "reduced_orders": list(self.reduced_orders),
            "path": [sorted(i + 1 for i in v) for v in self.path],
        }


def face_order(pair: CharacteristicPair, E: frozenset, v: frozenset) -> tuple[int, int]:
    """``(|G_E(v)|, order for the primitivised induced vectors)``."""
    if not E:
        d = abs(pair.vertex_determinant(v))
        return d, d
    ind = induced_pair(pair, E)
    if ind.rank == 0:
        return 1, 1
    return (abs(linalg.determinant(ind.vertex_matrix(v))),
            abs(linalg.determinant(ind.vertex_matrix(v, reduced=True))))


def _paths(explorer: RetractionExplorer) -> dict[tuple, tuple]:
    """A witness vertex path from ``Q`` to each reachable complex."""
    root = explorer.Q.full_complex()
    paths = {root.key(): ()}
    stack = [root]
    while stack:
        B = stack.pop()
        for v, C in explorer.children(B):
            if explorer.completable(C) and C.key() not in paths:
                paths[C.key()] = paths[B.key()] + (v,)
                stack.append(C)
    return paths


def collections(pair: CharacteristicPair, max_vertices: int | None = DEFAULT_MAX_VERTICES,
                explorer: RetractionExplorer | None = None) -> list[GcdCollection]:
    """One collection per distinct complex of dimension >= 2 in an admissible retraction."""
    require_valid(pair)
    explorer = explorer or RetractionExplorer(pair.polytope, max_vertices)
    complexes = explorer.reachable()
    if not complexes:
        raise NoAdmissibleRetractionError("the polytope has no admissible retraction")
    paths = _paths(explorer)
    nverts = len(pair.polytope.vertices)
    out = []
    for B in complexes:
        if B.dim < 2:
            continue
        vs = admissible_free_vertices(B)
        orders, reduced = [], []
        for v in vs:
            o, r = face_order(pair, top_face_at(B, v), v)
            orders.append(o)
            reduced.append(r)
        out.append(GcdCollection(B, nverts - len(B.vertices) + 1, B.dim, vs,
                                 tuple(orders), tuple(reduced), paths[B.key()]))
    return out


@dataclass(frozen=True)
class CollectionViolation:
    collection: GcdCollection
    k: int
    prime: int
    witness: tuple[int, ...]

    def to_json(self) -> dict:
        return {"collection": self.collection.to_json(), "k": self.k,
                "prime": self.prime, "witness": list(self.witness)}


@dataclass(frozen=True)
class EvennessCertificate:
    verdict: str
    r_vector: tuple[int, ...] | None
    collections: tuple[GcdCollection, ...]
    violations: tuple[CollectionViolation, ...]
    reason: str = ""
    dead_ends: int = 0

    @property
    def satisfied(self) -> bool:
        return self.verdict == SATISFIED

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "r_vector": list(self.r_vector) if self.r_vector else None,
            "collections": [c.to_json() for c in self.collections],
            "violations": [v.to_json() for v in self.violations],
            "dead_end_choices": self.dead_ends,
            "note": "the criterion is sufficient only; 'violated' does not imply torsion",
        }


def evenness_certificate(pair: CharacteristicPair,
                         max_vertices: int | None = DEFAULT_MAX_VERTICES,
                         oracle: bool = False) -> EvennessCertificate:
    require_valid(pair)
    try:
        explorer = RetractionExplorer(pair.polytope, max_vertices)
    except EnumerationCapError as exc:
        return EvennessCertificate(INCONCLUSIVE, None, (), (), reason=str(exc))
    try:
        r = explorer.r_vector()
        cols = collections(pair, explorer=explorer)
    except NoAdmissibleRetractionError as exc:
        return EvennessCertificate(INCONCLUSIVE, None, (), (), reason=str(exc))
    n = pair.dim
    rj = {n - i: r[i] for i in range(len(r))}
    violations = []
    for c in cols:
        k = rj[c.dim]
        p = blocking_prime(c.orders, k)
        if oracle:
            assert (p is None) == k_relatively_prime_naive(c.orders, k)
        if p is not None:
            witness = tuple(s for s in c.orders if s % p == 0)[:k]
            violations.append(CollectionViolation(c, k, p, witness))
    verdict = VIOLATED if violations else SATISFIED
    return EvennessCertificate(verdict, r, tuple(cols), tuple(violations),
                               dead_ends=len(explorer.dead_ends()))
