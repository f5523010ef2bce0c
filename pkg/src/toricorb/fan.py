"""Complete simplicial fans given by primitive rays and maximal cones.

Rays and cones are 0-based internally. Polytopality is assumed, not checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import linalg
from . import polynomial as poly
from .charpair import CharacteristicPair, make_pair
from .errors import DimensionError, ValidationError
from .polytope import build_polytope

Cone = tuple[int, ...]


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[Cone, ...]

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def cone_matrix(self, sigma: Iterable[int]) -> linalg.IntMatrix:
        """``Lambda_sigma``: the rays of ``sigma`` as columns, in index order."""
        return linalg.transpose([self.rays[i] for i in sorted(sigma)])

    def cone_inverse(self, sigma: Iterable[int]) -> linalg.RatMatrix:
        return self._inverses[tuple(sorted(sigma))]

    @cached_property
    def _inverses(self) -> dict:
        return {s: linalg.rational_inverse(self.cone_matrix(s)) for s in self.max_cones}

    @cached_property
    def faces(self) -> frozenset[frozenset[int]]:
        out = set()
        for s in self.max_cones:
            for k in range(len(s) + 1):
                out.update(frozenset(c) for c in combinations(s, k))
        return frozenset(out)

    def is_cone(self, idx: Iterable[int]) -> bool:
        idx = frozenset(idx)
        return any(idx <= frozenset(s) for s in self.max_cones)

    def is_complete(self) -> bool:
        """Combinatorial completeness: every ridge lies in exactly two maximal cones."""
        for s in self.max_cones:
            for r in combinations(s, self.dim - 1):
                r = frozenset(r)
                if sum(1 for t in self.max_cones if r <= frozenset(t)) != 2:
                    return False
        return True

    def stanley_reisner_generators(self) -> list[tuple[int, ...]]:
        """Minimal non-faces."""
        out = []
        for k in range(1, self.dim + 2):
            for c in combinations(range(self.n_rays), k):
                if not self.is_cone(c) and all(self.is_cone(d) for d in combinations(c, k - 1)):
                    out.append(c)
        return out

    def linear_forms(self) -> list[dict]:
        """``l_j = sum_i <lambda_i, e_j> x_i`` for ``j = 1..n``."""
        return [poly.linear([r[j] for r in self.rays]) for j in range(self.dim)]

    def h_vector(self) -> tuple[int, ...]:
        from math import comb
        n = self.dim
        f = [0] * (n + 1)  # f[i] = number of cones with i rays
        for c in self.faces:
            f[len(c)] += 1
        return tuple(sum((-1) ** (k - i) * comb(n - i, k - i) * f[i] for i in range(k + 1))
                     for k in range(n + 1))


def build_fan(rays: Iterable[Iterable[int]], max_cones: Iterable[Iterable[int]],
              dim: int | None = None) -> Fan:
    """Validate and build a simplicial fan (0-based cone indices)."""
    rays_t = tuple(tuple(int(x) for x in r) for r in rays)
    if not rays_t:
        raise ValidationError("a fan needs at least one ray")
    n = dim if dim is not None else len(rays_t[0])
    for i, r in enumerate(rays_t):
        if len(r) != n:
            raise DimensionError(f"ray {i + 1} has length {len(r)}, expected {n}")
        if linalg.content(r) != 1:
            raise ValidationError(f"ray {i + 1} = {list(r)} is not primitive")
    if len(set(rays_t)) != len(rays_t):
        raise ValidationError("rays must be pairwise distinct")
    cones = []
    for c in max_cones:
        s = tuple(sorted(int(i) for i in c))
        if len(set(s)) != n:
            raise ValidationError(f"cone {[i + 1 for i in s]} does not have {n} distinct rays")
        if any(not 0 <= i < len(rays_t) for i in s):
            raise ValidationError(f"cone {[i + 1 for i in s]} references a missing ray")
        cones.append(s)
    cones = tuple(sorted(set(cones)))
    used = set().union(*map(set, cones)) if cones else set()
    if used != set(range(len(rays_t))):
        missing = sorted(set(range(len(rays_t))) - used)
        raise ValidationError(f"rays {[i + 1 for i in missing]} lie in no maximal cone")
    fan = Fan(n, rays_t, cones)
    for s in cones:
        if linalg.determinant(fan.cone_matrix(s)) == 0:
            raise ValidationError(f"cone {[i + 1 for i in s]} is not full-dimensional")
    # no ray may sit inside a maximal cone it does not span
    for s in cones:
        inv = fan.cone_inverse(s)
        for j in range(len(rays_t)):
            if j in s:
                continue
            coords = linalg.matvec(inv, rays_t[j])
            if all(c >= 0 for c in coords):
                raise ValidationError(
                    f"ray {j + 1} lies inside the cone {[i + 1 for i in s]}")
    return fan


def fan_from_json_indices(rays, max_cones_1based) -> Fan:
    return build_fan(rays, [[i - 1 for i in c] for c in max_cones_1based])


def fan_to_pair(fan: Fan) -> CharacteristicPair:
    """Dual simple polytope: rays become facets, maximal cones become vertices."""
    if not fan.is_complete():
        raise ValidationError("fan is not complete (some ridge is not shared by two cones)")
    P = build_polytope(fan.dim, fan.n_rays, fan.max_cones)
    return make_pair(P, fan.rays)


def pair_to_fan(pair: CharacteristicPair) -> Fan:
    return build_fan(pair.lam, [sorted(v) for v in pair.polytope.vertices], dim=pair.dim)


@dataclass(frozen=True)
class IntegralityMatrix:
    cones: tuple[Cone, ...]
    rows: tuple[tuple[int, ...], ...]

    def row(self, sigma: Iterable[int]) -> tuple[int, ...]:
        return self.rows[self.cones.index(tuple(sorted(sigma)))]

    def as_dict(self) -> dict[Cone, tuple[int, ...]]:
        return dict(zip(self.cones, self.rows))

    def to_json(self) -> list[dict]:
        return [{"cone": [i + 1 for i in c], "row": list(r)} for c, r in zip(self.cones, self.rows)]


def integrality_matrix(fan: Fan) -> IntegralityMatrix:
    rows = []
    for s in fan.max_cones:
        inv = fan.cone_inverse(s)
        row = [0] * fan.n_rays
        for k, i in enumerate(s):
            row[i] = linalg.lcm_of_denominators(inv[k])
        rows.append(tuple(row))
    return IntegralityMatrix(fan.max_cones, tuple(rows))


def substitution_images(fan: Fan, sigma: Iterable[int]) -> list[dict]:
    """Image of each ``x_i`` under restriction to ``sigma`` and ``x = Lambda_sigma^{-1} u``."""
    s = tuple(sorted(sigma))
    if s not in fan.max_cones:
        raise ValidationError(f"{[i + 1 for i in s]} is not a maximal cone")
    inv = fan.cone_inverse(s)
    images = [{} for _ in range(fan.n_rays)]
    for k, i in enumerate(s):
        images[i] = poly.linear(inv[k])
    return images


def substitute_on_cone(fan: Fan, sigma: Iterable[int], p: Mapping) -> dict:
    """Restrict ``p(x_1..x_m)`` to ``sigma`` and rewrite it in the coordinates ``u_1..u_n``."""
    return poly.compose_linear(p, substitution_images(fan, sigma), fan.dim)


def pull_back(fan: Fan, p: Mapping) -> dict:
    """Global polynomial ``p(u)`` as a polynomial in ``x`` via ``u_j -> l_j``."""
    return poly.compose_linear(p, fan.linear_forms(), fan.n_rays)


def is_integral_class(fan: Fan, p: Mapping) -> bool:
    return all(poly.is_integral(substitute_on_cone(fan, s, p)) for s in fan.max_cones)


def standard_fans() -> dict[str, Fan]:
    """A few named fans used in docs and tests."""
    return {
        "cp2": build_fan([(1, 0), (0, 1), (-1, -1)], [(0, 1), (0, 2), (1, 2)]),
        "cp2_235": build_fan([(1, 0), (1, 5), (-1, -3)], [(0, 1), (0, 2), (1, 2)]),
        "cp3_3126": build_fan([(1, 0, 0), (1, 2, 0), (1, 2, 3), (-1, -1, -1)],
                              [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]),
    }


def hirzebruch_fan(alpha: int, beta: int) -> Fan:
    return build_fan([(alpha, beta), (-1, 0), (0, 1), (0, -1)], [(0, 2), (1, 2), (1, 3), (0, 3)])


def weighted_projective_fan(rays: Sequence[Sequence[int]]) -> Fan:
    m = len(rays)
    return build_fan(rays, [tuple(j for j in range(m) if j != i) for i in range(m)])

