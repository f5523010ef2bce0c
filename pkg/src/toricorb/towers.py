"""Weighted projective towers and orbifold Hirzebruch surfaces.

A tower is given by weight vectors ``chi^i`` (stage ``i`` is a weighted
projective space of dimension ``n_i = len(chi^i) - 1``) and twist vectors
``c^i_j`` for ``j < i``. Indices ``i, j`` are 1-based, as in the twist keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Mapping, Sequence

from . import linalg
from .charpair import CharacteristicPair, make_pair, require_valid
from .errors import ValidationError
from .evenness import evenness_certificate
from .fan import hirzebruch_fan, integrality_matrix, pair_to_fan
from .gradedring import GradedRing, ring_presentation
from .polytope import product_of_simplices


@dataclass(frozen=True)
class TowerSpec:
    weights: tuple[tuple[int, ...], ...]
    twists: dict = field(hash=False)

    @property
    def k(self) -> int:
        return len(self.weights)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(w) - 1 for w in self.weights)

    def twist(self, i: int, j: int) -> tuple[int, ...]:
        return self.twists[(i, j)]


def make_tower(weights: Sequence[Sequence[int]], twists: Mapping | None = None) -> TowerSpec:
    """Validate weights and twists; missing twists default to zero vectors."""
    ws = tuple(tuple(int(x) for x in w) for w in weights)
    if not ws:
        raise ValidationError("a tower needs at least one stage")
    for i, w in enumerate(ws, 1):
        if len(w) < 2:
            raise ValidationError(f"stage {i} needs at least two weights")
        if any(x <= 0 for x in w):
            raise ValidationError(f"weights of stage {i} must be positive")
        if linalg.content(w) != 1:
            raise ValidationError(f"weights of stage {i} have gcd {linalg.content(w)} != 1")
    tw = {}
    raw = dict(twists or {})
    for key in raw:
        i, j = _parse_key(key)
        if not 1 <= j < i <= len(ws):
            raise ValidationError(f"twist index {key} must satisfy 1 <= j < i <= {len(ws)}")
    for i in range(2, len(ws) + 1):
        for j in range(1, i):
            v = raw.get((i, j), raw.get(f"{i},{j}", (0,) * len(ws[i - 1])))
            v = tuple(int(x) for x in v)
            if len(v) != len(ws[i - 1]):
                raise ValidationError(f"twist ({i},{j}) has length {len(v)}, expected {len(ws[i - 1])}")
            tw[(i, j)] = v
    return TowerSpec(ws, tw)


def _parse_key(key) -> tuple[int, int]:
    if isinstance(key, str):
        a, b = key.split(",")
        return int(a), int(b)
    i, j = key
    return int(i), int(j)


def _offsets(sizes: Sequence[int]) -> list[int]:
    out = [0]
    for s in sizes:
        out.append(out[-1] + s)
    return out


def phi_matrix(spec: TowerSpec, stages: int | None = None) -> linalg.IntMatrix:
    """``Phi_k`` (or the upper-left ``Phi_stages``) with one column per stage."""
    k = spec.k if stages is None else stages
    rows = []
    for i in range(1, k + 1):
        for a in range(len(spec.weights[i - 1])):
            row = []
            for j in range(1, k + 1):
                if j < i:
                    row.append(spec.twist(i, j)[a])
                elif j == i:
                    row.append(spec.weights[i - 1][a])
                else:
                    row.append(0)
            rows.append(tuple(row))
    return tuple(rows)


def wps_char_matrix(chi: Sequence[int]) -> linalg.IntMatrix:
    """HNF basis of the integer vectors orthogonal to ``chi``, as rows."""
    chi = tuple(int(x) for x in chi)
    if linalg.content(chi) != 1:
        raise ValidationError(f"weights {list(chi)} are not coprime")
    return linalg.integer_kernel((chi,)).vectors


@dataclass(frozen=True)
class TowerCharMatrix:
    spec: TowerSpec
    raw: linalg.IntMatrix
    primitive: linalg.IntMatrix
    multipliers: tuple[int, ...]

    def pair(self, reduced: bool = True) -> CharacteristicPair:
        M = self.primitive if reduced else self.raw
        P = product_of_simplices(self.spec.dims)
        return make_pair(P, linalg.transpose(M))

    def to_json(self) -> dict:
        return {"raw": [list(r) for r in self.raw], "primitive": [list(r) for r in self.primitive],
                "column_multipliers": list(self.multipliers)}


def tower_char_matrix(spec: TowerSpec) -> TowerCharMatrix:
    """Solve ``Lambda . Phi_k = 0`` block by block.

    Diagonal blocks come from :func:`wps_char_matrix`; the block ``B^i_j`` is
    found for ``j = i-1, ..., 1`` from
    ``B^i_j chi^j = -(sum_{l=j+1}^{i-1} B^i_l c^l_j + Lambda_i c^i_j)``, one
    row at a time.
    """
    k = spec.k
    sizes_r = spec.dims
    sizes_c = tuple(n + 1 for n in sizes_r)
    ro, co = _offsets(sizes_r), _offsets(sizes_c)
    Lam = [[0] * co[-1] for _ in range(ro[-1])]
    diag = [wps_char_matrix(w) for w in spec.weights]
    for i in range(1, k + 1):
        blocks: dict[int, list[list[int]]] = {i: [list(r) for r in diag[i - 1]]}
        for j in range(i - 1, 0, -1):
            rhs = [0] * sizes_r[i - 1]
            for l in range(j + 1, i + 1):
                c = spec.twist(l, j)
                for r in range(sizes_r[i - 1]):
                    rhs[r] -= sum(x * y for x, y in zip(blocks[l][r], c))
            blocks[j] = [list(linalg.solve_diophantine(spec.weights[j - 1], t)) for t in rhs]
        for j, blk in blocks.items():
            for r, row in enumerate(blk):
                Lam[ro[i - 1] + r][co[j - 1]:co[j]] = row
    raw = linalg.as_matrix(Lam)
    if any(any(row) for row in linalg.matmul(raw, phi_matrix(spec))):
        raise AssertionError("Lambda . Phi_k != 0")
    cols = linalg.transpose(raw)
    mults = tuple(linalg.content(c) for c in cols)
    prim = linalg.transpose([tuple(x // m for x in c) for c, m in zip(cols, mults)])
    return TowerCharMatrix(spec, raw, prim, mults)


def _stage_spec(spec: TowerSpec, stages: int) -> TowerSpec:
    return TowerSpec(spec.weights[:stages],
                     {key: v for key, v in spec.twists.items() if key[0] <= stages})


def singular_lcm(spec: TowerSpec, stages: int) -> int:
    """lcm of the vertex local-group orders of the first ``stages`` stages."""
    if stages == 0:
        return 1
    sub = _stage_spec(spec, stages)
    pair = tower_char_matrix(sub).pair(reduced=False)
    out = 1
    for v in pair.polytope.vertices:
        out = lcm(out, abs(pair.vertex_determinant(v)))
    return out


@dataclass(frozen=True)
class FibrationReport:
    stage: int
    genuine: bool
    ell: int
    offending: tuple[tuple[int, int, int, int], ...]  # (alpha, beta, value, remainder)

    def to_json(self) -> dict:
        return {"stage": self.stage, "genuine": self.genuine, "ell": self.ell,
                "offending_twists": [
                    {"alpha": a, "beta": b, "value": v, "remainder": r}
                    for a, b, v, r in self.offending],
                "note": "divisibility is a sufficient condition; failure is not a proof of non-fibration"}


def fibration_check(spec: TowerSpec, i: int) -> FibrationReport:
    if not 2 <= i <= spec.k:
        raise ValidationError(f"stage {i} outside 2..{spec.k}")
    ell = singular_lcm(spec, i - 1)
    bad = []
    for beta in range(1, i):
        for alpha, c in enumerate(spec.twist(i, beta)):
            if c % ell:
                bad.append((alpha, beta, c, c % ell))
    return FibrationReport(i, not bad, ell, tuple(bad))


# -- orbifold Hirzebruch surfaces --------------------------------------------


@dataclass(frozen=True)
class HirzebruchParams:
    alpha: int
    beta: int
    raw: tuple[int, ...] | None = None  # (a1, b1, a2, b2, c, d)


def hirzebruch_params(a1: int, b1: int, a2: int, b2: int, c: int, d: int) -> HirzebruchParams:
    if gcd(a1, b1) != 1 or gcd(a2, b2) != 1:
        raise ValidationError("need gcd(a1, b1) = gcd(a2, b2) = 1")
    if b1 == 0:
        raise ValidationError("b1 must be nonzero")
    t = a2 * d - b2 * c
    g = gcd(b1, t)
    return HirzebruchParams(b1 // g, t // g, (a1, b1, a2, b2, c, d))


def packed_spec(a1: int, b1: int, a2: int, b2: int, c: int, d: int) -> TowerSpec:
    return make_tower([(a1, b1), (a2, b2)], {(2, 1): (c, d)})


def closed_form_packed_lambda(a1: int, b1: int, a2: int, b2: int, c: int, d: int) -> linalg.IntMatrix:
    return ((b1, -a1, 0, 0), (a2 * d - b2 * c, 0, a1 * b2, -a1 * a2))


def reduced_hirzebruch_matrix(alpha: int, beta: int) -> linalg.IntMatrix:
    return ((alpha, -1, 0, 0), (beta, 0, 1, -1))


def hirzebruch_generators(alpha: int) -> list[tuple[str, int, dict]]:
    """``x = alpha x1``, ``y = alpha x4``, ``z = x2 x4``."""
    return [("x", 1, {(1, 0, 0, 0): alpha}), ("y", 1, {(0, 0, 0, 1): alpha}),
            ("z", 2, {(0, 1, 0, 1): 1})]


def hirzebruch(params: HirzebruchParams, max_vertices: int | None = None) -> dict:
    """Full report for ``X(alpha, beta)``: pair, certificate, integrality matrix and ring."""
    a, b = params.alpha, params.beta
    if a <= 0:
        raise ValidationError("alpha must be positive")
    if gcd(a, b) != 1:
        raise ValidationError("alpha and beta must be coprime")
    fan = hirzebruch_fan(a, b)
    pair = require_valid(make_pair(product_of_simplices([1, 1]), linalg.transpose(
        reduced_hirzebruch_matrix(a, b))))
    cert = evenness_certificate(pair, max_vertices=max_vertices or 12)
    ring = GradedRing(fan)
    G = integrality_matrix(fan)
    auto = ring_presentation(fan, cert.satisfied, ring=ring)
    xyz = ring_presentation(fan, cert.satisfied, generators=hirzebruch_generators(a), ring=ring)
    out = {
        "alpha": a,
        "beta": b,
        "reduced_matrix": [list(r) for r in reduced_hirzebruch_matrix(a, b)],
        "vertex_orders": [abs(pair.vertex_determinant(v)) for v in pair.polytope.vertices],
        "certificate": cert,
        "integrality": G,
        "ranks": ring.ranks(),
        "presentation": auto,
        "xyz_presentation": xyz,
        "fan": fan,
    }
    if params.raw is not None:
        spec = packed_spec(*params.raw)
        out["tower"] = tower_char_matrix(spec)
        out["fibration"] = fibration_check(spec, 2)
    return out


def tower_pair(spec: TowerSpec) -> CharacteristicPair:
    return require_valid(tower_char_matrix(spec).pair())


def tower_fan(spec: TowerSpec):
    return pair_to_fan(tower_pair(spec))
