"""Integral cohomology of a toric orbifold from its fan.

Degree ``d`` of the Stanley-Reisner ring has a basis of face-supported
monomials. ``L_d`` is the lattice of integer combinations that become
integral under every cone substitution ``x = Lambda_sigma^{-1} u``; ``J_d`` is
the degree-``d`` part of the ideal of ``L`` generated by the linear forms
``l_j``. The cohomology group ``H^{2d}`` is ``L_d / J_d``.

Elements of a degree are integer vectors over :func:`monomial_basis`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from math import lcm
from typing import Sequence

from . import linalg
from . import polynomial as poly
from .errors import ValidationError
from .fan import Fan, substitution_images

UNCONDITIONAL = "unconditional"
CONDITIONAL = "conditional"
MODULE_ONLY = "module-only"


@dataclass(frozen=True)
class MonomialBasis:
    degree: int
    monomials: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.monomials)

    @property
    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.monomials)}

    def to_poly(self, vec: Sequence[int]) -> dict:
        return {e: c for e, c in zip(self.monomials, vec) if c}

    def from_poly(self, p: dict) -> tuple[int, ...]:
        idx = self.index
        out = [0] * len(self.monomials)
        for e, c in p.items():
            if e in idx:
                out[idx[e]] += c
        return tuple(out)


def _support(e) -> tuple[int, ...]:
    return tuple(i for i, k in enumerate(e) if k)


def monomial_basis(fan: Fan, d: int) -> MonomialBasis:
    if d < 0:
        raise ValueError("degree must be non-negative")
    return MonomialBasis(d, tuple(e for e in poly.monomials(fan.n_rays, d) if fan.is_cone(_support(e))))


def substitution_matrix(fan: Fan, d: int) -> tuple[tuple, ...]:
    """Rows indexed by (cone, u-monomial), columns by the degree-``d`` monomial basis."""
    basis = monomial_basis(fan, d)
    umons = poly.monomials(fan.dim, d)
    rows = []
    for s in fan.max_cones:
        images = substitution_images(fan, s)
        cols = [poly.compose_linear({e: 1}, images, fan.dim) for e in basis.monomials]
        for u in umons:
            rows.append(tuple(c.get(u, 0) for c in cols))
    return tuple(rows)


def congruence_lattice(A: Sequence[Sequence[int]], q: int, ncols: int) -> linalg.IntMatrix:
    """HNF basis of ``{c in Z^ncols : A c = 0 mod q}``."""
    if not A or q == 1:
        return linalg.identity(ncols)
    snf = linalg.smith_normal_form(A)
    diag = snf.diagonal
    vecs = []
    for i in range(ncols):
        col = tuple(snf.V[r][i] for r in range(ncols))
        d = diag[i] if i < len(diag) else 0
        mult = q // linalg.content((q, d)) if d else 1
        vecs.append(tuple(mult * x for x in col))
    return linalg.hermite_normal_form(vecs, ncols)


@dataclass(frozen=True)
class IntegralityLattice:
    basis: MonomialBasis
    hnf: linalg.IntMatrix

    @property
    def degree(self) -> int:
        return self.basis.degree

    def __contains__(self, vec) -> bool:
        return linalg.hnf_solve(self.hnf, vec) is not None

    def index(self) -> int:
        out = 1
        for i, row in enumerate(self.hnf):
            out *= row[i]
        return out


class GradedRing:
    """Per-degree lattices and quotients for one fan, memoised by degree."""

    def __init__(self, fan: Fan):
        self.fan = fan
        self.basis = lru_cache(maxsize=None)(lambda d: monomial_basis(fan, d))
        self._lattice = lru_cache(maxsize=None)(self._compute_lattice)
        self._ideal = lru_cache(maxsize=None)(self._compute_ideal)
        self._module = lru_cache(maxsize=None)(self._compute_module)

    # -- lattices ---------------------------------------------------------

    def _compute_lattice(self, d: int) -> IntegralityLattice:
        basis = self.basis(d)
        T = substitution_matrix(self.fan, d)
        q = 1
        for row in T:
            q = lcm(q, linalg.lcm_of_denominators(row))
        A = tuple(tuple(int(x * q) for x in row) for row in T)
        return IntegralityLattice(basis, congruence_lattice(A, q, len(basis)))

    def integrality_lattice(self, d: int) -> IntegralityLattice:
        return self._lattice(d)

    def multiply(self, a: Sequence[int], da: int, b: Sequence[int], db: int) -> tuple[int, ...]:
        """Product in the Stanley-Reisner ring (non-face monomials vanish)."""
        p = poly.mul(self.basis(da).to_poly(a), self.basis(db).to_poly(b))
        return self.basis(da + db).from_poly(p)

    def _compute_ideal(self, d: int) -> linalg.IntMatrix:
        N = len(self.basis(d))
        if d == 0:
            return ()
        lower = self.integrality_lattice(d - 1).hnf
        forms = [self.basis(1).from_poly(f) for f in self.fan.linear_forms()]
        gens = [self.multiply(f, 1, p, d - 1) for f in forms for p in lower]
        return linalg.hermite_normal_form(gens, N)

    def linear_ideal_piece(self, d: int) -> linalg.IntMatrix:
        """HNF basis of ``J_d`` over the monomial basis."""
        return self._ideal(d)

    # -- quotients --------------------------------------------------------

    def _compute_module(self, d: int) -> "GradedModule":
        if d > self.fan.dim:
            return GradedModule(d, self.basis(d), (), (), (), (), (), None)
        L = self.integrality_lattice(d)
        J = self.linear_ideal_piece(d)
        N = len(L.basis)
        K = []
        for v in J:
            c = linalg.hnf_solve(L.hnf, v)
            if c is None:
                raise AssertionError("linear ideal escaped the integrality lattice")
            K.append(c)
        H = linalg.hermite_normal_form(K, N)
        pivots = [next(i for i, x in enumerate(r) if x) for r in H]
        if all(H[k][p] == 1 for k, p in enumerate(pivots)):
            free = tuple(i for i in range(N) if i not in pivots)
            gens = tuple(tuple(int(i == j) for j in range(N)) for i in free)
            return GradedModule(d, L.basis, L.hnf, J, gens, (), (), ("hnf", H, free))
        snf = linalg.smith_normal_form(K)
        diag = list(snf.diagonal) + [0] * (N - len(snf.diagonal))
        free_idx = [i for i in range(N) if diag[i] == 0]
        tors_idx = [i for i in range(N) if diag[i] > 1]
        gens = tuple(snf.V_inv[i] for i in free_idx)
        tgens = tuple(snf.V_inv[i] for i in tors_idx)
        torsion = tuple(diag[i] for i in tors_idx)
        return GradedModule(d, L.basis, L.hnf, J, gens, tgens, torsion,
                            ("snf", snf.V, free_idx, tors_idx))

    def quotient_module(self, d: int) -> "GradedModule":
        return self._module(d)

    def ranks(self, top: int | None = None) -> tuple[int, ...]:
        top = self.fan.dim if top is None else top
        return tuple(self.quotient_module(d).rank for d in range(top + 1))


@dataclass(frozen=True)
class GradedModule:
    """``L_d / J_d``: free generators, torsion generators and a coordinate map.

    Generator vectors are expressed in the HNF basis of ``L_d``; use
    :meth:`generator_polys` for polynomials in ``x``.
    """

    degree: int
    basis: MonomialBasis
    lattice: linalg.IntMatrix
    ideal: linalg.IntMatrix
    generators: tuple
    torsion_generators: tuple
    torsion: tuple[int, ...]
    _coords: tuple | None = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def is_zero(self) -> bool:
        return not self.generators and not self.torsion

    def _to_poly(self, lvec) -> dict:
        vec = [sum(c * row[i] for c, row in zip(lvec, self.lattice)) for i in range(len(self.basis))]
        return self.basis.to_poly(vec)

    def generator_polys(self) -> list[dict]:
        return [self._to_poly(g) for g in self.generators]

    def torsion_generator_polys(self) -> list[dict]:
        return [self._to_poly(g) for g in self.torsion_generators]

    def lattice_coords(self, vec: Sequence[int]) -> tuple[int, ...]:
        c = linalg.hnf_solve(self.lattice, vec)
        if c is None:
            raise ValidationError(f"element is not integral in degree {self.degree}")
        return c

    def coordinates(self, vec: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """``(free coordinates, torsion coordinates)`` of the class of ``vec``."""
        if self._coords is None:
            return (), ()
        x = self.lattice_coords(vec)
        if self._coords[0] == "hnf":
            _, H, free = self._coords
            r = linalg.hnf_reduce(H, x)
            return tuple(r[i] for i in free), ()
        _, V, free_idx, tors_idx = self._coords
        y = linalg.matvec(linalg.transpose(V), x)
        return (tuple(y[i] for i in free_idx),
                tuple(y[i] % t for i, t in zip(tors_idx, self.torsion)))

    def contains_integral(self, vec) -> bool:
        return linalg.hnf_solve(self.lattice, vec) is not None if self.lattice else not any(vec)

    def to_json(self, names: Sequence[str] | None = None) -> dict:
        names = names or [f"x{i + 1}" for i in range(len(self.basis.monomials[0]) if self.basis.monomials else 0)]
        return {
            "degree": 2 * self.degree,
            "rank": self.rank,
            "torsion": list(self.torsion),
            "generators": [poly.to_str(p, names) for p in self.generator_polys()],
        }


# -- presentations -----------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int  # polynomial degree; cohomological degree is twice this
    poly: dict = field(hash=False)

    def to_json(self, xnames) -> dict:
        return {"name": self.name, "degree": 2 * self.degree, "class": poly.to_str(self.poly, xnames)}


@dataclass(frozen=True)
class RingPresentation:
    generators: tuple[Generator, ...]
    relations: tuple[dict, ...]
    modules: tuple[GradedModule, ...]
    flag: str
    structure_constants: dict = field(hash=False)
    notes: tuple[str, ...] = ()

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def relation_strings(self) -> list[str]:
        return [poly.to_str(r, self.names) for r in self.relations]

    def has_relation(self, rel: dict) -> bool:
        """Whether ``rel`` (over generator exponents) is one of the relations up to sign."""
        rel = {tuple(e): c for e, c in rel.items() if c}
        neg = {e: -c for e, c in rel.items()}
        return any(r == rel or r == neg for r in self.relations)

    def to_json(self, xnames: Sequence[str]) -> dict:
        return {
            "flag": self.flag,
            "generators": [g.to_json(xnames) for g in self.generators],
            "relations": self.relation_strings(),
            "relation_coefficients": [
                [{"exponents": list(e), "coefficient": c} for e, c in sorted(r.items(), reverse=True)]
                for r in self.relations],
            "modules": [m.to_json(xnames) for m in self.modules],
            "structure_constants": [
                {"product": k, "coordinates": list(v)} for k, v in self.structure_constants.items()],
            "notes": list(self.notes),
        }


def _gen_monomials(degrees: Sequence[int], D: int) -> list[tuple[int, ...]]:
    """Exponent vectors over the generators with weighted degree ``D``, descending lex."""
    s = len(degrees)
    out = []

    def rec(i, left, acc):
        if i == s:
            if left == 0:
                out.append(tuple(acc))
            return
        for k in range(left // degrees[i], -1, -1):
            rec(i + 1, left - k * degrees[i], acc + [k])

    rec(0, D, [])
    return sorted(out, reverse=True)


def _evaluate(ring: GradedRing, gens: Sequence[Generator], e: Sequence[int]) -> tuple[int, ...]:
    D = sum(k * g.degree for k, g in zip(e, gens))
    basis = ring.basis(D)
    p = poly.const(1, ring.fan.n_rays)
    for k, g in zip(e, gens):
        for _ in range(k):
            p = poly.mul(p, g.poly)
    return basis.from_poly(p)


def _cokernel_new(images: list, rank: int) -> list[tuple[int, ...]]:
    """Coordinate vectors completing the span of ``images`` to generate ``Z^rank``."""
    if rank == 0:
        return []
    H = linalg.hermite_normal_form(images, rank) if images else ()
    pivots = [next(i for i, x in enumerate(r) if x) for r in H]
    if all(H[k][p] == 1 for k, p in enumerate(pivots)):
        return [tuple(int(i == j) for j in range(rank)) for i in range(rank) if i not in pivots]
    snf = linalg.smith_normal_form(images)
    diag = list(snf.diagonal) + [0] * (rank - len(snf.diagonal))
    return [snf.V_inv[i] for i in range(rank) if diag[i] != 1]


def ring_presentation(fan: Fan, certified: bool | None = None,
                      generators: Sequence[tuple[str, int, dict]] | None = None,
                      ring: GradedRing | None = None) -> RingPresentation:
    """Generators and relations for ``L / J``.

    Without ``generators`` they are chosen greedily degree by degree. With
    explicit ``(name, degree, polynomial)`` triples those are used and
    checked to generate every degree. ``certified`` is the verdict of the
    evenness certificate (``None`` when not computed).
    """
    ring = ring or GradedRing(fan)
    n = fan.dim
    modules = tuple(ring.quotient_module(d) for d in range(n + 1))
    notes = []
    if any(m.torsion for m in modules):
        flag = MODULE_ONLY
        notes.append("torsion present: no ring presentation, modules reported only")
        return RingPresentation((), (), modules, flag, {}, tuple(notes))
    flag = UNCONDITIONAL if certified else CONDITIONAL
    if not certified:
        notes.append("evenness certificate not satisfied or not computed; presentation is conditional")

    def coords(vec, d):
        return ring.quotient_module(d).coordinates(vec)[0]

    gens: list[Generator] = []
    if generators is None:
        for d in range(1, n + 1):
            M = modules[d]
            imgs = [coords(_evaluate(ring, gens, e), d) for e in _gen_monomials([g.degree for g in gens], d)] if gens else []
            new = _cokernel_new([tuple(v) for v in imgs if any(v)], M.rank)
            gpolys = M.generator_polys()
            for c in new:
                p = {}
                for k, gp in zip(c, gpolys):
                    p = poly.add(p, poly.scale(gp, k))
                gens.append(Generator(f"w{len(gens) + 1}", d, p))
    else:
        for name, deg, p in generators:
            vec = ring.basis(deg).from_poly(p)
            if poly.sub(ring.basis(deg).to_poly(vec), p):
                raise ValidationError(f"generator {name} has monomials outside the face ring")
            ring.quotient_module(deg).lattice_coords(vec)
            gens.append(Generator(name, deg, dict(p)))
        gens.sort(key=lambda g: g.degree)
        for d in range(1, n + 1):
            imgs = [coords(_evaluate(ring, gens, e), d) for e in _gen_monomials([g.degree for g in gens], d)]
            if _cokernel_new([tuple(v) for v in imgs if any(v)], modules[d].rank):
                raise ValidationError(f"the given generators do not generate degree {2 * d}")

    degrees = [g.degree for g in gens]
    gmax = max(degrees, default=0)
    chosen: dict[int, list[tuple]] = {}
    mon_cache = {}
    for D in range(1, n + gmax + 1):
        mons = _gen_monomials(degrees, D)
        mon_cache[D] = mons
        if not mons:
            continue
        index = {e: i for i, e in enumerate(mons)}
        if D <= n:
            imgs = [coords(_evaluate(ring, gens, e), D) for e in mons]
        else:
            imgs = [() for _ in mons]
        width = len(imgs[0])
        if width:
            kernel = linalg.integer_kernel(linalg.transpose(imgs)).hnf()
        else:
            kernel = linalg.identity(len(mons))
        ideal = []
        for D2, rels in chosen.items():
            for r in rels:
                for m in mon_cache.get(D - D2, []):
                    v = [0] * len(mons)
                    for i, c in enumerate(r):
                        if c:
                            e = tuple(a + b for a, b in zip(mon_cache[D2][i], m))
                            v[index[e]] += c
                    ideal.append(tuple(v))
        picked: list[tuple] = []
        for cand in reversed(kernel):
            span = linalg.hermite_normal_form(ideal + picked, len(mons))
            if linalg.hnf_solve(span, cand) is None:
                picked.append(tuple(cand))
        for r in list(picked):
            others = [p for p in picked if p is not r]
            span = linalg.hermite_normal_form(ideal + others, len(mons))
            if linalg.hnf_solve(span, r) is not None:
                picked.remove(r)
        if linalg.hermite_normal_form(ideal + picked, len(mons)) != kernel:
            raise AssertionError(f"relations fail to span the kernel in degree {D}")
        if picked:
            chosen[D] = picked
    relations = []
    for D in sorted(chosen):
        for r in sorted(chosen[D], key=lambda r: [-abs(c) for c in r]):
            rel = {mon_cache[D][i]: c for i, c in enumerate(r) if c}
            lead = max(rel)
            if rel[lead] < 0:
                rel = {e: -c for e, c in rel.items()}
            relations.append(rel)
    consts = {}
    for i, j in iproduct(range(len(gens)), repeat=2):
        if i <= j and gens[i].degree + gens[j].degree <= n:
            e = [0] * len(gens)
            e[i] += 1
            e[j] += 1
            consts[f"{gens[i].name}*{gens[j].name}"] = coords(_evaluate(ring, gens, e), sum(
                k * g.degree for k, g in zip(e, gens)))
    return RingPresentation(tuple(gens), tuple(relations), modules, flag, consts, tuple(notes))

