import random

import pytest

from toricorb import linalg
from toricorb import polynomial as poly
from toricorb.errors import ValidationError
from toricorb.fan import build_fan, hirzebruch_fan, is_integral_class, standard_fans, weighted_projective_fan
from toricorb.gradedring import (CONDITIONAL, UNCONDITIONAL, GradedRing, monomial_basis,
                                 ring_presentation)
from toricorb.towers import hirzebruch_generators

FANS = standard_fans()


def mono(n, **powers):
    e = [0] * n
    for k, v in powers.items():
        e[int(k[1:]) - 1] = v
    return tuple(e)


def test_monomial_basis_skips_non_faces():
    b = monomial_basis(FANS["cp2"], 3)
    assert (1, 1, 1) not in b.monomials
    assert (3, 0, 0) in b.monomials
    assert len(b) == 9


def test_cp2_235_lattice_members():
    fan = FANS["cp2_235"]
    ring = GradedRing(fan)
    L1 = ring.integrality_lattice(1)
    b1 = L1.basis
    for k, e in [(15, mono(3, x1=1)), (10, mono(3, x2=1)), (6, mono(3, x3=1))]:
        assert b1.from_poly({e: k}) in L1
        for p in (2, 3, 5):
            if k % p == 0:
                assert b1.from_poly({e: k // p}) not in L1
    L2 = ring.integrality_lattice(2)
    b2 = L2.basis
    for k, e in [(25, mono(3, x1=1, x2=1)), (9, mono(3, x1=1, x3=1)), (4, mono(3, x2=1, x3=1))]:
        assert b2.from_poly({e: k}) in L2


@pytest.mark.parametrize("name", sorted(FANS))
def test_lattice_membership_matches_direct_substitution(name):
    fan = FANS[name]
    ring = GradedRing(fan)
    rng = random.Random(3)
    for d in range(1, fan.dim + 1):
        L = ring.integrality_lattice(d)
        for _ in range(60):
            vec = tuple(rng.randint(-40, 40) for _ in L.basis.monomials)
            assert (vec in L) == is_integral_class(fan, L.basis.to_poly(vec))
        for row in L.hnf:
            assert is_integral_class(fan, L.basis.to_poly(row))


def test_linear_ideal_in_lattice():
    for fan in FANS.values():
        ring = GradedRing(fan)
        J1 = ring.linear_ideal_piece(1)
        assert len(J1) == fan.dim
        for v in J1:
            assert v in ring.integrality_lattice(1)


def random_fans():
    out = list(FANS.values()) + [hirzebruch_fan(a, b) for a, b in [(1, 0), (2, 1), (3, 2), (5, 1)]]
    out.append(weighted_projective_fan([(1, 0), (0, 1), (-2, -3)]))
    rng = random.Random(11)
    for _ in range(4):
        while True:
            A = [[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)]
            if linalg.determinant(A) != 0:
                break
        base = hirzebruch_fan(2, 1)
        out.append(build_fan([linalg.primitive(linalg.matvec(A, r))[0] for r in base.rays], base.max_cones))
    return out


def test_ranks_match_h_vector():
    for fan in random_fans():
        ring = GradedRing(fan)
        assert ring.ranks() == fan.h_vector()
        assert all(not ring.quotient_module(d).torsion for d in range(fan.dim + 1))
        assert ring.quotient_module(fan.dim + 1).is_zero


def test_cp2_235_presentation():
    pres = ring_presentation(FANS["cp2_235"], certified=True)
    assert pres.flag == UNCONDITIONAL
    assert [g.degree for g in pres.generators] == [1, 2]
    assert pres.generators[0].poly == {(0, 0, 1): 6}
    assert pres.has_relation({(2, 0): 1, (0, 1): -30})
    assert pres.has_relation({(1, 1): 1}) and pres.has_relation({(0, 2): 1})
    assert abs(pres.structure_constants["w1*w1"][0]) == 30


def test_cp3_3126_presentation():
    pres = ring_presentation(FANS["cp3_3126"], certified=True)
    assert GradedRing(FANS["cp3_3126"]).ranks() == (1, 1, 1, 1)
    assert pres.relation_strings() == ["w1^3 - 6*w2", "w1*w2", "w2^2"]


def test_smooth_cp2():
    pres = ring_presentation(FANS["cp2"], certified=True)
    assert len(pres.generators) == 1
    assert pres.relation_strings() == ["w1^3"]


def test_conditional_flag():
    assert ring_presentation(FANS["cp2"], certified=False).flag == CONDITIONAL
    assert ring_presentation(FANS["cp2"]).flag == CONDITIONAL


@pytest.mark.parametrize("a, b", [(1, 0), (1, 2), (3, 2), (5, 1)])
def test_hirzebruch_relations(a, b):
    fan = hirzebruch_fan(a, b)
    pres = ring_presentation(fan, True, generators=hirzebruch_generators(a))
    assert pres.names == ["x", "y", "z"]
    # exponents over (x, y, z)
    assert pres.has_relation({(2, 0, 0): 1})
    if a == 1:
        assert pres.has_relation({(1, 1, 0): 1, (0, 0, 1): -1})
        yy = {(0, 2, 0): 1, (0, 0, 1): -b} if b else {(0, 2, 0): 1}
        assert pres.has_relation(yy)
    else:
        assert pres.has_relation({(1, 1, 0): 1, (0, 0, 1): -a})
        assert pres.has_relation({(0, 2, 0): 1, (0, 0, 1): -a * b})
        for e in [(1, 0, 1), (0, 1, 1), (0, 0, 2)]:
            assert pres.has_relation({e: 1})


def test_generators_must_generate():
    fan = hirzebruch_fan(3, 2)
    with pytest.raises(ValidationError):
        ring_presentation(fan, True, generators=[("x", 1, {(1, 0, 0, 0): 3})])


def test_coordinates_roundtrip():
    ring = GradedRing(FANS["cp2_235"])
    for d in (1, 2):
        M = ring.quotient_module(d)
        for i, g in enumerate(M.generator_polys()):
            unit = tuple(int(i == j) for j in range(M.rank))
            assert M.coordinates(M.basis.from_poly(g)) == (unit, ())
        for v in ring.linear_ideal_piece(d):
            assert M.coordinates(v) == ((0,) * M.rank, ())


def test_module_json():
    js = GradedRing(FANS["cp2"]).quotient_module(2).to_json()
    assert js["degree"] == 4 and js["rank"] == 1 and js["torsion"] == []
