"""Acceptance criteria 1-9, one test each.

Each criterion collects its failures instead of stopping at the first one,
records a single PASS/FAIL line (shown in the pytest terminal summary, or
printed when this file is run as a script) and then asserts.
"""

import random
import time
from math import gcd, lcm, prod

from toricorb import linalg
from toricorb import polynomial as poly
from toricorb.charpair import (face_group, induced_pair, local_group_at_vertex, local_group_on_face,
                               make_pair, validate)
from toricorb.evenness import evenness_certificate, k_relatively_prime, prime_factors
from toricorb.fan import (build_fan, hirzebruch_fan, integrality_matrix, pair_to_fan, pull_back,
                          standard_fans, substitute_on_cone)
from toricorb.gradedring import GradedRing, ring_presentation
from toricorb.polytope import build_polytope, cube, polygon, product_of_simplices, simplex
from toricorb.retraction import dimension_profile, enumerate_admissible_retractions, r_vector
from toricorb.towers import (fibration_check, hirzebruch_generators, make_tower, closed_form_packed_lambda,
                             phi_matrix, tower_char_matrix)

F = frozenset
PRISM = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]


class Checks:
    def __init__(self):
        self.failures = []
        self.count = 0

    def __call__(self, cond, what):
        self.count += 1
        if not cond:
            self.failures.append(what)
        return cond

    def summary(self):
        if not self.failures:
            return f"{self.count} checks"
        return f"{len(self.failures)}/{self.count} checks failed, first: {self.failures[0]}"


def _finish(acceptance, n, chk):
    ok = not chk.failures
    acceptance(n, ok, chk.summary())
    assert ok, chk.summary()


# -- 1 -------------------------------------------------------------------------

def criterion_1(chk):
    pair = make_pair(build_polytope(3, 5, PRISM),
                     [(2, 3, 5), (2, -1, 0), (-1, -1, -2), (-1, 2, 2), (0, 0, 1)])
    order = [F(v) for v in PRISM]
    got = tuple(local_group_at_vertex(pair, v).order for v in order)
    chk(got == (1, 1, 1, 3, 3, 3), f"vertex orders {got}")
    E = F({4})
    chk(face_group(pair, E).is_trivial, "G_F5 not trivial")
    for v in order[3:]:
        g = local_group_on_face(pair, E, v)
        chk(g.invariants == (3,), f"G_F5({sorted(v)}) = {g}")


def test_criterion_1(acceptance):
    chk = Checks()
    criterion_1(chk)
    _finish(acceptance, 1, chk)


# -- 2 -------------------------------------------------------------------------

def criterion_2(chk):
    for name, P, want in [("simplex", simplex(3), (4, 3)),
                          ("prism", product_of_simplices([2, 1]), (6, 2)),
                          ("cube", cube(3), (8, 3))]:
        t = time.perf_counter()
        got = r_vector(P)
        n = sum(1 for _ in enumerate_admissible_retractions(P))
        dt = time.perf_counter() - t
        chk(got == want, f"{name}: r = {got}")
        chk(n > 0, f"{name}: no retraction enumerated")
        chk(dt < 10, f"{name}: {dt:.1f}s")


def test_criterion_2(acceptance):
    chk = Checks()
    criterion_2(chk)
    _finish(acceptance, 2, chk)


# -- 3 -------------------------------------------------------------------------

def criterion_3(chk):
    pair = make_pair(simplex(4), [(-1, -2, -2, -2), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    orders = sorted(abs(pair.vertex_determinant(v)) for v in pair.polytope.vertices)
    chk(orders == [1, 1, 2, 2, 2], f"vertex orders {orders}")
    chk(k_relatively_prime(orders, 5), "orders not 5-relatively prime")
    cert = evenness_certificate(pair)
    chk(cert.satisfied, f"certificate {cert.verdict}")
    E = F({0, 1})
    ind = induced_pair(pair, E)
    face_orders = sorted(abs(linalg.determinant(ind.vertex_matrix(v))) for v in pair.polytope.face_vertices(E))
    chk(face_orders == [1, 1, 1], f"F1 n F2 orders {face_orders}")


def test_criterion_3(acceptance):
    chk = Checks()
    criterion_3(chk)
    _finish(acceptance, 3, chk)


# -- 4 -------------------------------------------------------------------------

def criterion_4(chk):
    fan = standard_fans()["cp2_235"]
    G = integrality_matrix(fan)
    rows = [G.row((1, 2)), G.row((0, 2)), G.row((0, 1))]
    chk(rows == [(0, 2, 2), (3, 0, 3), (5, 5, 0)], f"integrality rows {rows}")
    ring = GradedRing(fan)
    chk(ring.ranks() == (1, 1, 1), f"ranks {ring.ranks()}")
    chk(all(not ring.quotient_module(d).torsion for d in range(3)), "torsion present")
    pres = ring_presentation(fan, True, ring=ring)
    degs = [g.degree for g in pres.generators]
    chk(degs == [1, 2], f"generator degrees {degs}")
    sc = pres.structure_constants.get("w1*w1")
    chk(sc is not None and abs(sc[0]) == 30, f"w1^2 = {sc} * w2")


def test_criterion_4(acceptance):
    chk = Checks()
    criterion_4(chk)
    _finish(acceptance, 4, chk)


# -- 5 -------------------------------------------------------------------------

def criterion_5(chk):
    fan = standard_fans()["cp3_3126"]
    rows = sorted(integrality_matrix(fan).rows)
    want = sorted([(2, 6, 3, 0), (2, 2, 0, 1), (1, 0, 1, 1), (0, 3, 3, 1)])
    chk(rows == want, f"integrality rows {rows}")


def test_criterion_5(acceptance):
    chk = Checks()
    criterion_5(chk)
    _finish(acceptance, 5, chk)


# -- 6 -------------------------------------------------------------------------

def criterion_6(chk):
    for a, b in [(1, 0), (1, 2), (3, 2), (5, 1)]:
        fan = hirzebruch_fan(a, b)
        G = integrality_matrix(fan).as_dict()
        rows = [G[(0, 2)], G[(1, 2)], G[(1, 3)], G[(0, 3)]]
        chk(rows == [(a, 0, a, 0), (0, 1, 1, 0), (0, 1, 0, 1), (a, 0, 0, a)], f"({a},{b}) rows {rows}")
        ring = GradedRing(fan)
        chk(ring.ranks() == (1, 2, 1), f"({a},{b}) ranks {ring.ranks()}")
        chk(all(not ring.quotient_module(d).torsion for d in range(3)), f"({a},{b}) torsion")
        pres = ring_presentation(fan, True, generators=hirzebruch_generators(a), ring=ring)
        chk(pres.has_relation({(2, 0, 0): 1}), f"({a},{b}) missing x^2")
        chk(pres.has_relation({(1, 1, 0): 1, (0, 0, 1): -a}), f"({a},{b}) missing xy - {a}z")
        yy = {(0, 2, 0): 1, (0, 0, 1): -a * b}
        chk(pres.has_relation({e: c for e, c in yy.items() if c}), f"({a},{b}) missing y^2 - {a * b}z")
        if a == 1:
            smooth = ring_presentation(fan, True, ring=ring,
                                       generators=[("x", 1, {(1, 0, 0, 0): 1}), ("y", 1, {(0, 0, 0, 1): 1})])
            rel = {(0, 2): 1, (1, 1): -b} if b else {(0, 2): 1}
            chk(smooth.has_relation({(2, 0): 1}) and smooth.has_relation(rel),
                f"(1,{b}) smooth presentation {smooth.relation_strings()}")


def test_criterion_6(acceptance):
    chk = Checks()
    criterion_6(chk)
    _finish(acceptance, 6, chk)


# -- 7 -------------------------------------------------------------------------

def criterion_7(chk):
    cp2 = standard_fans()["cp2"]
    pres = ring_presentation(cp2, True)
    chk(len(pres.generators) == 1, f"CP2 generators {pres.names}")
    chk(pres.has_relation({(3,): 1}), f"CP2 relations {pres.relation_strings()}")
    chk(GradedRing(cp2).ranks() == (1, 1, 1), "CP2 ranks")
    square = make_pair(product_of_simplices([1, 1]), [(1, 0), (-1, 0), (0, 1), (0, -1)])
    chk(validate(square).ok, "square pair invalid")
    sq_fan = pair_to_fan(square)
    chk(GradedRing(sq_fan).ranks() == (1, 2, 1), "square ranks")
    smooth_cube = pair_to_fan(make_pair(cube(3), [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0),
                                                   (0, 0, 1), (0, 0, -1)]))
    for fan in (cp2, sq_fan, hirzebruch_fan(1, 3), smooth_cube):
        for row in integrality_matrix(fan).rows:
            chk({x for x in row if x} == {1}, f"smooth integrality row {row}")


def test_criterion_7(acceptance):
    chk = Checks()
    criterion_7(chk)
    _finish(acceptance, 7, chk)


# -- 8 -------------------------------------------------------------------------

_PRIMES = [p for p in range(2, 31) if all(p % q for q in range(2, p))]


def _relatively_prime_exhaustive(chk):
    """All multisets of size <= 8 with entries in 1..30.

    A subset has gcd 1 exactly when the prime supports of its members have
    empty intersection, so entries with equal prime support are interchangeable
    and one representative per support class suffices. Subset gcds are
    enumerated exhaustively and incrementally along the search tree as pairs
    (subset size, common support).
    """
    reps = {}
    for x in range(1, 31):
        reps.setdefault(sum(1 << _PRIMES.index(p) for p in prime_factors(x)), x)
    classes = sorted(reps.items(), key=lambda t: t[1])
    seen = 0

    def dfs(start, seq, states):
        nonlocal seen
        s = len(seq)
        if s:
            seen += 1
            hit = {size for size, m in states if m}
            K = max(hit, default=0)
            # sizes with a common prime are downward closed, so the library only
            # has to change its answer between K and K + 1
            chk(hit == set(range(1, K + 1)), f"subset sizes {sorted(hit)} for {seq}")
            if K:
                chk(not k_relatively_prime(seq, K), f"{seq}, k={K}")
            if K < s:
                chk(k_relatively_prime(seq, K + 1), f"{seq}, k={K + 1}")
        if s == 8:
            return
        for i in range(start, len(classes)):
            m, x = classes[i]
            new = set(states)
            new.add((1, m))
            new.update((size + 1, mm & m) for size, mm in states)
            dfs(i, seq + [x], new)

    dfs(0, [], set())
    return seen


def _random_fan(rng, bases):
    base = rng.choice(bases)
    while True:
        A = [[rng.randint(-2, 2) for _ in range(base.dim)] for _ in range(base.dim)]
        if linalg.determinant(A) != 0:
            break
    return build_fan([linalg.primitive(linalg.matvec(A, r))[0] for r in base.rays], base.max_cones)


def criterion_8(chk):
    n_multisets = _relatively_prime_exhaustive(chk)
    chk(n_multisets == 2220074, f"enumerated {n_multisets} support multisets")

    for name, P in [("triangle", simplex(2)), ("tetrahedron", simplex(3)), ("square", polygon(4)),
                    ("prism", product_of_simplices([2, 1])), ("cube", cube(3))]:
        dims = dimension_profile(P.f_vector()).dims
        for seq in enumerate_admissible_retractions(P):
            chk(seq.dims == dims, f"{name}: {seq.dims} != {dims}")

    rng = random.Random(20240501)
    bases = list(standard_fans().values()) + [hirzebruch_fan(2, 1), hirzebruch_fan(3, -2)]
    for _ in range(10):
        fan = _random_fan(rng, bases)
        for _ in range(200):
            p = {}
            for d in range(rng.randint(0, 3) + 1):
                for e in poly.monomials(fan.dim, d):
                    if rng.random() < 0.5:
                        p[e] = rng.randint(-5, 5)
            p = {e: c for e, c in p.items() if c}
            x = pull_back(fan, p)
            for s in fan.max_cones:
                chk(substitute_on_cone(fan, s, x) == p, f"round trip failed on {fan.rays}")


def test_criterion_8(acceptance):
    chk = Checks()
    criterion_8(chk)
    _finish(acceptance, 8, chk)


# -- 9 -------------------------------------------------------------------------

def _random_tower(rng, k):
    ws = []
    for _ in range(k):
        n = rng.randint(1, 2)
        while True:
            w = [rng.randint(1, 9) for _ in range(n + 1)]
            if gcd(*w) == 1:
                break
        ws.append(w)
    twists = {(i, j): [rng.randint(-9, 9) for _ in ws[i - 1]] for i in range(2, k + 1) for j in range(1, i)}
    return make_tower(ws, twists)


def criterion_9(chk):
    rng = random.Random(9)
    packed = 0
    for _ in range(500):
        spec = _random_tower(rng, rng.choice((2, 3)))
        t = tower_char_matrix(spec)
        chk(not any(any(r) for r in linalg.matmul(t.raw, phi_matrix(spec))), f"Lambda.Phi != 0 for {spec}")
        chk(validate(t.pair()).ok, f"invalid pair for {spec.weights}")
        for i in range(2, spec.k + 1):
            ell = prod(lcm(*w) for w in spec.weights[:i - 1])
            direct = all(c % ell == 0 for j in range(1, i) for c in spec.twist(i, j))
            rep = fibration_check(spec, i)
            chk(rep.ell == ell and rep.genuine == direct, f"stage {i} verdict for {spec.weights}")
        if spec.k == 2 and spec.dims == (1, 1):
            packed += 1
            (a1, b1), (a2, b2) = spec.weights
            c, d = spec.twist(2, 1)
            ours = linalg.lattice(t.raw, 4)
            closed = linalg.lattice(closed_form_packed_lambda(a1, b1, a2, b2, c, d), 4)
            chk(ours.same_lattice(closed),
                f"packed ({a1},{b1},{a2},{b2},{c},{d}): closed-form rows span index "
                f"{linalg.lattice_index(closed, ours)} sublattice")
    chk(packed > 0, "no packed specs drawn")


def test_criterion_9(acceptance):
    chk = Checks()
    criterion_9(chk)
    _finish(acceptance, 9, chk)


if __name__ == "__main__":
    for n, fn in enumerate([criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                            criterion_6, criterion_7, criterion_8, criterion_9], 1):
        chk = Checks()
        fn(chk)
        print(f"criterion {n}: {'PASS' if not chk.failures else 'FAIL'}  {chk.summary()}")
