import random

from fishbench.field import DELTA, DELTA_A, DELTA_B, ONE, fe_inv, fe_mul, fe_sign, from_int, tpow, upow
from fishbench.gpa import (
    Element,
    beta,
    beta_inv,
    biprojection_p1,
    cond_expect_right,
    coproduct,
    corner_element,
    element_F,
    enumerate_loops,
    fourier,
    fourier_inv,
    identity,
    include_left,
    include_right,
    inner,
    jones_projection,
    loop_element,
    rotate,
    trace,
)
from fishbench.graphs import build_dual_principal

G1 = build_dual_principal(1)
G2 = build_dual_principal(2)


def rand_elem(g, m, shading, rng, nterms=4):
    loops = enumerate_loops(g, m, shading)
    terms = {}
    for _ in range(nterms):
        loop = rng.choice(loops)
        c = from_int(rng.randint(-3, 3))
        terms[loop] = terms.get(loop, from_int(0)) + c
    return Element(g, m, shading, terms)


def test_loop_counts():
    assert len(enumerate_loops(G1, 1, 0)) == 6
    assert len(enumerate_loops(G1, 2, 0)) == 28
    assert len(enumerate_loops(G1, 0, 0)) == 4
    assert len(enumerate_loops(G1, 0, 1)) == 2


def test_identity_unit():
    rng = random.Random(0)
    one = identity(G1, 2, 0)
    for _ in range(5):
        x = rand_elem(G1, 2, 0, rng)
        assert one * x == x
        assert x * one == x


def test_multiply_examples():
    l1 = loop_element(G1, ["a1", "a0", "a1", "a0"])
    l2 = loop_element(G1, ["a1", "a2", "a1", "a0"])
    assert (l1 * l2).is_zero()
    assert l1 * l1 == l1
    for n in (1, 2, 3):
        g = build_dual_principal(n)
        p1 = biprojection_p1(g)
        assert len(p1) == 10 * n
        assert p1 * p1 == p1
        assert p1.adjoint() == p1


def test_adjoint():
    rng = random.Random(1)
    for _ in range(5):
        x = rand_elem(G1, 2, 0, rng)
        y = rand_elem(G1, 2, 0, rng)
        assert (x * y).adjoint() == y.adjoint() * x.adjoint()
        assert x.adjoint().adjoint() == x
    pal = loop_element(G1, ["a1", "a0", "a1", "a0"])
    assert pal.adjoint() == pal


def test_associativity():
    rng = random.Random(2)
    for _ in range(5):
        x = rand_elem(G1, 2, 0, rng)
        y = rand_elem(G1, 2, 0, rng)
        z = rand_elem(G1, 2, 0, rng)
        assert (x * y) * z == x * (y * z)


def test_include_then_cap_is_delta():
    rng = random.Random(3)
    for m, sh in ((1, 0), (2, 0), (2, 1)):
        x = rand_elem(G1, m, sh, rng)
        assert cond_expect_right(include_right(x)) == x.scale(DELTA)
    id0 = identity(G1, 0, 0)
    assert include_right(id0) == identity(G1, 1, 0)
    e1 = jones_projection(G1, 1, 2, 0)
    assert cond_expect_right(e1) == identity(G1, 1, 0).scale(fe_inv(DELTA))


def test_rotation_order_and_fourier():
    rng = random.Random(4)
    for _ in range(3):
        x = rand_elem(G1, 2, 0, rng)
        y = x
        for _ in range(2 * x.m):
            y = rotate(y)
        assert y == x
        assert fourier(fourier(x)) == rotate(x)
        assert fourier_inv(fourier(x)) == x
        assert fourier(fourier_inv(x)) == x
        assert fourier(x).adjoint() == fourier_inv(x.adjoint())


def test_rotation_of_full_cycle_loop():
    for n in (1, 2):
        g = build_dual_principal(n)
        seq = ["a1"] + ["a%d" % ((1 - i) % (4 * n)) for i in range(1, 4 * n)]
        l1 = loop_element(g, seq)
        expect = ["a3", "a2"] + seq[:-2]
        assert rotate(l1) == loop_element(g, expect)


def test_trace_properties():
    rng = random.Random(5)
    for _ in range(5):
        x = rand_elem(G1, 2, 0, rng)
        y = rand_elem(G1, 2, 0, rng)
        assert trace(x * y) == trace(y * x)
        assert trace(rotate(x)) == trace(x)
        assert inner(rotate(x), rotate(y)) == inner(x, y)
    l = loop_element(G1, ["a1", "a0"])
    assert trace(l) == fe_mul(G1.lam[G1.vid("a1")], G1.lam[G1.vid("a0")])


def test_jones_relations():
    e1 = jones_projection(G2, 1, 3, 0)
    e2 = jones_projection(G2, 2, 3, 0)
    d2inv = fe_inv(fe_mul(DELTA, DELTA))
    assert e1 * e1 == e1
    assert e1.adjoint() == e1
    assert e1 * e2 * e1 == e1.scale(d2inv)
    assert e2 * e1 * e2 == e2.scale(d2inv)
    f1 = jones_projection(G1, 1, 4, 0)
    f3 = jones_projection(G1, 3, 4, 0)
    assert f1 * f3 == f3 * f1


def test_markov_property():
    rng = random.Random(6)
    e2 = jones_projection(G1, 2, 3, 0)
    for _ in range(4):
        x = rand_elem(G1, 2, 0, rng)
        assert trace(include_right(x) * e2) == fe_mul(fe_inv(DELTA), trace(x))


def test_F_element():
    for n in (1, 2):
        g = build_dual_principal(n)
        F = element_F(g)
        loop = tuple(g.vid(v) for v in ("b1", "a2", "b1", "a2"))
        assert F.terms[loop] == DELTA_A
        assert coproduct(F, F) == F
        assert F.adjoint() == F


def test_fourier_of_biprojection():
    for n in (1, 2):
        g = build_dual_principal(n)
        q = fourier(biprojection_p1(g))
        # q^2 = (db/da) q, so (da/db) q is a projection
        assert q * q == q.scale(fe_mul(upow(-2), tpow(2)))


def test_exchange_relation():
    for n in (1, 2):
        g = build_dual_principal(n)
        p1 = biprojection_p1(g)
        a = include_right(p1)
        b = include_left(fourier(p1))
        assert a * b == b * a


def test_corner_invariant_subspaces():
    rng = random.Random(7)
    g = G1
    F = element_F(g)
    a_minus = corner_element(loop_element(g, ["a1", "a0"]), 2)
    a_plus = corner_element(loop_element(g, ["a1", "a2"]), 2)
    b_corner = corner_element(loop_element(g, ["b1", "a2"]), 2)
    db1 = fe_inv(DELTA_B)
    db2 = fe_mul(db1, db1)
    for _ in range(6):
        y = rand_elem(g, 2, 0, rng)
        x = a_minus * y * a_minus
        assert coproduct(F, x).is_zero()
        x = a_minus * y * a_plus
        assert coproduct(F, x) == x
        x = a_plus * y * a_minus
        assert coproduct(F, x) == x
        x = a_plus * y * a_plus
        assert coproduct(F, x) == x.scale(db2) - beta(x).scale(db1)
        x = b_corner * y * b_corner
        assert coproduct(F, x) == x.scale(db1) - beta_inv(x).scale(db2)


def test_beta_involution():
    rng = random.Random(8)
    a_plus = corner_element(loop_element(G1, ["a1", "a2"]), 2)
    for _ in range(4):
        x = a_plus * rand_elem(G1, 2, 0, rng) * a_plus
        assert beta_inv(beta(x)) == x


def test_gram_diagonal_positive():
    loops = enumerate_loops(G1, 2, 0)
    elems = [Element(G1, 2, 0, {l: ONE}) for l in loops]
    for e in elems:
        assert fe_sign(inner(e, e)) == 1
    rng = random.Random(9)
    for _ in range(40):
        i, j = rng.randrange(len(elems)), rng.randrange(len(elems))
        if i != j:
            assert inner(elems[i], elems[j]).is_zero()


def test_text_and_json():
    p1 = biprojection_p1(G1)
    txt = p1.to_text()
    assert "[b1 a2 b1 a2]" in txt
    blob = p1.to_json()
    assert blob["grade"] == 2 and blob["shading"] == "+"
    assert len(blob["terms"]) == 10
