import pytest

from fishbench.a4 import (
    classify_a4,
    composite_loops,
    count_solutions,
    flat_loops,
    lowest_weight_space,
    solve_generator,
    t_relations_check,
)
from fishbench.field import DELTA_B, ONE, ZERO, fe_mul, fe_sub, tpow
from fishbench.fusscatalan import _bipartite_of, wenzl_projection
from fishbench.gpa import cond_expect_right, fourier, rotate, trace
from fishbench.graphs import build_omega


def loop_of(om, names):
    return tuple(om.vid(nm) for nm in names)


def test_composite_loop_counts():
    for n, expect in ((1, 7), (2, 49), (3, 358)):
        om = build_omega(n)
        assert len(composite_loops(om, n)) == expect


def test_composite_loops_alternate_through_whites():
    om = build_omega(2)
    for loop in composite_loops(om, 2):
        assert len(loop) == 8
        assert om.colors[loop[0]] in ("N", "P")
        for i in range(0, 8, 2):
            assert not om.names[loop[i]].startswith("v")
            assert om.names[loop[i + 1]].startswith("v")


def test_flat_loops_are_the_cycle_orientations():
    for n in (1, 2, 3, 4):
        om = build_omega(n)
        fl = flat_loops(om, n)
        assert len(fl) == 2 * n
        for loop in fl:
            # flat loops stay on the cycle: no pendant vertices
            assert all(not om.names[v].startswith("p") for v in loop)
        # closed under taking the reversed-orientation loop at the same base
        rev = {(l[0],) + tuple(reversed(l[1:])) for l in fl}
        assert rev == set(fl)


def test_lowest_weight_dimensions():
    for n, expect in ((1, 2), (2, 4), (3, 7)):
        _, _, _, basis = lowest_weight_space(n)
        assert len(basis) == expect


def test_lowest_weight_basis_satisfies_linear_relations():
    _, _, _, basis = lowest_weight_space(2)
    for b in basis:
        assert b.adjoint() == b
        assert rotate(rotate(b)) == b
        x = b
        for _ in range(8):
            assert cond_expect_right(x).is_zero()
            x = fourier(x)


def test_generator_n1_exact_values():
    om, _, T, _ = solve_generator(1)
    flat = fe_sub(ZERO, T.terms[loop_of(om, ["x0", "v0", "x1", "v1"])])
    # the two flat loops share one coefficient c with c^2 = db^-3
    sq = fe_mul(T.terms[loop_of(om, ["x0", "v0", "x1", "v1"])],
                T.terms[loop_of(om, ["x0", "v1", "x1", "v0"])])
    assert sq == tpow(-6)
    assert T.terms[loop_of(om, ["p1N", "v1", "p1M", "v1"])] == tpow(-2)
    del flat


def test_generator_quadratic_relation():
    s = fe_sub(ONE, tpow(-4) + tpow(-4))
    r = fe_sub(tpow(-4), tpow(-8))
    for n in (1, 2):
        _, _, T, f = solve_generator(n)
        assert T * T == T.scale(s) + f.scale(r)


def test_generator_traceless():
    for n in (1, 2):
        _, _, T, _ = solve_generator(n)
        assert trace(T).is_zero()


def test_projection_split_under_f():
    _, _, T, f = solve_generator(2)
    Q = T + f.scale(tpow(-4))
    assert Q * Q == Q
    comp = f - Q
    assert comp * comp == comp
    assert (Q * comp).is_zero()


def test_relation_battery_n1_to_n3():
    for n in (1, 2, 3):
        report = t_relations_check(n)
        assert report["failures"] == []
        assert report["flat_loop_count"] == 2 * n
        for w in report["witnesses"]:
            assert w["value"] == repr(tpow(-3))


def test_distinguished_projection_checks():
    for n in (1, 2):
        om = build_omega(n)
        f = wenzl_projection(om, n, 0, None, DELTA_B, DELTA_B)
        assert f * f == f
        assert f.adjoint() == f


def test_classify_solutions():
    for n in (1, 2, 3):
        cert = classify_a4(n)
        assert cert["verdict"] == "solution"
        assert cert["failures"] == []
        assert cert["mode"] == "a4a4"
        assert cert["params"] == {"omega": 1}


def test_classify_contradictions():
    for n in (4, 5, 8):
        cert = classify_a4(n)
        assert cert["verdict"] == "contradiction"
        assert cert["witnesses"]
        for w in cert["witnesses"]:
            assert set(w) >= {"loop", "value"}


def test_classify_rejects_bad_size():
    with pytest.raises(ValueError):
        classify_a4(0)


def test_count_solutions():
    count, certs = count_solutions(10)
    assert count == 4
    assert len(certs) == 11
    assert certs[0]["n"] is None and certs[0]["verdict"] == "solution"
    assert [c["verdict"] for c in certs[1:4]] == ["solution"] * 3
    assert all(c["verdict"] == "contradiction" for c in certs[4:])
