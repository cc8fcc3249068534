import json

from fishbench.field import fe_inv, fe_mul, tpow
from fishbench.fusscatalan import wenzl_projection
from fishbench.gpa import trace_normalized
from fishbench.graphs import build_dual_principal, build_refined_dual, gamma_mirror
from fishbench.solver import (
    SolverParams,
    _mirror_element,
    assemble_R,
    build_R,
    check_relations,
    check_S,
    classify,
    corner_A_minus,
    corner_A_plus,
    corner_B,
    initial_U,
    jellyfish_checks,
    loop_L1,
    recover_S,
    run_recursion,
)


def test_initial_coefficients():
    g = build_dual_principal(1)
    u1, u2 = initial_U(g, SolverParams(1, 1, 1))
    l1 = loop_L1(g, 1)
    (loop,) = l1.terms
    assert u1.terms[loop] == tpow(-3)
    u1m, _ = initial_U(g, SolverParams(1, -1, 1))
    assert u1m == -u1


def test_full_relation_battery():
    for n in (1, 2):
        g = build_dual_principal(n)
        rg = build_refined_dual(n)
        g2n = wenzl_projection(rg, 2 * n, 0, g)
        _, R = build_R(n, 1, 1, g)
        assert check_relations(g, R, n, g2n, rg) == []


def test_companion_generator():
    for n in (1, 2):
        g = build_dual_principal(n)
        rg = build_refined_dual(n)
        f2n = wenzl_projection(rg, 2 * n, 1, g)
        _, R = build_R(n, 1, 1, g)
        S = recover_S(g, R)
        assert check_S(g, S, f2n) == []
        # flipping both signs is again a solution
        assert check_S(g, -S, f2n) == []


def test_jellyfish_identities():
    for n in (1, 2):
        g = build_dual_principal(n)
        rg = build_refined_dual(n)
        g2n = wenzl_projection(rg, 2 * n, 0, g)
        f2n = wenzl_projection(rg, 2 * n, 1, g)
        _, R = build_R(n, 1, 1, g)
        S = recover_S(g, R)
        assert jellyfish_checks(g, R, S, n, g2n, f2n) == []


def test_parameter_independence_of_R_parts():
    n = 2
    g = build_dual_principal(n)
    base = run_recursion(g, SolverParams(n, 1, 1))[2]
    for mu1, mu2 in ((1, -1), (-1, 1), (-1, -1)):
        other = run_recursion(g, SolverParams(n, mu1, mu2))[2]
        assert all(base[k] == other[k] for k in base)


def test_partial_isometry_invariants():
    n = 2
    g = build_dual_principal(n)
    rg = build_refined_dual(n)
    m = 2 * n
    g2n = wenzl_projection(rg, m, 0, g)
    U, P, _ = run_recursion(g, SolverParams(n, 1, 1))
    for k in U:
        p = P[k].scale(tpow(6))
        assert p * p == p
        am = corner_A_minus(g, k, m)
        assert U[k] * U[k].adjoint() == (am * g2n).scale(tpow(-6))


def test_corner_support():
    n = 2
    g = build_dual_principal(n)
    m = 2 * n
    U, _, R_parts = run_recursion(g, SolverParams(n, 1, 1))
    for k in U:
        am = corner_A_minus(g, k, m)
        ap = corner_A_plus(g, k, m)
        b = corner_B(g, k, m)
        assert am * U[k] * ap == U[k]
        corner = ap + b
        assert corner * R_parts[k] * corner == R_parts[k]


def test_mirror_symmetry():
    for n in (1, 2):
        g = build_dual_principal(n)
        perm = gamma_mirror(g)
        _, r12 = build_R(n, 1, -1, g)
        _, r21 = build_R(n, -1, 1, g)
        assert _mirror_element(g, perm, r12) == r21
        _, r11 = build_R(n, 1, 1, g)
        assert _mirror_element(g, perm, r11) == r11


def test_generator_norm():
    for n in (1, 2):
        g, R = build_R(n, 1, 1)
        assert trace_normalized(R * R.adjoint()) == tpow(2 * (n - 2))


def test_assembled_R_matches_corner_sum():
    n = 1
    g = build_dual_principal(n)
    U, P, R_parts = run_recursion(g, SolverParams(n, 1, 1))
    R = assemble_R(U, P, R_parts)
    total = None
    m = 2 * n
    for k in U:
        ap = corner_A_plus(g, k, m)
        am = corner_A_minus(g, k, m)
        b = corner_B(g, k, m)
        corner = ap + b
        piece = am * R * ap + ap * R * am + corner * R * corner
        total = piece if total is None else total + piece
    assert total == R


def test_certificate_solution():
    cert = classify(1)
    assert cert["verdict"] == "solution"
    assert cert["failures"] == []
    assert cert["n"] == 1 and cert["mode"] == "a3a4"
    json.dumps(cert)  # serializable as-is
