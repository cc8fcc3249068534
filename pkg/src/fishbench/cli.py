"""Command-line surface: graphs, certificates, tables, sweeps, selftest.

Exit codes for ``solve``: 0 = solution certificate, 2 = contradiction
certificate, 1 = error.  Every other command exits 0 on success and 1 on any
validation failure or table diff.  All reports are deterministic for fixed
inputs.
"""

import argparse
import json
import sys

from .field import DELTA_A, DELTA_B, FieldElement
from . import coeffs
from .graphs import (
    build_dual_principal,
    build_fish_principal,
    build_omega,
    build_refined_dual,
    build_refined_principal,
    omega_matches_reduced,
    validate_parameter,
)

SCHEMA = "fishbench-report-1"

_BUILDERS = {
    "dual": lambda n: (build_dual_principal(n), DELTA_A, DELTA_B),
    "fish": lambda n: (build_fish_principal(n), DELTA_A, DELTA_B),
    "refined-dual": lambda n: (build_refined_dual(n), None, None),
    "refined-principal": lambda n: (build_refined_principal(n), None, None),
    "omega": lambda n: (build_omega(n), None, None),
}


class ResourceLimit(RuntimeError):
    pass


def _fmt(value):
    if isinstance(value, FieldElement):
        try:
            return coeffs.format_value(value)
        except Exception:
            return repr(value)
    return value


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, FieldElement):
        return _fmt(obj)
    return obj


def _emit(report, args):
    report = {"schema": SCHEMA, **_jsonable(report)}
    if getattr(args, "format", "json") == "text":
        text = _as_text(report)
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _as_text(report, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(report, dict):
        for k, v in report.items():
            if isinstance(v, (dict, list)):
                lines.append("%s%s:" % (pad, k))
                lines.append(_as_text(v, indent + 1))
            else:
                lines.append("%s%s: %s" % (pad, k, v))
    elif isinstance(report, list):
        for v in report:
            if isinstance(v, (dict, list)):
                lines.append(_as_text(v, indent))
                lines.append("")
            else:
                lines.append("%s- %s" % (pad, v))
    else:
        lines.append("%s%s" % (pad, report))
    return "\n".join(l for l in lines if l is not None) + ("\n" if indent == 0 else "")


def _loop_count(n, mode):
    """Dimension of the relevant loop space, by adjacency-matrix powers."""
    if mode == "a3a4":
        g = build_dual_principal(n)
        size = len(g)
        mats = []
        adj = [[0] * size for _ in range(size)]
        for i in range(size):
            for j in g.adj[i]:
                adj[i][j] = 1
        mats = [adj] * (4 * n)
        starts = [v for v in range(size) if g.parity[v] == 0]
    else:
        from .fusscatalan import circle_colors

        om = build_omega(n)
        size = len(om)
        col = circle_colors(n, 0)
        mats = []
        for i in range(4 * n):
            nbrs = om.adj_plus if col[i + 1] == "b" else om.adj_minus
            m = [[0] * size for _ in range(size)]
            for u in range(size):
                for w in nbrs[u]:
                    m[u][w] = 1
            mats.append(m)
        starts = [v for v in range(size) if om.colors[v] == "N"]
    prod = None
    for m in mats:
        if prod is None:
            prod = m
        else:
            prod = [
                [sum(row[k] * m[k][j] for k in range(size)) for j in range(size)]
                for row in prod
            ]
    return sum(prod[v][v] for v in starts)


def _check_support(args, mode):
    cap = getattr(args, "max_support", None)
    if cap is None:
        return
    count = _loop_count(args.n, mode)
    if count > cap:
        raise ResourceLimit(
            "loop space has %d basis loops, above the --max-support cap %d"
            % (count, cap)
        )


def cmd_graph(args):
    if args.which not in _BUILDERS:
        raise SystemExit("unknown graph family %r" % args.which)
    g, da, db = _BUILDERS[args.which](args.n)
    violations = validate_parameter(g, da, db)
    if args.format == "dot":
        text = g.to_dot()
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(
            {
                "which": args.which,
                "n": args.n,
                "graph": g.to_json(),
                "validation": violations,
            },
            args,
        )
    return 1 if violations else 0


def cmd_solve(args):
    from .solver import classify

    _check_support(args, args.mode)
    cert = classify(args.n, mode=args.mode, mu1=args.mu1, mu2=args.mu2)
    _emit(cert, args)
    return 0 if cert["verdict"] == "solution" else 2


def cmd_tables(args):
    report = {}
    diffs = []
    which = args.which
    if which in ("appendix", "all"):
        t = coeffs.appendix_table(raise_on_diff=False)
        report["appendix"] = t
        diffs += t["diffs"]
    if which in ("families", "all"):
        fam = coeffs.closed_form_families()
        report["families"] = {"diffs": fam}
        diffs += fam
    if which in ("etak", "all"):
        t = coeffs.eta_table(raise_on_diff=False)
        report["etak"] = t
        diffs += t["diffs"]
        if not coeffs.characteristic_cubic_check():
            diffs.append("characteristic cubic factorization failed")
    if which in ("dfinal", "all"):
        t = coeffs.dfinal_sequence(raise_on_diff=False)
        report["dfinal"] = t
        diffs += t["diffs"]
        report["transfer_suspect_entries"] = t["transfer_diffs"]
    report["diffs"] = diffs
    _emit(report, args)
    return 1 if diffs else 0


def cmd_obstruct(args):
    if args.mode == "a4a4":
        from .a4 import count_solutions

        count, certs = count_solutions(args.nmax)
        report = {"mode": "a4a4", "solutions": count, "certificates": certs}
        ok = all(
            c["verdict"] == ("solution" if c["n"] in (None, 1, 2, 3) else "contradiction")
            for c in certs
        )
    else:
        certs = coeffs.obstruct_all(args.nmax)
        report = {
            "mode": "a3a4",
            "contradictions": len(certs),
            "certificates": certs,
        }
        ok = len(certs) == args.nmax - 3 and all(
            c["verdict"] == "contradiction" for c in certs
        )
    _emit(report, args)
    return 0 if ok else 1


def cmd_selftest(args):
    from .fusscatalan import wenzl_projection
    from .field import DELTA, fe_mul, fe_sub

    checks = {}
    checks["field_delta_split"] = fe_sub(DELTA, fe_mul(DELTA_A, DELTA_B)).is_zero()
    graph_bad = []
    for n in range(1, 5):
        graph_bad += validate_parameter(build_fish_principal(n), DELTA_A, DELTA_B)
        graph_bad += validate_parameter(build_dual_principal(n), DELTA_A, DELTA_B)
        graph_bad += validate_parameter(build_refined_dual(n), None, None)
        graph_bad += validate_parameter(build_omega(n), None, None)
        if not omega_matches_reduced(n):
            graph_bad.append("omega/cycle weight mismatch at n=%d" % n)
    checks["graph_eigen_equations"] = not graph_bad
    f = wenzl_projection(build_refined_dual(1), 2, 0, build_dual_principal(1))
    checks["wenzl_idempotent"] = f * f == f
    checks["appendix_table"] = not coeffs.appendix_table(raise_on_diff=False)["diffs"]
    checks["families"] = not coeffs.closed_form_families()
    checks["period5_table"] = not coeffs.eta_table(raise_on_diff=False)["diffs"]
    checks["characteristic_cubic"] = coeffs.characteristic_cubic_check()
    checks["period20_sequence"] = not coeffs.dfinal_sequence(raise_on_diff=False)["diffs"]
    from .solver import classify

    checks["solve_n1"] = classify(1)["verdict"] == "solution"
    checks["solve_n4"] = classify(4)["verdict"] == "contradiction"
    from .a4 import classify_a4

    checks["solve_n1_a4a4"] = classify_a4(1)["verdict"] == "solution"
    checks["solve_n4_a4a4"] = classify_a4(4)["verdict"] == "contradiction"
    failures = [name for name, ok in checks.items() if not ok]
    _emit({"checks": checks, "failures": failures}, args)
    return 1 if failures else 0


def _positive(value):
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _sign(value):
    n = int(value)
    if n not in (1, -1):
        raise argparse.ArgumentTypeError("must be +1 or -1")
    return n


def build_parser():
    p = argparse.ArgumentParser(
        prog="fishbench",
        description="Exact-arithmetic workbench for the fish-graph classification.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_choices=("json", "text")):
        sp.add_argument("--format", choices=fmt_choices, default=fmt_choices[0])
        sp.add_argument("--out", help="write the report to this path")
        sp.add_argument("--threads", type=_positive, default=1,
                        help="worker hint (computations are single-threaded)")

    sp = sub.add_parser("graph", help="emit a graph from the catalog")
    sp.add_argument("--n", type=_positive, required=True)
    sp.add_argument("--which", choices=sorted(_BUILDERS), default="dual")
    common(sp, ("dot", "json", "text"))
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("solve", help="classification certificate at one size")
    sp.add_argument("--n", type=_positive, required=True)
    sp.add_argument("--mode", choices=("a3a4", "a4a4"), default="a3a4")
    sp.add_argument("--mu1", type=_sign, default=1)
    sp.add_argument("--mu2", type=_sign, default=1)
    sp.add_argument("--max-support", type=_positive, default=None,
                    help="abort if the loop space exceeds this many basis loops")
    common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("tables", help="recompute and compare the shipped tables")
    sp.add_argument("--which", choices=("appendix", "families", "etak", "dfinal", "all"),
                    default="all")
    common(sp)
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("obstruct", help="contradiction sweep over a size range")
    sp.add_argument("--nmax", type=_positive, default=100)
    sp.add_argument("--mode", choices=("a3a4", "a4a4"), default="a3a4")
    common(sp)
    sp.set_defaults(func=cmd_obstruct)

    sp = sub.add_parser("selftest", help="run a condensed invariant suite")
    common(sp)
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ResourceLimit, ValueError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
