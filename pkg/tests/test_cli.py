import json

import pytest

from fishbench.cli import _loop_count, build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_graph_dot(capsys):
    code, out, _ = run(capsys, "graph", "--n", "2", "--which", "dual", "--format", "dot")
    assert code == 0
    assert out.startswith("graph {")
    assert '"a7"' in out and '"b1"' in out
    # 8-cycle plus 4 pendants: 12 edges
    assert out.count(" -- ") == 12


def test_graph_json(capsys):
    code, out, _ = run(capsys, "graph", "--n", "1", "--which", "refined-dual",
                       "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["schema"] == "fishbench-report-1"
    assert report["validation"] == []
    assert report["graph"]["vertices"]


def test_graph_bad_n():
    with pytest.raises(SystemExit):
        main(["graph", "--n", "0", "--which", "dual"])


def test_solve_solution_exit_zero(capsys, tmp_path):
    out_path = tmp_path / "cert.json"
    code, _, _ = run(capsys, "solve", "--n", "1", "--out", str(out_path))
    assert code == 0
    cert = json.loads(out_path.read_text())
    assert cert["verdict"] == "solution"
    assert cert["failures"] == []


def test_solve_contradiction_exit_two(capsys):
    code, out, _ = run(capsys, "solve", "--n", "4")
    assert code == 2
    cert = json.loads(out)
    assert cert["verdict"] == "contradiction"
    (w,) = cert["witnesses"]
    assert w["value"] == "phi^-5"
    assert w["mirror_value"] == "0"


def test_solve_a4a4_mode(capsys):
    code, out, _ = run(capsys, "solve", "--n", "2", "--mode", "a4a4")
    assert code == 0
    assert json.loads(out)["mode"] == "a4a4"


def test_solve_sign_choice(capsys):
    code, out, _ = run(capsys, "solve", "--n", "1", "--mu1", "-1", "--mu2", "-1")
    assert code == 0
    cert = json.loads(out)
    assert cert["verdict"] == "solution"
    assert cert["params"]["mu1"] == -1


def test_solve_support_cap(capsys):
    code, _, err = run(capsys, "solve", "--n", "2", "--max-support", "5")
    assert code == 1
    assert "max-support" in err


def test_loop_count_matches_enumeration():
    from fishbench.a4 import composite_loops
    from fishbench.graphs import build_omega

    for n in (1, 2):
        assert _loop_count(n, "a4a4") == len(composite_loops(build_omega(n), n))


def test_tables_appendix(capsys):
    code, out, _ = run(capsys, "tables", "--which", "appendix")
    assert code == 0
    report = json.loads(out)
    assert report["diffs"] == []
    assert all(row["match"] for row in report["appendix"]["rows"])


def test_tables_etak(capsys):
    code, out, _ = run(capsys, "tables", "--which", "etak")
    assert code == 0
    assert json.loads(out)["diffs"] == []


def test_obstruct_sweep(capsys):
    code, out, _ = run(capsys, "obstruct", "--nmax", "12")
    assert code == 0
    report = json.loads(out)
    assert report["contradictions"] == 9


def test_parser_choices():
    parser = build_parser()
    with pytest.raises(SystemExit):
        parser.parse_args(["solve", "--n", "1", "--mode", "bogus"])
    with pytest.raises(SystemExit):
        parser.parse_args(["solve", "--n", "1", "--mu1", "2"])


def test_text_format(capsys):
    code, out, _ = run(capsys, "solve", "--n", "1", "--format", "text")
    assert code == 0
    assert "verdict: solution" in out
