import pytest

from fishbench.coeffs import (
    FAMILIES,
    CuspWord,
    HalfWord,
    _load,
    _xi_half,
    appendix_table,
    characteristic_cubic_check,
    closed_form_families,
    cr_eval,
    cross_validate,
    dfinal_sequence,
    eta_table,
    format_value,
    get_engine,
    obstruct_all,
    obstruction_witnesses,
    parse_value,
    transfer_matrices,
)
from fishbench.field import ZERO, fe_sub, tpow


def eq(a, b):
    return fe_sub(a, b).is_zero()


# ---------------------------------------------------------------------------
# Value strings
# ---------------------------------------------------------------------------


def test_parse_value_single_powers():
    assert eq(parse_value("db^-3"), tpow(-6))
    assert eq(parse_value("-db^-13.5"), fe_sub(ZERO, tpow(-27)))
    assert eq(parse_value("db^1.5"), tpow(3))
    assert eq(parse_value("0"), ZERO)


def test_parse_value_sums():
    assert eq(parse_value("db^-13+db^-16"), tpow(-26) + tpow(-32))
    assert eq(
        parse_value("-db^-15.5-db^-18.5"),
        ZERO - tpow(-31) - tpow(-37),
    )


def test_parse_value_rejects_garbage():
    for bad in ("db^", "db^-3x", "phi^-3", "db^-3 + "):
        with pytest.raises(ValueError):
            parse_value(bad)


def test_format_value_round_trip():
    for text in ("0", "db^-3", "-db^-8", "db^-5.5", "-db^-13.5"):
        assert format_value(parse_value(text)) == text


# ---------------------------------------------------------------------------
# Cusp words
# ---------------------------------------------------------------------------


def test_word_parse_and_text_round_trip():
    for text in (
        "[a1 a(2n+1)]",
        "[a7 a(2n+1) a(2n-1) a(2n+3) a(2n-1) a(2n+1)]",
        "[a(2k-1) a(2n+2k-1)]",
    ):
        assert CuspWord.parse(text).text() == text


def test_word_expand_structure():
    eng = get_engine(8)
    w = CuspWord.parse("[a1 a(2n+1)]")
    loop = w.expand(8, eng.g)
    assert len(loop) == 32
    assert loop[0] == eng.g.vid("a1")
    assert eng.g.vid("a17") in loop
    # loop never passes through the corner a0
    assert eng.g.vid("a0") not in loop


def test_word_at_k_substitution():
    sym = CuspWord.parse("[a(2k-1) a(2n+2k-1)]")
    conc = sym.at_k(3)
    assert conc.text() == "[a5 a(2n+5)]"
    assert conc.indices(8) == [("a", 5), ("a", 21)]


def test_word_parse_rejects_garbage():
    with pytest.raises(ValueError):
        CuspWord.parse("[c5 a9]")
    with pytest.raises(ValueError):
        CuspWord.parse("[a5 q]")


def test_word_expand_rejects_out_of_range():
    eng = get_engine(4)
    with pytest.raises(ValueError):
        # small index beyond the cycle at n = 4
        CuspWord.parse("[a19 a(2n+1)]").expand(4, eng.g)


def test_half_word_pairing():
    a = HalfWord([("a", 0, 0, 5), ("a", 2, 0, 1), ("a", 2, 0, -3)])
    b = HalfWord([("a", 0, 0, 5), ("a", 2, 0, -3)])
    assert a.pair(b).text() == "[a5 a(2n+1) a(2n-3) a5]"
    with pytest.raises(ValueError):
        a.pair(HalfWord([("a", 0, 0, 7), ("a", 2, 0, -3)]))


# ---------------------------------------------------------------------------
# Engine invariants
# ---------------------------------------------------------------------------


def test_engine_adjoint_invariance():
    # the coefficient of a loop equals that of its reversal about the base
    eng = get_engine(8)
    for row in _load("appendix.json")["rows"]:
        loop = CuspWord.parse(row["word"]).expand(8, eng.g)
        adj = (loop[0],) + tuple(reversed(loop[1:]))
        assert eq(eng.cr(loop), eng.cr(adj)), row["word"]


def test_engine_full_cycle_base_case():
    eng = get_engine(8)
    up = tuple(eng.g.vid("a%d" % (i % 32)) for i in range(1, 33))
    assert eq(eng.cr(up), tpow(-3))


def test_size_independence_of_word_values():
    for text in (
        "[a1 a(2n+1)]",
        "[a5 a(2n+1) a(2n-1) a(2n+3)]",
        "[a7 a(2n+1) a(2n-3) a(2n+1) a(2n-1) a(2n+1)]",
    ):
        w = CuspWord.parse(text)
        assert eq(cr_eval(w, 8), cr_eval(w, 9)), text


# ---------------------------------------------------------------------------
# The shipped tables
# ---------------------------------------------------------------------------


def test_base_point_table():
    report = appendix_table(8)
    assert report["diffs"] == []
    assert len(report["rows"]) == 16
    assert all(r["match"] for r in report["rows"])


def test_base_point_table_second_size():
    assert appendix_table(9)["diffs"] == []


def test_constant_families():
    assert closed_form_families(8) == []


def test_constant_families_are_size_independent():
    # spot-check one member of each family at a second cycle size
    eng = get_engine(9)
    for text, k_lo, value in FAMILIES:
        w = CuspWord.parse(text).at_k(k_lo + 1)
        got = eng.cr(w.expand(9, eng.g))
        assert eq(got, parse_value(value)), text


def test_period_5_table():
    report = eta_table(5, 24)
    assert report["diffs"] == []
    assert set(report["rows"]) == {
        "alpha_k3", "beta_k3", "alpha_k4", "beta_k4", "alpha_k5", "beta_k5",
        "eta3_eta3", "eta3_eta4", "eta3_eta5",
        "eta4_eta4", "eta4_eta5", "eta5_eta5",
    }


def _eta_half(k, i):
    far = lambda v: ("a", 2, 0, v)
    base = ("a", 0, 0, 2 * k - 1)
    tails = {
        3: [far(1), far(-1), far(1), far(-1), far(2 * k - 9)],
        4: [far(3), far(-1), far(2 * k - 9)],
        5: [far(1), far(-3), far(2 * k - 9)],
    }
    return HalfWord([base] + tails[i])


def test_period_5_quadratic_rows_match_direct_evaluation():
    # dual route: the recurrence output against direct engine values
    table = eta_table(5, 9)["rows"]
    eng = get_engine(12)
    for k in range(5, 10):
        for i, j in ((3, 3), (3, 4), (3, 5), (4, 4), (4, 5), (5, 5)):
            loop = _eta_half(k, i).pair(_eta_half(k, j)).expand(12, eng.g)
            assert eq(table["eta%d_eta%d" % (i, j)][k], eng.cr(loop)), (k, i, j)


def test_characteristic_cubic():
    assert characteristic_cubic_check()


def test_transfer_matrices_report_exactly_the_three_suspect_entries():
    report = transfer_matrices()
    positions = set()
    for d in report["diffs"]:
        positions.add(d.split(":")[0])
    assert positions == {
        "T_{5l+9}[3][4]",
        "T_{5l+9}[4][3]",
        "T_{5l+11}[5][3]",
    }
    # every reported discrepancy is the same sign flip of db^-10.5
    for d in report["diffs"]:
        assert "printed db^10.5" in d


def test_period_20_sequence():
    report = dfinal_sequence(k_max=69)
    assert report["diffs"] == []
    # the sequence values behind the final verdict
    vals = report["values"]
    assert eq(vals[8][0], parse_value("-db^-13.5"))
    assert eq(vals[13][0], parse_value("-db^-13.5"))
    assert eq(vals[18][0], parse_value("-db^-11.5"))
    assert eq(vals[23][0], parse_value("-db^-11.5"))
    for k in (8, 13, 18, 23):
        assert eq(vals[k][0], vals[k + 20][0])


def test_period_20_sequence_matches_direct_evaluation():
    # dual route: recurrence values against direct engine evaluation
    report = dfinal_sequence(k_max=10)
    eng = get_engine(12)
    for k in (7, 8):
        for i in (1, 2, 3, 4, 5):
            loop = _xi_half(k, i).pair(_xi_half(k, 0)).expand(12, eng.g)
            assert eq(report["values"][k][i - 1], eng.cr(loop)), (k, i)


# ---------------------------------------------------------------------------
# Obstruction certificates
# ---------------------------------------------------------------------------


def test_obstruction_size_four_witness_pair():
    (w,) = obstruction_witnesses(4)
    assert w["value"] == repr(tpow(-10))
    assert w["mirror_value"] == repr(ZERO)


def test_obstruction_residues():
    for n in (5, 6, 7, 9, 100):
        (w,) = obstruction_witnesses(n)
        actual = w["value"]
        # required magnitude db^-9, actual is 0 or db^-8
        assert actual in (repr(ZERO), repr(tpow(-16)))
    for n in (8, 13, 18, 23, 28, 98):
        (w,) = obstruction_witnesses(n)
        assert w["value"] in (repr(ZERO - tpow(-27)), repr(ZERO - tpow(-23)))


def test_obstruction_rejects_solution_sizes():
    for n in (1, 2, 3):
        with pytest.raises(ValueError):
            obstruction_witnesses(n)


def test_obstruct_all():
    certs = obstruct_all(100)
    assert len(certs) == 97
    assert all(c["verdict"] == "contradiction" for c in certs)
    assert {c["n"] for c in certs} == set(range(4, 101))


# ---------------------------------------------------------------------------
# Cross-validation against the concrete solver
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [4, 5, 6])
def test_cross_validation(n):
    report = cross_validate(n)
    assert report["diffs"] == []
    assert report["checked"] >= 20
