import pytest

from atlas.errata import ANOMALIES, ERRATA, Anomaly, Erratum, anomaly_rows, find_registered
from atlas.golden import load_table
from atlas.verifier import (
    CellResult,
    TableVerifier,
    VerificationReport,
    duplicate_scan,
    twist_pairs,
    verify_row,
    verify_tables,
)


def _row(table, n, data_dir=None):
    return next(r for r in load_table(table, data_dir) if r.row == n)


def test_registry_lookup():
    assert isinstance(find_registered("I", 2, "K8"), Erratum)
    assert isinstance(find_registered("IV", 19, "roots"), Anomaly)
    assert isinstance(find_registered("IV", 7, "equation"), Anomaly)
    assert find_registered("IV", 7, "roots") is None
    assert find_registered("I", 1, "K8") is None
    assert anomaly_rows("IV") == (7, 19)
    assert len(ERRATA) + len(ANOMALIES) >= 6


@pytest.mark.parametrize("cell", ["equation", "roots", "EF", "K2", "lambda", "sylow", "K2_part2", "K4", "K6"])
def test_first_row_cells_match(cell):
    result = TableVerifier(_row("I", 1)).verify_cell(cell)
    assert result.status == "match", result


@pytest.mark.parametrize(
    "table, row, cell, recomputed",
    [
        ("I", 2, "K8", "19522"),
        ("II", 8, "K8", "1953751"),
        ("III", 9, "K2_part2", "344"),
        ("IV", 14, "lambda", "lambda(17)=1; lambda(79)=1"),
        ("IV", 12, "EF", "Z/2Z x Z/6Z"),
        ("IV", 12, "K2", "Z/2 x Z/666"),
        ("IV", 13, "EF", "Z/12Z"),
        ("IV", 13, "K2", "Z/1332"),
        pytest.param("II", 1, "sylow", "Z/2^{m+2}Z x Z/2^{m+1}Z", marks=pytest.mark.slow),
        pytest.param("II", 3, "sylow", "Z/2^{m+3}Z x Z/2^{m}Z", marks=pytest.mark.slow),
        pytest.param("II", 12, "sylow", "Z/2^{m+2}Z x Z/2^{m+1}Z", marks=pytest.mark.slow),
    ],
)
def test_registered_errata_reproduce(table, row, cell, recomputed):
    result = TableVerifier(_row(table, row)).verify_cell(cell)
    assert result.status == "erratum", result
    assert recomputed in result.computed


def test_swapped_rows_are_registered_both_ways():
    for row in (12, 13):
        results = {r.cell: r.status for r in verify_row(_row("IV", row))}
        assert results["EF"] == results["K2"] == "erratum"
        assert results["equation"] == results["roots"] == "match"


def test_foreign_data_row_keeps_its_equation_checked():
    assert find_registered("IV", 19, "equation") is None
    results = {r.cell: r.status for r in verify_row(_row("IV", 19))}
    assert results == {"equation": "match", "roots": "anomaly", "EF": "anomaly", "K2": "anomaly", "lambda": "anomaly"}


def test_malformed_equation_is_an_anomaly():
    result = TableVerifier(_row("IV", 7)).verify_cell("equation")
    assert result.status == "anomaly"
    assert result.computed == "y^2=x^3+4x-3"


def test_row_with_foreign_data_is_an_anomaly():
    result = TableVerifier(_row("IV", 19)).verify_cell("roots")
    assert result.status == "anomaly"
    assert result.computed == "2+-sqrt-7"


def test_fixed_erratum_is_reported(golden_copy):
    path = golden_copy / "table_I.csv"
    path.write_text(path.read_text(encoding="utf-8").replace("Z/19552Z", "Z/19522Z"), encoding="utf-8")
    result = TableVerifier(_row("I", 2, golden_copy)).verify_cell("K8")
    assert result.status == "mismatch"
    assert "did not reproduce" in result.note


def test_verify_row_of_f11_table():
    results = {r.cell: r.status for r in verify_row(_row("IV", 14))}
    assert results == {"equation": "match", "roots": "match", "EF": "match", "K2": "match", "lambda": "erratum"}


def test_degree_cap_gives_unverified():
    result = TableVerifier(_row("V", 23), degree_cap=0).verify_cell("K2")
    assert result.status == "unverified"


def test_duplicate_scan():
    findings = {f.rows: f for f in duplicate_scan(load_table("IV"))}
    assert set(findings) == {(4, 19), (10, 11)}
    assert findings[(4, 19)].matching_rows == (4,)
    assert findings[(4, 19)].trace == 4
    assert findings[(10, 11)].matching_rows == (10, 11)


def test_twist_pairs():
    assert all(r.status == "match" for r in twist_pairs(load_table("II")))
    statuses = {(r.row, r.cell): r.status for r in twist_pairs(load_table("IV"))}
    assert statuses[(4, "twist:19")] == "anomaly"
    assert statuses[(1, "twist:22")] == "match"
    assert len(statuses) == 11


def test_report_exit_code():
    report = VerificationReport([
        CellResult("I", 1, "K2", "match", "Z/19Z", "Z/19"),
        CellResult("I", 2, "K8", "erratum", "Z/19552Z", "19522"),
    ])
    assert report.exit_code == 0
    assert report.counts()["erratum"] == 1
    assert [r.cell for r in report.findings] == ["K8"]
    report.results.append(CellResult("I", 3, "K2", "mismatch", "Z/2Z", "Z/3"))
    assert report.exit_code == 1


@pytest.mark.slow
def test_verify_first_table():
    report = verify_tables(tables=["I"])
    assert report.exit_code == 0
    assert {r.row for r in report.results} == set(range(1, 9))
    assert [(r.row, r.cell, r.status) for r in report.by_status("erratum")] == [(2, "K8", "erratum")]
    assert report.results == sorted(report.results, key=lambda r: r.sort_key)


@pytest.mark.slow
def test_perturbed_digit_fails(golden_copy):
    path = golden_copy / "table_I.csv"
    path.write_text(path.read_text(encoding="utf-8").replace("Z/217Z", "Z/218Z"), encoding="utf-8")
    report = verify_tables(tables=["I"], data_dir=golden_copy)
    assert report.exit_code == 1
    assert [(r.table, r.row, r.cell) for r in report.by_status("mismatch")] == [("I", 1, "K4")]


@pytest.mark.slow
def test_full_verification():
    report = verify_tables(workers=2)
    assert report.exit_code == 0
    registered = report.by_status("erratum") + report.by_status("anomaly")
    assert len(registered) >= 6
