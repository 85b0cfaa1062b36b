import io

import pytest

from config.settings import ATLAS_SETTINGS
from core.errors import GoldenDataError, InvalidInputError
from atlas.golden import (
    load_golden,
    load_table,
    parse_group,
    parse_lambda,
    parse_sylow,
    render_group,
    render_lambda,
    verify_checksums,
    write_rows,
)


def test_shipped_tables_load_with_checksums():
    rows = load_golden()
    assert len(rows) == sum(ATLAS_SETTINGS["row_counts"].values()) == 92
    counts = {t: sum(1 for r in rows if r.table == t) for t in ATLAS_SETTINGS["tables"]}
    assert counts == {"I": 8, "II": 12, "III": 18, "IV": 22, "V": 32}


def test_first_row_cells():
    row = load_table("I")[0]
    assert row.curve().spec == "3:0:2:2"
    assert row.trace == 3
    assert row.cell("K12") == "Z/1592137Z"
    assert row.columns() == ("equation", "roots", "EF", "K2", "lambda", "sylow",
                             "K2_part2", "K4", "K6", "K8", "K10", "K12")
    assert str(row) == "I/1 y^2=x^3-x-1"


def test_malformed_equation_row():
    row = load_table("IV")[6]
    assert row.row == 7
    assert row.is_malformed
    assert row.curve().spec == "11:0:4:8"


@pytest.mark.parametrize(
    "text, factors",
    [
        ("{O}", ()),
        ("Z/19Z", (19,)),
        ("Z/2Z x Z/58Z", (2, 58)),
        ("Z/9Z x Z/39Z", (3, 117)),
    ],
)
def test_parse_group(text, factors):
    assert parse_group(text).factors == factors


def test_render_group_is_canonical():
    assert render_group(parse_group("Z/4Z x Z/34Z")) == "Z/2Z x Z/68Z"
    assert render_group(parse_group("{O}")) == "{O}"


def test_parse_group_rejects_garbage():
    with pytest.raises(GoldenDataError):
        parse_group("Z/2 x Z/4")


def test_lambda_cells():
    assert parse_lambda("lambda(2)=2; lambda(11)=1") == {2: 2, 11: 1}
    assert parse_lambda("lambda(2)=2, lambda(139)=1") == {2: 2, 139: 1}
    assert parse_lambda("lambda(17)=lambda(19)=1") == {17: 1, 19: 1}
    assert render_lambda({79: 1, 17: 1}) == "lambda(17)=1; lambda(79)=1"
    with pytest.raises(GoldenDataError):
        parse_lambda("lambda=2")


def test_sylow_cells():
    formulas = parse_sylow("K_2(2^m)(2) = Z/2^{m+1}Z x Z/2^{m}Z, m>=2; K_2(11^m)(11) = Z/11^{m+1}Z, m>=1")
    assert formulas[2].offsets == (0, 1)
    assert formulas[2].m0 == 2
    assert formulas[2].valuation(3) == 7
    assert formulas[11].offsets == (1,)
    with pytest.raises(GoldenDataError):
        parse_sylow("K_2(2^m)(3) = Z/2^{m}Z, m>=0")


def test_checksum_catches_edit(golden_copy):
    path = golden_copy / "table_I.csv"
    path.write_text(path.read_text(encoding="utf-8").replace("Z/217Z", "Z/218Z"), encoding="utf-8")
    with pytest.raises(GoldenDataError):
        verify_checksums(golden_copy, ["table_I.csv"])
    # a user directory is loaded without the checksum gate
    rows = load_golden(golden_copy, ["I"])
    assert rows[0].cell("K4") == "Z/218Z"


def test_roots_must_agree_with_trace(golden_copy):
    path = golden_copy / "table_II.csv"
    path.write_text(path.read_text(encoding="utf-8").replace("(3+-sqrt-11)/2", "(1+-sqrt-19)/2", 1),
                    encoding="utf-8")
    with pytest.raises(GoldenDataError):
        load_table("II", golden_copy)


def test_curve_column_must_match_equation(golden_copy):
    path = golden_copy / "table_I.csv"
    path.write_text(path.read_text(encoding="utf-8").replace("3:0:2:2", "3:0:2:1", 1), encoding="utf-8")
    with pytest.raises(GoldenDataError):
        load_table("I", golden_copy)


def test_unknown_table():
    with pytest.raises(InvalidInputError):
        load_golden(tables=["VI"])


def test_write_rows():
    out = io.StringIO()
    write_rows([{"row": "1", "K2": "Z/19Z"}], ("row", "K2"), out)
    assert out.getvalue() == "row,K2\n1,Z/19Z\n"
