import io
import logging

import pytest

from app import main
from cli.commands import cmd_kgroup
from cli.render import ReportRenderer
from cli.run_config import RunConfig, parse_m_range
from config.settings import FIELD_SETTINGS
from core.errors import InvalidInputError

pytestmark = pytest.mark.usefixtures("isolated_run")

# handlers installed by the run in test_run_applies_caps
_run_handlers = []


def test_parse_m_range():
    assert parse_m_range("1..6") == (1, 6)
    assert parse_m_range("3") == (3, 3)
    for bad in ("0..2", "4..1", "a..b", ""):
        with pytest.raises(InvalidInputError):
            parse_m_range(bad)


def test_run_config_validation():
    RunConfig("kgroup", curve="3:0:-1:-1").validate()
    with pytest.raises(InvalidInputError):
        RunConfig("kgroup", curve="3:0:-1:-1", degree_cap=0).validate()
    with pytest.raises(InvalidInputError):
        RunConfig("kgroup", curve="3:0:0:0").validate()
    with pytest.raises(InvalidInputError):
        RunConfig("verify", tables=("VI",)).validate()
    with pytest.raises(InvalidInputError):
        RunConfig("kgroup", fmt="json").validate()
    with pytest.raises(InvalidInputError):
        RunConfig("kgroup").parsed_curve()


def test_renderer_formats():
    records = [{"a": "1", "b": "Z/2Z x Z/2Z"}, {"a": "10", "b": "{O}"}]
    assert ReportRenderer("csv").render(records, ("a", "b")) == "a,b\n1,Z/2Z x Z/2Z\n10,{O}\n"
    assert ReportRenderer("kv").render(records[:1], ("a", "b")) == "a=1\nb=Z/2Z x Z/2Z\n"
    table = ReportRenderer("human").render(records, ("a", "b"), title="T").splitlines()
    assert table[0] == "T"
    assert table[2].split() == ["a", "b"]
    assert table[4].split() == ["1", "Z/2Z", "x", "Z/2Z"]


def test_curve_info(capsys):
    assert main(["curve-info", "3:0:-1:-1", "--format", "kv"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert "trace=3" in out
    assert "EF={O}" in out
    assert "roots=(3+-sqrt-3)/2" in out
    assert "N=1" in out


def test_curve_info_full_two_torsion(capsys):
    assert main(["curve-info", "5:0:1:0", "--format", "kv"]) == 0
    assert "EF=Z/2Z x Z/2Z" in capsys.readouterr().out.splitlines()


def test_singular_curve_exits_2(capsys):
    assert main(["curve-info", "3:0:0:0"]) == 2
    captured = capsys.readouterr()
    assert "singular" in captured.err
    assert captured.out == ""


def test_kgroup_orders(capsys):
    assert main(["kgroup", "3:0:-1:-1", "--m", "1..6", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "curve,n,m,order,structure,verified"
    assert [line.split(",")[3] for line in lines[1:]] == ["19", "217", "2107", "19441", "176419", "1592137"]


@pytest.mark.parametrize(
    "spec, structure",
    [("7:0:0:2", "Z/3Z x Z/117Z"), ("13:0:0:5", "Z/4Z x Z/556Z")],
)
def test_kgroup_structure_rendering(capsys, spec, structure):
    assert main(["kgroup", spec, "--format", "kv"]) == 0
    assert f"structure={structure}" in capsys.readouterr().out.splitlines()


def test_csv_output_is_deterministic():
    cfg = RunConfig("kgroup", curve="5:0:4:0", m_range=(1, 3), fmt="csv")
    first, second = io.StringIO(), io.StringIO()
    cmd_kgroup(cfg, first)
    cmd_kgroup(cfg, second)
    assert first.getvalue() == second.getvalue()


def test_tower(capsys):
    assert main(["tower", "3:0:-1:-1", "--l", "19"]) == 0
    first = capsys.readouterr().out.splitlines()[0]
    assert first.startswith("lambda=1; K_2(19^m)(19) = Z/19^{m+1}Z")


def test_tower_non_dividing_prime_exits_2():
    assert main(["tower", "3:0:-1:-1", "--l", "5"]) == 2


def test_tower_composite_prime_exits_2(capsys):
    # 4 divides #K_2 = 116 but is not a prime
    assert main(["tower", "5:0:1:0", "--l", "4"]) == 2
    assert "not a prime" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["kgroup", "3:0:-1:-1", "--m", "3..1"],
        ["kgroup", "3:0:-1:-1", "--degree-cap", "0"],
        ["kgroup", "3:0:-1:-1", "--n", "0"],
        ["verify", "--workers", "0"],
        ["tower", "3:0:-1:-1", "--l", "1"],
        ["tables", "--field", "9"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_2(argv):
    assert main(argv) == 2


def test_tables_csv_round_trip(capsys):
    assert main(["tables", "--field", "11", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "row,equation,roots,EF,K2,lambda,sylow,curve,trace,flags"
    assert len(lines) == 23


@pytest.mark.slow
def test_verify_first_table_exits_0(capsys):
    assert main(["verify", "--table", "I", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert "I,2,K8,erratum" in out


@pytest.mark.slow
def test_verify_perturbed_copy_exits_1(capsys, golden_copy):
    path = golden_copy / "table_I.csv"
    path.write_text(path.read_text(encoding="utf-8").replace("Z/217Z", "Z/218Z"), encoding="utf-8")
    assert main(["verify", "--table", "I", "--data-dir", str(golden_copy), "--format", "csv"]) == 1
    assert "I,1,K4,mismatch" in capsys.readouterr().out


def test_run_applies_caps():
    before = set(logging.getLogger().handlers)
    assert main(["curve-info", "3:0:-1:-1", "--degree-cap", "7", "--verbose"]) == 0
    assert FIELD_SETTINGS["degree_cap"] == 7
    assert logging.getLogger().level == logging.DEBUG
    _run_handlers.extend(set(logging.getLogger().handlers) - before)
    assert _run_handlers


def test_caps_and_handlers_do_not_leak_between_runs():
    assert FIELD_SETTINGS["degree_cap"] == RunConfig("kgroup").degree_cap
    assert logging.getLogger().level != logging.DEBUG
    assert not set(_run_handlers) & set(logging.getLogger().handlers)
