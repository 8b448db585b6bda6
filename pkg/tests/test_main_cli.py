import json

import pytest
from click.testing import CliRunner

from errors import InputError
from main import MAX_ARITY_ENV, OperadForge, cli, parse_arities
from presentation_loader import builtin


@pytest.fixture
def run(tmp_path, monkeypatch):
    monkeypatch.delenv(MAX_ARITY_ENV, raising=False)
    monkeypatch.chdir(tmp_path)
    runner = CliRunner()

    def invoke(*args, config=None):
        path = tmp_path / "config.yaml"
        if config is not None:
            path.write_text(config, encoding="utf-8")
        return runner.invoke(cli, ["--config", str(path), *args], obj={})

    return invoke


def test_parse_arities():
    assert parse_arities("3") == [3]
    assert parse_arities("1..4") == [1, 2, 3, 4]
    for text in ("0", "4..2", "a..b", ""):
        with pytest.raises(InputError):
            parse_arities(text)


def test_dim_json(run):
    result = run("dim", "--builtin", "novikov", "--arity", "1..4", "--format", "json")
    assert result.exit_code == 0, result.output
    assert json.loads(result.output) == {
        "presentation": "novikov",
        "dims": [{"n": 1, "dim": 1}, {"n": 2, "dim": 2}, {"n": 3, "dim": 6}, {"n": 4, "dim": 20}],
    }


def test_dim_table_with_jobs(run):
    result = run("dim", "--builtin", "dernov", "--jobs", "2")
    assert result.exit_code == 0, result.output
    lines = result.output.split()
    assert lines[:2] == ["n", "dim"]
    assert lines[2:] == ["1", "1", "2", "4", "3", "36"]


def test_dim_from_file(run, tmp_path):
    path = tmp_path / "bicom.txt"
    path.write_text("ops: *\n(a*b)*c = (a*c)*b\na*(b*c) = b*(a*c)\n", encoding="utf-8")
    result = run("dim", "--file", str(path), "--arity", "2..4", "--format", "csv")
    assert result.exit_code == 0, result.output
    assert result.output.splitlines() == ["n,dim", "2,2", "3,6", "4,14"]


@pytest.mark.parametrize("args", [
    ("dim", "--arity", "1..3"),
    ("dim", "--builtin", "novikov", "--arity", "three"),
    ("nf", "--variety", "nov_s", "a<b<c"),
    ("nf", "--variety", "nov_s", "--builtin", "novikov", "x1"),
    ("dual", "--builtin", "nov_s"),
    ("verify", "everything"),
    ("embed", "x1*x2"),
])
def test_malformed_input_exits_2(run, args):
    result = run(*args)
    assert result.exit_code == 2
    assert "Error:" in result.output


def test_arity_cap_exits_3(run):
    result = run("dim", "--builtin", "dernov", "--arity", "6")
    assert result.exit_code == 3
    assert "--force" in result.output


def test_configured_cap_and_environment_override(run, monkeypatch):
    config = "expansion:\n  max_arity_one_op: 3\n"
    assert run("dim", "--builtin", "novikov", "--arity", "4", config=config).exit_code == 3
    assert run("dim", "--builtin", "novikov", "--arity", "4", "--force", config=config).exit_code == 0
    monkeypatch.setenv(MAX_ARITY_ENV, "4")
    assert run("dim", "--builtin", "novikov", "--arity", "4", config=config).exit_code == 0
    monkeypatch.setenv(MAX_ARITY_ENV, "many")
    assert run("dim", "--builtin", "novikov", config=config).exit_code == 2


def test_configured_output_format(run):
    result = run("census", "--variety", "bicom_s", config="output:\n  format: json\n")
    assert result.exit_code == 0, result.output
    assert [row["count"] for row in json.loads(result.output)] == [1, 2, 6, 1, 1]


def test_eqv(run):
    same = run("eqv", "--builtin", "novikov", "--dual", "--opposite", "--against-builtin", "novikov", "--arity", "4")
    assert same.exit_code == 0, same.output
    assert "equivalent up to arity 4" in same.output
    different = run("eqv", "--builtin", "novikov", "--against-builtin", "bicommutative")
    assert different.exit_code == 4
    assert "not equivalent" in different.output
    assert run("eqv", "--builtin", "dernov", "--dual", "--against-builtin", "dernov_dual").exit_code == 0


def test_dual_output_is_a_presentation(run):
    result = run("dual", "--builtin", "bicommutative")
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[:2] == ["name: dual(bicommutative)", "ops: *"]
    assert len(lines) == 2 + 6
    assert all(line.endswith(" = 0") for line in lines[2:])


def test_nf(run):
    assert run("nf", "--builtin", "novikov", "(x1*x3)*x2").output.strip() == "(x1*x2)*x3"
    assert run("nf", "--variety", "nov_s", "(a<(b<c))<d").output.strip() == "0"
    assert run("nf", "--variety", "nov_s", "x1").output.strip() == "x1"
    split = run("nf", "--variety", "dernov_dual", "(x1<x2)>x3")
    assert split.exit_code == 0, split.output
    assert split.output.splitlines() == ["prec: -x3<(x1<x2)", "succ: 0"]
    as_json = run("nf", "--variety", "bicom_s", "((x2>x1)>x4)>x3", "--format", "json")
    assert json.loads(as_json.output) == {"bicom_s": "((x1>x2)>x3)>x4"}


def test_embed(run):
    result = run("embed", "x1>x2")
    assert result.exit_code == 0, result.output
    assert result.output.splitlines() == ["x1^(0,1)*x2^(1,0)", "weights [(1, 1)] homogeneous=True"]
    nov = run("embed", "--map", "tau_nov", "(a*b)*c - (a*c)*b", "--format", "json")
    assert json.loads(nov.output) == {"image": "0", "homogeneous": True, "weights": []}


def test_census_and_table_csv(run):
    census = run("census", "--variety", "nov_s", "--arity", "1..5", "--format", "csv")
    assert census.output.splitlines()[1:] == ["nov_s,1,1", "nov_s,2,2", "nov_s,3,6", "nov_s,4,10", "nov_s,5,15"]
    generators = run("census", "--variety", "bicom_s", "--arity", "4", "--generators", "2", "--format", "csv")
    assert generators.output.splitlines()[1:] == ["bicom_s,4,5"]
    table = run("table", "--builtin", "novikov", "--builtin", "bicommutative", "--format", "csv")
    assert table.exit_code == 0, table.output
    assert table.output.splitlines() == [
        "presentation,n,dim",
        "novikov,1,1", "novikov,2,2", "novikov,3,6",
        "bicommutative,1,1", "bicommutative,2,2", "bicommutative,3,6",
    ]


def test_show_round_trips(run):
    result = run("show", "--builtin", "dernov")
    assert result.exit_code == 0
    assert result.output == builtin("dernov").to_text()


def test_verify_reports(run):
    result = run("verify", "hadamard", "--arity", "1..3", "--format", "json")
    assert result.exit_code == 0, result.output
    (report,) = json.loads(result.output)
    assert report["suite"] == "hadamard"
    assert report["passed"] is True
    assert len(report["checks"]) == 6


def test_orchestrator_keeps_arity_order(tmp_path):
    forge = OperadForge(str(tmp_path / "missing.yaml"))
    assert forge.config == {}
    dims = forge.dimensions(builtin("bicommutative"), [4, 2, 3], jobs=3)
    assert dims == [{"n": 4, "dim": 14}, {"n": 2, "dim": 2}, {"n": 3, "dim": 6}]
    assert forge.reduce(builtin("novikov"), "(a*c)*b") == "(x1*x2)*x3"
    with pytest.raises(InputError):
        forge.reduce(builtin("novikov"), "(a*b)*c + a")
