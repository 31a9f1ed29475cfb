import csv
import io
import json

import pytest
from click.testing import CliRunner

from glpsh.cli import main
from glpsh.groups import gl
from glpsh.rplus import basis


@pytest.fixture
def runner():
    return CliRunner()


def lines(result):
    return [json.loads(s) for s in result.stdout.splitlines() if s.strip()]


@pytest.mark.parametrize("spec,count", [("gl:2:2", 7), ("gl:0:2", 1), ("gl:1:3,gl:1:3", 11), ("gl:2:3", 43)])
def test_enumerate_counts(runner, spec, count):
    res = runner.invoke(main, ["enumerate", "--group", spec])
    assert res.exit_code == 0
    rows = lines(res)
    assert len(rows) == count
    assert [r["index"] for r in rows] == list(range(count))


def test_enumerate_central_and_csv(runner):
    res = runner.invoke(main, ["enumerate", "--group", "gl:2:3", "--central", "trivial", "--format", "csv"])
    assert res.exit_code == 0
    rows = list(csv.reader(io.StringIO(res.stdout)))
    assert rows[0][0] == "index" and len(rows) == 26


def test_env_override(runner):
    res = runner.invoke(main, ["enumerate"], env={"GLPSH_GROUP": "gl:2:2"})
    assert res.exit_code == 0 and len(lines(res)) == 7


@pytest.mark.parametrize(
    "args",
    [
        ["enumerate"],
        ["enumerate", "--group", "gl:2:6"],
        ["enumerate", "--group", "gl:2:2", "--cap-order", "0"],
        ["verify-all", "--checks", "nope"],
        ["rplus", "mul", "--group", "gl:2:2", "#0", "#99"],
        ["rplus", "bmap", "--group", "gl:2:2", "{not json"],
    ],
)
def test_config_errors_exit_2(runner, args):
    res = runner.invoke(main, args)
    assert res.exit_code == 2
    assert "error:" in res.stderr


def test_pair_json_roundtrip(runner):
    res = runner.invoke(main, ["enumerate", "--group", "gl:2:3"])
    rows = lines(res)
    row = rows[17]
    spec = json.dumps({"gens": row["gens"], "N": row["N"], "exps": row["exps"]})
    a = runner.invoke(main, ["rplus", "bmap", "--group", "gl:2:3", spec])
    b = runner.invoke(main, ["rplus", "bmap", "--group", "gl:2:3", "#17"])
    assert a.exit_code == b.exit_code == 0
    assert a.stdout == b.stdout


def test_rplus_commands(runner):
    for args in (["mul", "#1", "#2"], ["form", "#3", "#1"], ["brauer", "#4"]):
        res = runner.invoke(main, ["rplus", *args, "--group", "gl:2:2"])
        assert res.exit_code == 0, res.stderr
        json.loads(res.stdout)
    res = runner.invoke(main, ["rplus", "form", "#0", "#0", "--group", "gl:2:2"])
    assert json.loads(res.stdout)["form"] == 1


def test_psh_and_hh_commands(runner):
    ok = [
        ["psh", "mul", "--q", "2", "--a", "1", "--b", "1", "#0", "#0"],
        ["psh", "comul", "--q", "3", "--a", "2", "--alpha", "1", "#5"],
        ["psh", "verify", "hopf", "--q", "2", "--a", "1", "--b", "1"],
        ["psh", "verify", "bcompat", "--q", "2", "--a", "2", "--alpha", "1"],
        ["hh", "normalize", "--group", "gl:2:2", "#3"],
        ["hh", "compose", "--group", "gl:2:2", "#0", "#0"],
        ["hh", "comul", "--group", "gl:2:2", "--alpha", "1", "#4"],
        ["hh", "verify", "hom", "--group", "gl:2:2", "--alpha", "1"],
        ["hh", "verify", "square", "--q", "2", "--sample", "3"],
    ]
    for args in ok:
        res = runner.invoke(main, args)
        assert res.exit_code == 0, (args, res.stderr)
        assert res.stdout.strip()


def test_verify_all_list_and_empty(runner):
    res = runner.invoke(main, ["verify-all", "--list"])
    assert res.exit_code == 0 and "hh-condition [experimental]" in res.stdout
    res = runner.invoke(main, ["verify-all", "--checks", ""])
    assert res.exit_code == 0 and res.stdout == ""
    assert "0 reports" in res.stderr


def test_verify_all_out_file_and_csv(runner, tmp_path):
    out = tmp_path / "r.csv"
    res = runner.invoke(
        main, ["verify-all", "--group", "gl:2:2", "--checks", "mackey,adjunction", "--format", "csv", "--out", str(out)]
    )
    assert res.exit_code == 0 and res.stdout == ""
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 14 and {r["status"] for r in rows} == {"pass"}


def test_verify_all_all_skipped_warns(runner):
    res = runner.invoke(main, ["verify-all", "--checks", "mackey", "--cap-order", "5"])
    assert res.exit_code == 0
    assert "warning" in res.stderr


def test_gl13_pairs_match_library(runner):
    res = runner.invoke(main, ["enumerate", "--group", "gl:1:3"])
    assert [r["key"] for r in lines(res)] == [p.to_json()["key"] for p in basis(gl(1, 3))]
