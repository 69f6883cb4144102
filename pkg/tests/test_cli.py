import csv
import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from axisrules import load_profile
from axisrules.cli import main

import oracles

WORKED = "4 : b,c,d\n4 : a,b\n3 : a,d\n1 : a,c\n1 : b,c\n"
COST_BALLOTS = "candidates: a,b,c,d,e\n1 : b,c,d\n1 : a,e\n1 : a,b,d,e\n1 : a,b,e\n1 : a,c,e\n"


def schema(name: str) -> dict:
    return json.loads(resources.files("axisrules").joinpath(f"schemas/{name}.schema.json").read_text())


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def worked_file(tmp_path):
    path = tmp_path / "worked_file.txt"
    path.write_text(WORKED)
    return path


@pytest.mark.parametrize(
    "rule, axes",
    [("vd", [list("abcd")]), ("mf", [list("abcd")]), ("bc", [list("cbad")]), ("ft", [list("abdc"), list("adbc")])],
)
def test_solve_worked_profile(capsys, worked_file, rule, axes):
    code, out, _ = run(capsys, "solve", "--rule", rule, "--input", worked_file)
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema("result"))
    assert doc["optimal_axes"] == axes
    assert "per_axis_costs" not in doc


def test_solve_all_optimal_recomputes_costs(capsys, worked_file):
    _, out, _ = run(capsys, "solve", "--rule", "ft", "--input", worked_file, "--all-optimal", "--threads", 2)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("result"))
    assert doc["per_axis_costs"] == [6, 6]
    assert doc["optimal_cost"] == 6 and doc["optimal_cost_exact"] == "6"


def test_axes_in_canonical_orientation(capsys, tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("2 : z,y\n1 : y,x\n1 : x,w\n")
    _, out, _ = run(capsys, "solve", "--rule", "bc", "--input", path)
    axes = json.loads(out)["optimal_axes"]
    assert axes == [list("wxyz")]
    assert all(a == list(oracles.canonical(a)) for a in axes)


def test_no_prune_and_decompose_agree(capsys, tmp_path):
    path = tmp_path / "blocks.txt"
    path.write_text("5 : a,b,c\n4 : c,d\n3 : x,y\n2 : w,x,y\n1 : a,b,d\n1 : a,c\n1 : w,y,z\n")
    docs = []
    for flags in ([], ["--no-prune"], ["--decompose"]):
        _, out, _ = run(capsys, "solve", "--rule", "ms", "--input", path, *flags)
        docs.append(json.loads(out))
    assert docs[0]["optimal_axes"] == docs[1]["optimal_axes"] == docs[2]["optimal_axes"]
    assert docs[1]["axes_pruned"] == 0
    assert len(docs[0]["optimal_axes"]) == 4


def test_export_ilp(capsys, worked_file, tmp_path):
    lp = tmp_path / "m.lp"
    code, _, _ = run(capsys, "solve", "--rule", "bc", "--input", worked_file, "--export-ilp", lp)
    assert code == 0
    assert lp.read_text().rstrip().endswith("End")
    code, _, err = run(capsys, "solve", "--rule", "ms", "--input", worked_file, "--export-ilp", lp)
    assert code == 4 and "vd and bc" in err


def test_ranking_solve(capsys, tmp_path):
    path = tmp_path / "r.txt"
    path.write_text("2 : a>b>c>d\n1 : d>c>b>a\n1 : b>a>c>d\n")
    _, out, _ = run(capsys, "solve", "--rule", "ft-rank", "--input", path, "--all-optimal")
    doc = json.loads(out)
    jsonschema.validate(doc, schema("result"))
    assert doc["optimal_cost"] == 0
    assert list("abcd") in doc["optimal_axes"]


@pytest.mark.parametrize(
    "text, argv, code",
    [
        ("x: a,b\n", ["--rule", "vd"], 2),
        (WORKED, ["--rule", "borda"], 4),
        (WORKED, ["--rule", "vd-rank"], 4),
        (WORKED, ["--rule", "vd", "--decompose"], 4),
        (WORKED, ["--rule", "genus", "--decompose"], 4),
        ("candidates: a,b,c,d,e,f,g,h,i,j,k,l,m\n1 : a,b\n", ["--rule", "vd"], 3),
    ],
)
def test_solve_exit_codes(capsys, tmp_path, text, argv, code):
    path = tmp_path / "p.txt"
    path.write_text(text)
    got, out, err = run(capsys, "solve", "--input", path, *argv)
    assert got == code
    assert out == ""
    assert err.startswith("axisrules: error:")


def test_parse_error_reports_line(capsys, tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("1 : a,b\n\n2 : a,,c\n")
    code, _, err = run(capsys, "solve", "--rule", "vd", "--input", path)
    assert code == 2 and "line 3" in err


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "solve", "--rule", "vd", "--input", tmp_path / "nope.txt")[0] == 2


@pytest.mark.parametrize(
    "rule, costs",
    [
        ("vd", [0, 1, 1, 1, 1]),
        ("mf", [0, 1, 1, 1, 2]),
        ("bc", [0, 3, 1, 2, 2]),
        ("ms", [0, 3, 2, 2, 2]),
        ("ft", [0, 3, 4, 4, 4]),
    ],
)
def test_cost_breakdown(capsys, tmp_path, rule, costs):
    path = tmp_path / "fig.txt"
    path.write_text(COST_BALLOTS)
    code, out, _ = run(capsys, "cost", "--rule", rule, "--input", path, "--axis", "a,b,c,d,e")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema("cost"))
    assert [e["cost"] for e in doc["entries"]] == costs
    assert doc["cost"] == sum(costs)


def test_cost_of_interval_profile_is_zero(capsys, tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("1 : a,b\n2 : b,c\n")
    _, out, _ = run(capsys, "cost", "--rule", "ft", "--input", path, "--axis", "a,b,c")
    assert json.loads(out)["cost"] == 0


@pytest.mark.parametrize("axis", ["a,b,c", "a,b,c,z", "a,b,c,c"])
def test_cost_bad_axis(capsys, worked_file, axis):
    assert run(capsys, "cost", "--rule", "vd", "--input", worked_file, "--axis", axis)[0] == 5


def test_gen_maverick_without_noise_is_linear(capsys, tmp_path):
    out = tmp_path / "g.txt"
    assert run(capsys, "gen", "--model", "maverick", "--p", 0, "--m", 6, "--n", 30, "--seed", 4, "--out", out)[0] == 0
    jsonschema.validate(json.loads((tmp_path / "g.txt.truth.json").read_text()), schema("truth"))
    code, stdout, _ = run(capsys, "check-linear", "--input", out)
    doc = json.loads(stdout)
    jsonschema.validate(doc, schema("linear"))
    truth = json.loads((tmp_path / "g.txt.truth.json").read_text())["axis"]
    assert doc["linear"] is True
    assert truth in doc["consistent_axes"]


def test_gen_noisy_round_trip_and_determinism(capsys, tmp_path):
    args = ["gen", "--model", "noisy", "--sigma", 0.1, "--r", 0.4, "--m", 7, "--n", 100, "--seed", 11]
    run(capsys, *args, "--out", tmp_path / "a.txt")
    run(capsys, *args, "--out", tmp_path / "b.txt")
    p = load_profile(tmp_path / "a.txt")
    assert p.m == 7 and sum(w for _, w in p.entries) == 100
    assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()
    assert (tmp_path / "a.txt.truth.json").read_bytes() == (tmp_path / "b.txt.truth.json").read_bytes()
    run(capsys, *args, "--rankings", "--out", tmp_path / "r.txt")
    assert len(load_profile(tmp_path / "r.txt").entries) == 100


@pytest.mark.parametrize(
    "argv",
    [
        ["--model", "flips", "--p", 0.6],
        ["--model", "swaps", "--phi", 2],
        ["--model", "noisy", "--sigma", 0.1, "--r", 0],
        ["--model", "flips", "--p", 0.1, "--rankings"],
    ],
)
def test_gen_parameter_errors(capsys, tmp_path, argv):
    assert run(capsys, "gen", "--m", 5, "--n", 5, "--out", tmp_path / "x.txt", *argv)[0] == 6


def test_experiment_csv(capsys, tmp_path):
    out = tmp_path / "e.csv"
    code, _, _ = run(
        capsys, "experiment", "--models", "noisy:sigma=0.1,r=0.4", "--rules", "vd,mf,bc,ms,ft",
        "--replicates", 3, "--m", 5, "--n", 30, "--out", out,
    )
    assert code == 0
    data = out.read_bytes()
    assert b"\r" not in data
    rows = list(csv.DictReader(io.StringIO(data.decode())))
    assert len(rows) == 15
    assert {r["rule"] for r in rows} == {"vd", "mf", "bc", "ms", "ft"}
    assert all(0 <= float(r["distance"]) <= 5 for r in rows)


def test_experiment_zero_replicates(capsys):
    code, out, _ = run(capsys, "experiment", "--models", "maverick:p=0.1", "--rules", "vd", "--replicates", 0)
    assert code == 0
    assert out == "model,params,rule,replicate,distance\n"


def test_experiment_bad_spec(capsys):
    assert run(capsys, "experiment", "--models", "noisy:tau=3", "--rules", "vd", "--replicates", 1)[0] == 6
    assert run(capsys, "experiment", "--models", "maverick:p=0.1", "--rules", "vd-rank", "--replicates", 1)[0] == 4


def test_axioms_fixtures(capsys):
    code, out, _ = run(capsys, "axioms", "--axiom", "clearance", "--rule", "vd", "--fixtures")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema("axioms"))
    assert doc["holds"] is False
    assert doc["violations"][0]["details"]["axis"] == list("baced")


def test_axioms_random(capsys):
    code, out, _ = run(capsys, "axioms", "--axiom", "clearance", "--rule", "ft", "--random", 40, "--seed", 2)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("axioms"))
    assert code == 0 and doc["holds"] is True and doc["checked"] == 40


def test_axioms_stability_counterexample(capsys):
    _, out, _ = run(capsys, "axioms", "--axiom", "stability", "--rule", "mf")
    doc = json.loads(out)
    assert doc["holds"] is False
    assert doc["violations"][0]["instance"]["ballot"] == ["a", "b", "d", "f"]


@pytest.mark.parametrize("argv", [["--axiom", "pareto", "--rule", "vd"], ["--axiom", "clearance", "--rule", "x"]])
def test_axioms_unknown(capsys, argv):
    assert run(capsys, "axioms", *argv)[0] == 4


def test_check_linear_star(capsys, tmp_path):
    path = tmp_path / "star.txt"
    path.write_text("1 : a,b\n1 : a,c\n1 : a,d\n")
    _, out, _ = run(capsys, "check-linear", "--input", path)
    assert json.loads(out) == {"linear": False, "consistent_axes": []}


def test_console_entry_point(worked_file):
    proc = subprocess.run(
        [sys.executable, "-m", "axisrules.cli", "solve", "--rule", "vd", "--input", str(worked_file)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["optimal_cost"] == 4
