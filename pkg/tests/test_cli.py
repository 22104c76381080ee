import copy
import csv
import io
import json

import jsonschema
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import DATA
from contactmetric import schemas
from contactmetric.cli import dumps, main, pair_from_spec
from contactmetric.gallery import ball_grid

N_LAMBDA = str(DATA / "n_lambda_pair.json")
EUCLID_DZ = str(DATA / "euclidean_dz.json")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, text, err = run(*argv)
    doc = json.loads(text) if text else None
    if doc is not None:
        jsonschema.validate(doc, schemas.load(doc["command"]))
    return code, doc, err


def test_check_flat_torus():
    code, doc, _ = run_json("check", "--gallery", "flat-torus", "--points", "50", "--seed", "7")
    assert code == 0 and doc["compatible"]
    assert abs(doc["k"]) == pytest.approx(1.0, abs=1e-9)
    assert len(doc["records"]) == 50


def test_check_hyperbolic_names_predicate():
    code, doc, _ = run_json("check", "--gallery", "hyperbolic")
    assert code == 1 and not doc["compatible"]
    assert "unit-normal" in doc["failed_predicates"]


def test_check_missing_file():
    code, text, err = run("check", "--input", "missing.json")
    assert code == 2 and text == "" and "missing.json" in err


def test_check_not_positive_definite():
    code, _, err = run("check", "--input", str(DATA / "not_pd.json"))
    assert code == 2 and "NotPositiveDefinite" in err


def test_check_from_file_with_override():
    code, doc, _ = run_json("check", "--input", N_LAMBDA, "-P", "s=0.1", "--points", "5")
    assert code == 0 and doc["pair"]["parameters"] == {"s": 0.1}


def test_lemma_verify_counterexample():
    code, doc, _ = run_json("lemma-verify", "--gallery", "counterexample", "-P", "A=1", "-P", "B=2", "--points", "50", "--tol", "1e-5")
    assert code == 0 and doc["passed"]
    assert doc["evaluated_points"] == 50 and doc["max_residual"] < 1e-5


def test_lemma_verify_flat_torus():
    code, doc, _ = run_json("lemma-verify", "--gallery", "flat-torus", "--points", "10")
    assert code == 0
    for r in doc["records"]:
        assert max(abs(v) for row in r["direct"] for v in row) < 1e-10
        assert max(abs(v) for row in r["lemma"] for v in row) < 1e-5


def test_lemma_verify_all_umbilic():
    code, doc, _ = run_json("lemma-verify", "--input", EUCLID_DZ, "--points", "5")
    assert code == 3 and len(doc["umbilic_points"]) == 5 and doc["max_residual"] is None


def test_lemma_verify_incompatible():
    code, doc, _ = run_json("lemma-verify", "--input", str(DATA / "perturbed_counterexample.json"), "--points", "3")
    assert code == 1 and "not compatible" in doc["error"]


def test_lemma_verify_tolerance_failure():
    code, doc, _ = run_json("lemma-verify", "--input", N_LAMBDA, "--points", "3", "--tol", "1e-20")
    assert code == 1 and not doc["passed"]


def test_lemma_verify_csv():
    code, text, _ = run("lemma-verify", "--gallery", "flat-torus", "--points", "4", "--format", "csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0 and len(rows) == 5 and rows[0][0] == "x"


def test_verdict_reports():
    code, doc, _ = run_json("verdict", "-P", "A=2", "-P", "B=1.25", "--radius", "0.1", "--grid", "5")
    assert code == 0
    assert doc["summary"]["grid_points"] == len(ball_grid(0.1, 5))
    code, text, _ = run("verdict", "-P", "A=2", "-P", "B=1.25", "--radius", "0.1", "--grid", "5", "--format", "csv")
    assert len(text.strip().splitlines()) - 1 == len(ball_grid(0.1, 5))


def test_verdict_csv_file(tmp_path):
    target = tmp_path / "minima.csv"
    code, _, _ = run("verdict", "--radius", "0.1", "--grid", "3", "--csv", str(target))
    assert code == 0 and len(target.read_text().splitlines()) == len(ball_grid(0.1, 3)) + 1


@pytest.mark.parametrize("params", [["-P", "A=1", "-P", "B=0.9"], ["-P", "A=-1", "-P", "B=-2"], ["-P", "C=1"], ["-P", "A=x"], ["-P", "A"]])
def test_verdict_bad_params(params):
    code, text, err = run("verdict", *params)
    assert code == 2 and text == "" and err.startswith("error")


def test_scan_umbilic():
    code, doc, _ = run_json("scan-umbilic", "--gallery", "flat-torus", "--box", "0,0,0,1,1,1", "--grid", "11")
    assert code == 0 and doc["umbilic_count"] == 0 and doc["grid_points"] == 1331
    assert doc["min_lambda"] == pytest.approx(0.5, abs=1e-12)
    code, doc, _ = run_json("scan-umbilic", "--input", EUCLID_DZ, "--box=-1,-1,-1,1,1,1", "--grid", "4")
    assert doc["umbilic_count"] == 64
    code, doc, _ = run_json("scan-umbilic", "--gallery", "counterexample", "--box=-0.25,-0.25,-0.25,0.25,0.25,0.25", "--grid", "11")
    assert doc["umbilic_count"] == 0


def test_scan_umbilic_csv_row_count():
    code, text, _ = run("scan-umbilic", "--gallery", "flat-torus", "--box", "0,0,0,1,1,1", "--grid", "4", "--format", "csv")
    assert code == 0 and len(text.strip().splitlines()) == 4**3 + 1


@pytest.mark.parametrize("box", ["1,2,3", "a,b,c,d,e,f", "1,1,1,0,0,0"])
def test_scan_umbilic_bad_box(box):
    assert run("scan-umbilic", "--gallery", "flat-torus", f"--box={box}")[0] == 2


def test_gallery_listing():
    code, doc, _ = run_json("gallery")
    assert code == 0 and [e["name"] for e in doc["entries"]] == ["flat-torus", "counterexample", "hyperbolic"]


def test_curvature_dump():
    code, doc, _ = run_json("curvature", "--gallery", "counterexample", "--at", "0,0,0")
    assert code == 0
    assert doc["christoffel"][2][0][0] == pytest.approx(-0.5, abs=1e-12)
    code, doc, _ = run_json("curvature", "--gallery", "hyperbolic", "--at", "0.1,0.2,0.5")
    assert all(v == pytest.approx(-1.0, abs=1e-10) for v in doc["coordinate_plane_sectional"].values())
    assert run("curvature", "--gallery", "hyperbolic", "--at", "0,0")[0] == 2
    assert run("curvature", "--gallery", "hyperbolic", "--at", "0,0,0")[0] == 2  # z = 0 is outside the chart


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nonsense"],
        ["check"],
        ["check", "--gallery", "sphere"],
        ["check", "--gallery", "flat-torus", "--input", N_LAMBDA],
        ["check", "--gallery", "flat-torus", "--points", "0"],
        ["check", "--gallery", "flat-torus", "--format", "csv"],
        ["check", "--gallery", "flat-torus", "-P", "A=1"],
        ["check", "--input", N_LAMBDA, "-P", "q=1"],
        ["lemma-verify", "--gallery", "counterexample", "--tol", "abc"],
    ],
)
def test_bad_invocations_exit_2(argv):
    assert run(*argv)[0] == 2


def test_reports_byte_identical():
    for argv in (
        ["check", "--gallery", "counterexample", "--points", "20", "--seed", "3"],
        ["lemma-verify", "--input", N_LAMBDA, "--points", "5", "--seed", "3"],
        ["verdict", "--radius", "0.1", "--grid", "3", "--seed", "3"],
        ["scan-umbilic", "--gallery", "counterexample", "--grid", "3"],
    ):
        assert run(*argv)[1] == run(*argv)[1]


def test_float_format_round_trips():
    vals = [0.1, 1 / 3, 2.0**-40, 123456789.123456789, -0.0, 1e300]
    text = dumps(vals)
    assert json.loads(text) == vals
    assert "0.10000000000000001" in text
    assert dumps({"a": float("nan")}) == '{"a": null}\n'


# -- pair specs and fault injection

VALID = json.loads((DATA / "n_lambda_pair.json").read_text())


def test_valid_spec_matches_schema():
    for path in DATA.glob("*.json"):
        jsonschema.validate(json.loads(path.read_text()), schemas.load("pairspec"))


def _mutations():
    def drop(key):
        def f(d):
            del d[key]

        return f

    def setter(path, value):
        def f(d):
            target = d
            for p in path[:-1]:
                target = target[p]
            target[path[-1]] = value

        return f

    return {
        "no metric": drop("metric"),
        "no alpha": drop("alpha"),
        "metric 2x3": setter(["metric"], [["1", "0", "0"], ["0", "1", "0"]]),
        "metric entry number": setter(["metric", 0, 0], 1),
        "mirror mismatch": setter(["metric", 1, 0], "s*cos(z)"),
        "both mirrors missing": setter(["metric", 0, 1], None),
        "alpha 2 entries": setter(["alpha"], ["0", "1"]),
        "alpha syntax": setter(["alpha", 1], "x +"),
        "unknown identifier": setter(["alpha", 0], "w"),
        "unknown function": setter(["metric", 2, 2], "tan(z)"),
        "parameter string": setter(["parameters", "s"], "0.3"),
        "empty domain": setter(["domain"], {"min": [1, 1, 1], "max": [0, 0, 0]}),
        "short domain": setter(["domain", "min"], [0, 0]),
        "not an object": lambda d: d.clear() or d.update({"_": 0}),
    }


@pytest.mark.parametrize("name", sorted(_mutations()))
def test_fault_injected_specs_exit_2(name, tmp_path):
    doc = copy.deepcopy(VALID)
    _mutations()[name](doc)
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(doc))
    for argv in (["check", "--points", "2"], ["lemma-verify", "--points", "2"], ["scan-umbilic", "--grid", "2"]):
        code, text, err = run(*argv, "--input", str(path))
        assert code == 2 and text == "" and err.startswith("error"), (name, argv[0])


@given(junk=st.text(alphabet="$#@!?;{}[]&|~`", min_size=1, max_size=5), where=st.integers(0, 2))
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_garbage_expressions_exit_2(junk, where, tmp_path):
    doc = copy.deepcopy(VALID)
    doc["alpha"][where] = doc["alpha"][where] + junk
    path = tmp_path / "junk.json"
    path.write_text(json.dumps(doc))
    assert run("check", "--input", str(path), "--points", "1")[0] == 2


def test_invalid_json_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{ not json")
    code, _, err = run("check", "--input", str(path))
    assert code == 2 and "invalid JSON" in err


def test_pair_from_spec_mirrors():
    pair = pair_from_spec(VALID)
    assert pair.metric.g[1][0] == pair.metric.g[0][1]
    assert pair.params == {"s": 0.3}
