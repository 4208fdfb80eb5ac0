import csv
import io
import json
from importlib import resources

import jsonschema
import pytest

from turnover_cusps.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from turnover_cusps.character import CSV_COLUMNS
from turnover_cusps.verify import SCHEMA_VERSION


def _schema():
    text = resources.files("turnover_cusps").joinpath("schema/verification_report.schema.json").read_text()
    return json.loads(text)


@pytest.fixture(scope="module")
def verify_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("verify") / "report.json"
    code = main(["verify-paper", "--out", str(out)])
    return code, json.loads(out.read_text())


def test_verify_report_matches_schema(verify_run):
    _, doc = verify_run
    jsonschema.validate(doc, _schema())
    assert doc["schema_version"] == SCHEMA_VERSION
    assert _schema()["properties"]["schema_version"]["const"] == SCHEMA_VERSION


def test_verify_exit_code_reflects_failures(verify_run):
    code, doc = verify_run
    failed = [c["name"] for c in doc["checks"] if not c["passed"]]
    assert code == (EXIT_OK if not failed else EXIT_FAIL)
    assert doc["summary"]["failed"] == len(failed)


def test_verify_is_deterministic(verify_run, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify-paper", "--out", str(first)])
    main(["verify-paper", "--out", str(second)])
    assert first.read_bytes() == second.read_bytes()
    assert json.loads(first.read_text()) == verify_run[1]


def test_verify_tiny_tolerance_fails_float_checks(tmp_path):
    out = tmp_path / "tight.json"
    assert main(["verify-paper", "--tol", "1e-30", "--out", str(out)]) == EXIT_FAIL
    doc = json.loads(out.read_text())
    assert doc["tol_override"] == 1e-30
    float_checks = [c for c in doc["checks"] if c["backend"] == "float" and c["tolerance"] is not None]
    assert float_checks and not any(c["passed"] for c in float_checks)
    exact_tight = {c["name"]: c["passed"] for c in doc["checks"] if c["backend"] == "exact"}
    assert exact_tight.pop("isolated_count") is False
    assert all(exact_tight.values())


def test_verify_text_format(capsys):
    code = main(["verify-paper", "--format", "text"])
    out = capsys.readouterr().out
    assert out.splitlines()[-1].endswith("checks passed")
    assert code in (EXIT_OK, EXIT_FAIL)


def test_out_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("TURNOVER_OUT_DIR", str(tmp_path))
    assert main(["cohomology"]) == EXIT_OK
    doc = json.loads((tmp_path / "cohomology.json").read_text())
    assert doc["h1"] == 2 and doc["z1"] == 16


@pytest.mark.parametrize(
    "orders,module,h1,chi",
    [("3,3,3", "adjoint", 2, 0), ("2,3,6", "adjoint", 0, 2), ("2,4,4", "adjoint", 0, 2), ("3,3,3", "standard", None, 2)],
)
def test_cohomology_command(capsys, orders, module, h1, chi):
    assert main(["cohomology", "--orders", orders, "--module", module]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["euler_characteristic"] == chi
    if h1 is not None:
        assert doc["h1"] == h1


def test_cohomology_non_euclidean(capsys):
    assert main(["cohomology", "--orders", "2,3,7"]) == EXIT_FAIL


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["no-such-command"],
        ["cohomology", "--orders", "3,x,3"],
        ["cohomology", "--orders", "3,3"],
        ["cohomology", "--module", "symmetric"],
        ["slice", "--u", "abc"],
        ["slice", "--polar", "0.1"],
        ["slice", "--polar", "0.1,0.2", "--u", "0.1"],
        ["slice", "--u", "nan"],
        ["surface", "--signs", "+x"],
        ["surface", "--grid", "0,1"],
        ["representation"],
        ["representation", "--family", "diagonal"],
        ["representation", "--family", "isolated", "--index", "99"],
        ["representation", "--input", "/nonexistent/file.json"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE


def test_unwritable_output():
    assert main(["cohomology", "--out", "/nonexistent/dir/x.json"]) == EXIT_USAGE


def test_slice_origin_is_cusp(capsys):
    assert main(["slice", "--u", "0", "--v", "0"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["verdict"]["kind"] == "hyperbolic-cusp"


def test_slice_polar_matches_cartesian(capsys):
    main(["slice", "--polar", "0.05,0"])
    polar = json.loads(capsys.readouterr().out)
    main(["slice", "--u", "0.05", "--v", "0"])
    cart = json.loads(capsys.readouterr().out)
    assert polar == cart


def test_slice_command(capsys):
    assert main(["slice", "--u", "0.1", "--v", "-0.2"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["relations"]["passed"]
    assert doc["verdict"]["kind"] == "diagonalizable-positive"
    assert main(["slice", "--polar", "0.1,0.5"]) == EXIT_OK


def test_surface_command(capsys):
    assert main(["surface"]) == EXIT_OK
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 201
    assert main(["surface", "--grid", "1/2,2", "--signs", "+-", "--float"]) == EXIT_OK
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[1][:3] == ["0.5", "-0.5", "-4"]
    assert {r[-1] for r in rows[1:]} == {"S2"}


def test_isolated_command(capsys):
    assert main(["isolated"]) == EXIT_FAIL
    captured = capsys.readouterr()
    doc = json.loads(captured.out)
    assert doc["count"] == 24 and doc["expected_count"] == 19
    assert "differs from expected" in captured.err
    assert all(e["relations_hold"] for e in doc["entries"])
    assert main(["isolated", "--expected", "24"]) == EXIT_OK


def test_isolated_entries_have_distinct_trace_vectors(capsys):
    main(["isolated"])
    doc = json.loads(capsys.readouterr().out)
    traces = [tuple(e["traces"]) for e in doc["entries"]]
    assert len(set(traces)) == len(traces)


def test_representation_roundtrip(tmp_path, capsys):
    path = tmp_path / "rep.json"
    assert main(["representation", "--family", "diagonal", "--x", "2,1,1/2", "--out", str(path)]) == EXIT_OK
    doc = json.loads(path.read_text())
    assert doc["image_b"][0][0] == "0"
    assert main(["representation", "--input", str(path)]) == EXIT_OK
    check = json.loads(capsys.readouterr().out)
    assert check["relations"]["passed"] and check["relations"]["exact"]


def test_representation_bad_product(capsys):
    assert main(["representation", "--family", "diagonal", "--x", "2,2,2"]) == EXIT_FAIL


def test_representation_failing_relations(tmp_path, capsys):
    doc = {
        "format_version": 1,
        "orders": [3, 3, 3],
        "image_a": [["1", "1", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]],
        "image_b": [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    assert main(["representation", "--input", str(path)]) == EXIT_FAIL


def test_malformed_input(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["representation", "--input", str(path)]) == EXIT_USAGE


def test_version(capsys):
    assert main(["--version"]) == EXIT_OK
