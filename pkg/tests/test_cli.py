"""Exit codes, report schema, and determinism of the command-line front end."""

import json
import subprocess
import sys

import pytest

from idealforge.cli import EXIT_CHECK, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, run
from idealforge.configs import read_points

TOP_KEYS = ["config", "mode", "claims", "gamma", "design", "counts", "timings"]


def run_json(argv, tmp_path, name="report.json"):
    out = tmp_path / name
    code = run(argv + ["--out", str(out)])
    return code, json.loads(out.read_text())


def test_gamma_ngon6_text_line(capsys):
    assert run(["gamma", "ngon", "--n", "6", "--format", "text"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert "gamma.ngon6.gamma1 = 3" in lines
    assert all(" = " in line for line in lines)


def test_report_schema_keys(tmp_path):
    code, doc = run_json(["verify", "icosahedron"], tmp_path)
    assert code == EXIT_OK
    assert list(doc) == TOP_KEYS
    for claim in doc["claims"]:
        assert {"id", "status", "mode"} <= set(claim)


def test_verify_e8_full_theorem_claims(tmp_path):
    code, doc = run_json(["verify", "e8", "--full"], tmp_path)
    assert code == EXIT_OK
    statuses = {c["id"]: c["status"] for c in doc["claims"]}
    for part in ("i", "ii", "iii", "iv"):
        assert statuses[f"thmE8.{part}"] == "pass"
    assert statuses["design.E8.t7"] == "pass"
    assert all(c["mode"] == "full" for c in doc["claims"])


def test_verify_sampled_labels(tmp_path):
    code, doc = run_json(["verify", "e8", "--sampled", "--seed", "7"], tmp_path)
    assert code == EXIT_OK
    assert doc["mode"] == "sampled"
    modes = {c["id"]: c["mode"] for c in doc["claims"]}
    assert modes["thmE8.i"] == "sampled"
    assert doc["design"]["mode"] == "sampled"


def test_usage_errors_exit_64():
    for argv in (
        ["verify", "dodecahedron"],
        ["gamma", "e8", "--n", "5"],
        ["verify", "e8", "--threads", "0"],
        ["verify", "e8", "--full", "--sampled"],
        ["groebner", "leech"],
        ["enumerate", "ngon"],
        ["build", "ngon", "--n", "7"],
        [],
    ):
        assert run(argv) == EXIT_USAGE, argv


def test_point_file_roundtrip_passes(tmp_path):
    pts = tmp_path / "ico.pts"
    assert run(["build", "icosahedron", "--points-out", str(pts), "--out", str(tmp_path / "b.json")]) == EXIT_OK
    assert read_points(str(pts)).npoints == 12
    assert run(["verify", "icosahedron", "--points", str(pts), "--out", str(tmp_path / "v.json")]) == EXIT_OK


def test_corrupted_point_value_fails(tmp_path):
    pts = tmp_path / "ico.pts"
    run(["build", "icosahedron", "--points-out", str(pts), "--out", str(tmp_path / "b.json")])
    lines = pts.read_text().splitlines()
    first = lines[1].split()
    first[0] = "7/3"
    lines[1] = " ".join(first)
    bad = tmp_path / "bad.pts"
    bad.write_text("\n".join(lines) + "\n")
    code, doc = run_json(["verify", "icosahedron", "--points", str(bad)], tmp_path)
    assert code == EXIT_CHECK
    assert any(c["status"] == "fail" for c in doc["claims"])


def test_unreadable_point_file_fails(tmp_path):
    bad = tmp_path / "junk.pts"
    bad.write_text("dim 3 norm bogus\n1 2 3\n")
    code, doc = run_json(["verify", "icosahedron", "--points", str(bad)], tmp_path)
    assert code == EXIT_CHECK
    assert doc["claims"][0]["id"] == "icosahedron.points_file"
    assert doc["claims"][0]["status"] == "fail"


def test_reports_identical_without_timings(tmp_path):
    docs = []
    for name in ("a.json", "b.json"):
        code, doc = run_json(
            ["verify", "e8", "--sampled", "--seed", "7"], tmp_path, name
        )
        assert code == EXIT_OK
        doc.pop("timings")
        docs.append(json.dumps(doc))
    assert docs[0] == docs[1]


def test_build_leech_counts(tmp_path):
    code, doc = run_json(["build", "leech"], tmp_path)
    assert code == EXIT_OK
    counts = doc["counts"]
    assert counts["points"] == 196560
    assert counts["dimension"] == 24
    assert counts["golay_codewords"] == 4096
    assert counts["weight8_words"] == 759
    assert counts["type_split"] == [97152, 98304, 1104]


def test_groebner_cube4_dimension_mismatch(tmp_path):
    code, doc = run_json(["groebner", "cube4"], tmp_path)
    assert code == EXIT_CHECK
    assert doc["claims"][0]["status"] == "fail"
    assert doc["counts"]["quotient_dimension"] == 225


def test_groebner_e6_certifies(tmp_path):
    code, doc = run_json(["groebner", "e6"], tmp_path)
    assert code == EXIT_OK
    assert "FULL_GROEBNER" in doc["claims"][0]["detail"]
    assert doc["counts"]["hilbert"] == [1, 6, 20, 30, 15]
    assert sum(doc["counts"]["hilbert"]) == 72


def test_groebner_budget_exhaustion_exits_3(tmp_path):
    assert run(["groebner", "knn", "--budget", "5", "--out", str(tmp_path / "x.json")]) == EXIT_RESOURCE


def test_groebner_basis_file(tmp_path):
    basis = tmp_path / "basis.txt"
    code, doc = run_json(["groebner", "icosahedron", "--basis-out", str(basis)], tmp_path)
    assert code == EXIT_OK
    assert len(basis.read_text().splitlines()) == doc["counts"]["basis_size"]


def test_enumerate_e8_matches_construction(tmp_path):
    code, doc = run_json(["enumerate", "e8"], tmp_path)
    assert code == EXIT_OK
    counts = doc["counts"]
    assert counts["enumerated"] == 240
    assert counts["set_equal"] is True
    assert counts["unimodular"] is True


def test_gamma_leech_interval(tmp_path):
    code, doc = run_json(["gamma", "leech"], tmp_path)
    assert code == EXIT_OK
    entry = doc["gamma"]["leech"]
    assert entry["gamma1"] == 6
    assert entry["interval"] == [6, 6]
    assert entry["gamma2"]["upper"] == 6
    assert entry["gamma2"]["equals_first_threshold"] == "conditional"


def test_gamma_e7_certified_equality(tmp_path):
    code, doc = run_json(["gamma", "e7"], tmp_path)
    assert code == EXIT_OK
    entry = doc["gamma"]["e7"]
    assert entry["gamma1"] == 3
    assert entry["gamma2"]["level"] == "FULL_GROEBNER"
    assert entry["gamma2"]["equals_first_threshold"] == "yes"


def test_report_knn2_combines_sections(tmp_path):
    code, doc = run_json(["report", "knn", "--n", "2"], tmp_path)
    assert code == EXIT_OK
    assert doc["gamma"]["knn2"]["gamma1"] == 2
    assert doc["gamma"]["knn2"]["gamma2"]["modulo_linear_forms"] is True
    assert all(c["status"] in ("pass", "skipped") for c in doc["claims"])


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "idealforge.cli", "build", "icosahedron"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == EXIT_OK
    doc = json.loads(proc.stdout)
    assert doc["counts"]["points"] == 12
    assert proc.stderr == ""
