"""Driving the CLI in-process: outputs, schemas, exit codes."""

import json

import jsonschema
import pytest

from polyred.cli import main
from polyred.maps import is_yagzhev
from polyred.textio import load_schema, parse_map


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


# -- report commands ---------------------------------------------------------


def test_analyze_json_validates(capsys):
    data = run_json(capsys, "analyze", "druzkowski-toy", "--json")
    jsonschema.validate(data, load_schema("analysis"))
    assert data["dim"] == 2
    assert data["mode"] == "exact"
    assert data["yagzhev"] and data["druzkowski"]
    assert data["keller"] is False


def test_analyze_human_output(capsys):
    code, out, _ = run(capsys, "analyze", "cube-x")
    assert code == 0
    assert "dimension" in out and "keller" in out


def test_attributes_json_validates(capsys):
    data = run_json(capsys, "attributes", "cube-x", "--samples", "20", "--json")
    jsonschema.validate(data, load_schema("attribute-report"))
    assert data["dex"] == 3
    assert data["mfs_observed"] == 1


def test_attributes_accepts_file_path(capsys, tmp_path):
    path = tmp_path / "m.map"
    path.write_text("vars x y\npoly p = x^3\npoly q = y\n")
    data = run_json(capsys, "attributes", str(path), "--samples", "10", "--json")
    assert data["dex"] == 3
    assert data["sag_external"] is None


def test_attributes_deterministic(capsys):
    a = run(capsys, "attributes", "triple-root", "--samples", "15", "--json")
    b = run(capsys, "attributes", "triple-root", "--samples", "15", "--json")
    assert a == b


# -- reduce and verify-cert --------------------------------------------------


def test_reduce_writes_map_and_certificate(capsys, tmp_path):
    out = tmp_path / "out.map"
    cert = tmp_path / "cert.json"
    code, stdout, _ = run(capsys, "reduce", "plane-quad", "--to", "yagzhev",
                          "--out", str(out), "--cert", str(cert))
    assert code == 0
    assert "stages:" in stdout
    g = parse_map(out.read_text()).to_polymap()
    assert is_yagzhev(g)
    blob = json.loads(cert.read_text())
    jsonschema.validate(blob, load_schema("certificate"))

    code, stdout, _ = run(capsys, "verify-cert", str(cert),
                          "--fiber-samples", "5")
    assert code == 0
    assert "valid" in stdout

    data = run_json(capsys, "verify-cert", str(cert), "--fiber-samples", "3",
                    "--json")
    jsonschema.validate(data, load_schema("verify-report"))
    assert data["certificate"]["ok"]
    assert data["fiber"]["ok"]


def test_reduce_to_cubic_stdout(capsys):
    code, out, err = run(capsys, "reduce", "random-d4-n2", "--to", "cubic")
    assert code == 0
    g = parse_map(out).to_polymap()
    assert g.degree() <= 3
    assert "stages:" in err          # summary stays off stdout


def test_verify_cert_flags_tampering(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    run(capsys, "reduce", "plane-quad", "--to", "yagzhev",
        "--out", str(tmp_path / "o.map"), "--cert", str(cert))
    blob = json.loads(cert.read_text())
    blob["target"] = blob["source"]
    cert.write_text(json.dumps(blob))
    code, _, _ = run(capsys, "verify-cert", str(cert))
    assert code == 1


def test_verify_cert_rejects_non_certificates(capsys, tmp_path):
    path = tmp_path / "not.json"
    path.write_text("{\"format\": \"something\"}")
    code, _, err = run(capsys, "verify-cert", str(path))
    assert code == 2
    assert "not a certificate" in err


# -- pairing commands --------------------------------------------------------


def test_pair_up_json_validates(capsys):
    data = run_json(capsys, "pair-up", "yagzhev-2d-a", "--json")
    jsonschema.validate(data, load_schema("pairing"))
    assert data["axioms_ok"]


def test_pair_round_trip_through_files(capsys, tmp_path):
    data = run_json(capsys, "pair-up", "yagzhev-3d-a", "--json")
    dru = tmp_path / "dru.map"
    dru.write_text(data["f"])
    amat = tmp_path / "a.json"
    amat.write_text(json.dumps(data["a"]))
    back = run_json(capsys, "pair-down", str(dru), "--matrix", str(amat),
                    "--json")
    assert back["g"] == data["g"]
    assert back["axioms_ok"]


def test_pair_up_rejects_non_cubic(capsys):
    code, _, err = run(capsys, "pair-up", "plane-quad")
    assert code == 1
    assert "check failed" in err


# -- symmetrize and segre ----------------------------------------------------


def test_symmetrize_output_parses(capsys):
    code, out, _ = run(capsys, "symmetrize", "cube-x")
    assert code == 0
    doc = parse_map(out)
    assert len(doc.variables) == 4
    assert "potential" in doc.metadata


def test_segre_output_parses(capsys):
    code, out, _ = run(capsys, "segre", "yagzhev-2d-a")
    assert code == 0
    doc = parse_map(out)
    assert len(doc.variables) == 3


# -- examples ----------------------------------------------------------------


def test_examples_list(capsys):
    code, out, _ = run(capsys, "examples", "list")
    assert code == 0
    assert "pinchuk" in out


def test_examples_show_round_trips(capsys):
    code, out, _ = run(capsys, "examples", "show", "pinchuk")
    assert code == 0
    doc = parse_map(out)
    assert max(p.degree() for _, p in doc.components) == 25


# -- exit codes --------------------------------------------------------------


def test_unknown_id_is_usage_error(capsys):
    code, _, err = run(capsys, "attributes", "nope")
    assert code == 2
    assert "neither a file nor a built-in" in err


def test_parse_error_is_usage_error(capsys, tmp_path):
    path = tmp_path / "bad.map"
    path.write_text("vars x\npoly p = x +\n")
    code, _, err = run(capsys, "analyze", str(path))
    assert code == 2
    assert "line 2" in err


def test_failed_check_is_exit_1(capsys):
    code, _, err = run(capsys, "attributes", "mixed-3d")
    assert code == 1
    assert "plane maps" in err


def test_budget_exceeded_is_exit_3(capsys):
    code, _, err = run(capsys, "reduce", "random-d6-n2", "--to", "cubic",
                       "--budget-dim", "3")
    assert code == 3
    assert "budget exceeded" in err


def test_bad_usage_raises_systemexit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["reduce", "cube-x"])      # --to is required
    assert exc.value.code == 2
