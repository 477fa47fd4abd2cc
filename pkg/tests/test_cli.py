import json

from repvar.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--n", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert (doc["fix"], doc["fix_char"], doc["torus"]) == (3, 3, 5)
    code, out, _ = run(capsys, "count", "--n", "3", "--format", "json")
    assert json.loads(out)["torus"] == 9
    code, out, _ = run(capsys, "count", "--n", "0", "--format", "json")
    doc = json.loads(out)
    assert (doc["fix"], doc["fix_char"], doc["torus"]) == (1, 1, 1)


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["fix_labels"]) == 5
    assert len(doc["torus_labels"]) == 9
    assert "central" in doc["fix_labels"]


def test_representative_classify_roundtrip(tmp_path, capsys):
    rep_file = tmp_path / "rep.json"
    code, out, _ = run(
        capsys, "representative", "--n", "2", "--label", "+,0,1", "--out", str(rep_file)
    )
    assert code == 0 and rep_file.exists()
    code, out, _ = run(capsys, "classify", str(rep_file))
    assert code == 0
    assert out.strip() == "+,0,1"


def test_minus_sign_label_equals_form(tmp_path, capsys):
    rep_file = tmp_path / "rep.json"
    code, _, _ = run(
        capsys, "representative", "--n", "3", "--label=-,0,1", "--out", str(rep_file)
    )
    assert code == 0
    code, out, _ = run(capsys, "classify", str(rep_file))
    assert code == 0 and out.strip() == "-,0,1"


def test_torus_representative_roundtrip(tmp_path, capsys):
    rep_file = tmp_path / "trep.json"
    code, _, _ = run(
        capsys, "representative", "--n", "3", "--label", "eps=-1,-,0,1",
        "--out", str(rep_file),
    )
    assert code == 0
    code, out, _ = run(capsys, "classify", str(rep_file), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["label"] == "eps=-1,-,0,1"
    assert doc["system"] == "torus"


def test_bad_label_is_input_error(capsys):
    code, _, err = run(capsys, "representative", "--n", "2", "--label", "nonsense")
    assert code == 2
    code, _, err = run(capsys, "representative", "--n", "2", "--label", "+,0,9")
    assert code == 2


def test_classify_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"format": "other"}')
    code, _, err = run(capsys, "classify", str(bad))
    assert code == 2
    assert "format" in err
    missing = tmp_path / "missing.json"
    code, _, err = run(capsys, "classify", str(missing))
    assert code == 2


def test_probe_roundtrip_and_refusal(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    run(capsys, "representative", "--n", "2", "--label", "+,0,1", "--out", str(a))
    run(capsys, "representative", "--n", "2", "--label", "+,1,0", "--out", str(b))
    cert = tmp_path / "cert.json"
    code, _, err = run(capsys, "probe", str(a), str(b), "--out", str(cert))
    assert code == 1
    assert "label mismatch" in err
    code, out, _ = run(capsys, "probe", str(a), str(a), "--out", str(cert))
    assert code == 0 and cert.exists()
    doc = json.loads(cert.read_text())
    assert doc["format"] == "pathcert-1"


def test_census_cli(capsys):
    code, out, _ = run(
        capsys, "census", "--n", "1", "--samples", "4", "--seed", "5",
        "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert len(doc["reports"]) == 2


def test_census_determinism(capsys):
    args = ("census", "--n", "1", "--samples", "3", "--seed", "9", "--format", "json")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2


def test_verify_cli(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert all(row["ok"] for row in doc["checks"])
