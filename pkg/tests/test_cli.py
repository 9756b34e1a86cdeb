import json

import pytest

from banalg.cli import main
from banalg.jsonio import algebra_to_dict, write_json

from conftest import diagonal_algebra


@pytest.fixture
def algebra_file(tmp_path):
    path = tmp_path / "c2.json"
    write_json(str(path), algebra_to_dict(diagonal_algebra(2, "C2")))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_group_and_characters(tmp_path, capsys):
    out = tmp_path / "g.json"
    code, _, _ = run_cli(capsys, "build", "group", "--orders", "2,3", "-o", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["dim"] == 6
    code, stdout, _ = run_cli(capsys, "characters", str(out))
    assert code == 0
    chars = json.loads(stdout)
    assert chars["count"] == 6
    assert all(c["residual"] <= 1e-9 for c in chars["characters"])


def test_build_lau_bundle_and_verify(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    phi = tmp_path / "phi.json"
    write_json(str(a), algebra_to_dict(diagonal_algebra(1, "A")))
    write_json(str(b), algebra_to_dict(diagonal_algebra(2, "B")))
    phi.write_text('{"source": "B", "target": "A", "matrix": [[[1,0],[0,0]]]}')
    bundle = tmp_path / "lau.json"
    code, _, _ = run_cli(capsys, "build", "lau", "--a", str(a), "--b", str(b),
                         "--phi", str(phi), "-o", str(bundle))
    assert code == 0
    for theorem in ("theta", "lemma41", "lau-bse", "tim2", "lemma21"):
        code, stdout, _ = run_cli(capsys, "verify", str(bundle),
                                  "--theorem", theorem, "--format", "text")
        assert code == 0, (theorem, stdout)


def test_build_semidirect(tmp_path, capsys):
    b = tmp_path / "b.json"
    i = tmp_path / "i.json"
    act = tmp_path / "act.json"
    write_json(str(b), algebra_to_dict(diagonal_algebra(1, "B")))
    write_json(str(i), algebra_to_dict(diagonal_algebra(1, "I")))
    act.write_text('{"action_bi": [[0,0,0,1,0]], "action_ib": [[0,0,0,1,0]]}')
    bundle = tmp_path / "sd.json"
    code, _, _ = run_cli(capsys, "build", "semidirect", "--b", str(b), "--i", str(i),
                         "--actions", str(act), "-o", str(bundle))
    assert code == 0
    code, stdout, _ = run_cli(capsys, "verify", str(bundle), "--theorem", "prop24",
                              "--format", "text")
    assert code == 0


def test_multipliers_command(algebra_file, capsys):
    code, stdout, _ = run_cli(capsys, "multipliers", algebra_file, "--left")
    assert code == 0
    doc = json.loads(stdout)
    assert doc["dim"] == 2 and doc["kind"] == "LM"


def test_bse_norm_command(algebra_file, tmp_path, capsys):
    sigma = tmp_path / "sigma.json"
    sigma.write_text('{"values": [[1,0],[1,0]]}')
    code, stdout, _ = run_cli(capsys, "bse-norm", algebra_file,
                              "--sigma", str(sigma), "--dual")
    assert code == 0
    doc = json.loads(stdout)
    assert doc["bse_norm"] == pytest.approx(2.0)
    assert doc["dual_norm"] == pytest.approx(2.0, rel=1e-6)


def test_check_bse_command(algebra_file, capsys):
    code, stdout, _ = run_cli(capsys, "check-bse", algebra_file)
    assert code == 0
    assert json.loads(stdout)["is_bse"] is True


def test_verify_harness_json_deterministic(capsys):
    argv = ["verify", "--families", "diag", "--count", "1", "--seed", "42",
            "--format", "json", "--max-dim", "3"]
    code1, out1, _ = run_cli(capsys, *argv)
    code2, out2, _ = run_cli(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2  # byte-identical
    doc = json.loads(out1)
    assert doc["summary"]["FAIL"] == 0


def test_verify_text_respects_no_color(capsys, monkeypatch):
    monkeypatch.setenv("BANALG_NO_COLOR", "1")
    code, stdout, _ = run_cli(capsys, "verify", "--families", "diag", "--count", "1",
                              "--format", "text", "--max-dim", "3")
    assert code == 0
    assert "\x1b[" not in stdout


def test_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x", "dim": 2, "weights": [1, -1], "structure": []}')
    code, _, err = run_cli(capsys, "characters", str(bad))
    assert code == 2
    assert "weights" in err
    worse = tmp_path / "worse.json"
    worse.write_text("{nope")
    code, _, err = run_cli(capsys, "characters", str(worse))
    assert code == 2
    missing = tmp_path / "missing.json"
    code, _, err = run_cli(capsys, "characters", str(missing))
    assert code == 2


def test_noncontractive_build_exit_1(tmp_path, capsys):
    a = tmp_path / "a.json"
    c = tmp_path / "c.json"
    phi = tmp_path / "phi.json"
    write_json(str(a), algebra_to_dict(diagonal_algebra(2, "A")))
    write_json(str(c), algebra_to_dict(diagonal_algebra(1, "C")))
    phi.write_text('{"source": "C", "target": "A", "matrix": [[[1,0]],[[1,0]]]}')
    code, _, err = run_cli(capsys, "build", "lau", "--a", str(a), "--b", str(c),
                           "--phi", str(phi))
    assert code == 1
    assert "NOT_CONTRACTIVE" in err
    code, _, _ = run_cli(capsys, "build", "lau", "--a", str(a), "--b", str(c),
                         "--phi", str(phi), "--force")
    assert code == 0
