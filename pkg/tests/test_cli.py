import json

import pytest

from scmsbke import cli
from scmsbke.example import load_fixture
from scmsbke.serialization import hexint, unhexint


def run(*argv):
    return cli.main([str(a) for a in argv])


def test_keygen_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("keygen", "--scheme", "rsa", "--strength", 80, "--seed", 7, "--out", a) == 0
    assert run("keygen", "--scheme", "rsa", "--strength", 80, "--seed", 7, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert set(doc["caterpillar"]) == {"N", "S"}
    assert unhexint(doc["caterpillar"]["N"]).bit_length() == 1024


def test_keygen_ecc_curve(tmp_path):
    out = tmp_path / "k.json"
    assert run("keygen", "--scheme", "ecc", "--strength", 128, "--out", out) == 0
    assert json.loads(out.read_text())["caterpillar"]["curve"] == "P-256"


def test_keygen_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as info:
        run("keygen", "--scheme", "rsa")
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        run("keygen", "--scheme", "rsa", "--strength", 100)
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        run("keygen", "--scheme", "rsa", "--strength", 80, "--bogus")
    assert info.value.code == 2


def test_keygen_unwritable_path(tmp_path):
    assert run("keygen", "--scheme", "ecc", "--strength", 80, "--out", tmp_path / "no" / "such" / "k.json") == 1


def test_expand_worked_example(tmp_path):
    fixture = tmp_path / "example.json"
    fixture.write_text(json.dumps(load_fixture()))
    co = tmp_path / "co.json"
    assert run("expand", "--key", fixture, "--stage", "cocoon", "--count", 2, "--randomness", "2,3", "--out", co) == 0
    keys = json.loads(co.read_text())["keys"]
    assert [unhexint(k["J"]) for k in keys] == [917934476807, 1376901682427]
    bf = tmp_path / "bf.json"
    assert run("expand", "--key", fixture, "--stage", "butterfly", "--cocoon", co, "--count", 2,
               "--randomness", "5,7", "--out", bf) == 0
    assert [unhexint(k["H"]) for k in json.loads(bf.read_text())["keys"]] == [3325430544707, 4747396177487]


@pytest.mark.parametrize("scheme", ["rsa", "ecc"])
def test_expand_twenty_distinct(tmp_path, scheme):
    key, co, bf = tmp_path / "k.json", tmp_path / "co.json", tmp_path / "bf.json"
    run("keygen", "--scheme", scheme, "--strength", 80, "--seed", 1, "--include-secrets", "--out", key)
    assert run("expand", "--key", key, "--stage", "cocoon", "--count", 20, "--seed", 2, "--out", co) == 0
    keys = json.loads(co.read_text())["keys"]
    field = "J" if scheme == "rsa" else "B"
    assert len({k[field] for k in keys}) == 20
    assert run("expand", "--key", key, "--stage", "butterfly", "--cocoon", co, "--count", 20, "--out", bf) == 0
    field = "H" if scheme == "rsa" else "butterfly_public"
    assert len({k[field] for k in json.loads(bf.read_text())["keys"]}) == 20


def test_expand_errors(tmp_path, capsys):
    key = tmp_path / "k.json"
    run("keygen", "--scheme", "rsa", "--strength", 80, "--seed", 1, "--out", key)
    with pytest.raises(SystemExit) as info:
        run("expand", "--key", key, "--stage", "cocoon", "--count", 0)
    assert info.value.code == 2
    # Public-only key file lacks alpha.
    assert run("expand", "--key", key, "--stage", "cocoon", "--count", 1) == 2
    assert "alpha" in capsys.readouterr().err
    # Butterfly stage without cocoon input.
    assert run("expand", "--key", key, "--stage", "butterfly", "--count", 1) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("expand", "--key", bad, "--stage", "cocoon", "--count", 1) == 1


def test_verify_example(capsys):
    assert run("verify-example") == 0
    out = capsys.readouterr().out
    assert "all 10 checks passed" in out
    assert "H_2" in out and "917934476807" in out


def test_verify_example_detects_mutation(tmp_path, capsys):
    doc = load_fixture()
    doc["expected"]["alpha"] = hexint(458967205621)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert run("verify-example", "--fixture", bad) == 3
    assert "alpha" in capsys.readouterr().err


def test_flow_rsa(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert run("flow", "--scheme", "rsa", "--batch", 20, "--strength", 80, "--seed", 1, "--out", out) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["violations"] == [] and report["downloads_to_ee"] == 0
    assert report["collusion"]["equals_h_phi"] is True
    tr = json.loads(out.read_text())
    assert all(m["to"] != "EE" for m in tr["messages"])


def test_flow_ecc_step7(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert run("flow", "--scheme", "ecc", "--batch", 1, "--seed", 1, "--out", out) == 0
    tr = json.loads(out.read_text())
    assert any(m["step"] == "7" and m["from"] == "RA" and m["to"] == "EE" for m in tr["messages"])


def test_flow_privacy_exit_code(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert run("flow", "--scheme", "ecc", "--batch", 2, "--seed", 1, "--inject", "c-to-ra", "--out", out) == 4
    assert json.loads(capsys.readouterr().out)["violations"] == ["RA observed plaintext c at step(s) 6"]


def test_flow_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("flow", "--scheme", "ecc", "--batch", 3, "--seed", 5, "--out", a)
    run("flow", "--scheme", "ecc", "--batch", 3, "--seed", 5, "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_out_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_DIR_ENV, str(tmp_path))
    assert run("keygen", "--scheme", "ecc", "--strength", 80) == 0
    assert (tmp_path / "keys.json").exists()


def test_bench_small(tmp_path, capsys):
    assert run("bench", "--experiments", 1, "--strengths", 80, "--iterations", 100, "--out-dir", tmp_path,
               "--quiet", "--format", "csv") == 0
    out = capsys.readouterr().out
    assert out.count("\n1,80,") == 2
    assert "speedup" in out
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["experiments"]["1"]["80"]["ratio"] > 1


def test_bench_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as info:
        run("bench", "--iterations", 0)
    assert info.value.code == 2
    assert run("bench", "--strengths", 90, "--out-dir", tmp_path) == 2


def test_bench_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"experiments": [2], "strengths": [80], "iterations": 10}))
    assert run("bench", "--config", cfg, "--out-dir", tmp_path, "--quiet") == 0
    rows = (tmp_path / "report.csv").read_text().splitlines()[1:]
    assert [r.split(",")[:3] for r in rows] == [["2", "80", "RSA"], ["2", "80", "ECC"]]
