import json

import pytest

from sternct.cli import DEFINITION_CUTOFF, default_method, main
from sternct.stern import OMEGA_TABLE


@pytest.fixture(autouse=True)
def cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("STERNCT_CACHE_DIR", str(tmp_path / "cache"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_nu(capsys):
    assert run(capsys, "nu", "--n", "3", "--method", "gf")[:2] == (0, "59\n")
    assert run(capsys, "nu", "--n", "0")[:2] == (0, "1\n")
    assert run(capsys, "nu", "--n", "12", "--method", "definition")[1] == run(capsys, "nu", "--n", "12")[1]
    code, _, err = run(capsys, "nu", "--n", "30", "--method", "definition")
    assert code == 2 and "--force" in err


def test_omega(capsys):
    assert run(capsys, "omega", "--n", "20", "--method", "transfer")[:2] == (0, "8011450183181\n")
    assert run(capsys, "omega", "--n", "0", "--method", "definition")[:2] == (0, "1\n")
    outs = {run(capsys, "omega", "--n", "18", "--method", m)[1] for m in ("definition", "transfer", "gf")}
    assert outs == {f"{OMEGA_TABLE[18]}\n"}
    assert run(capsys, "omega", "--n", "40", "--method", "transfer", "--no-prune")[1] == \
        run(capsys, "omega", "--n", "40", "--method", "gf", "--threads", "3")[1]


def test_omega_usage_errors(capsys):
    assert run(capsys, "omega", "--n", str(DEFINITION_CUTOFF + 1), "--method", "definition")[0] == 2
    assert run(capsys, "omega", "--n", "1", "--method", "gf")[0] == 2
    assert run(capsys, "omega", "--n", "30", "--method", "gf", "--n-seed", "2")[0] == 2
    assert run(capsys, "omega", "--n", "-1")[0] == 2
    assert run(capsys, "omega", "--n", "30", "--threads", "0")[0] == 2
    assert run(capsys, "omega")[0] == 2
    assert run(capsys, "bogus")[0] == 2


def test_json_report_round_trips(capsys):
    code, out, _ = run(capsys, "omega", "--n", "50", "--method", "gf", "--json")
    rep = json.loads(out)
    assert code == 0
    assert {"target", "n", "method", "digits", "value", "elapsed_ms", "cache_hits"} <= set(rep)
    assert rep["target"] == "omega" and rep["n"] == 50 and rep["method"] == "gf"
    assert rep["digits"] == len(rep["value"])
    from sternct.gf import omega_gf
    assert int(rep["value"]) == omega_gf(50)
    # second run reads the cache
    rep2 = json.loads(run(capsys, "omega", "--n", "50", "--method", "gf", "--json")[1])
    assert rep2["cache_hits"] >= 1 and rep2["value"] == rep["value"]


def test_out_file(capsys, tmp_path):
    out = tmp_path / "w.txt"
    code, printed, _ = run(capsys, "omega", "--n", "30", "--out", str(out))
    assert code == 0 and printed == ""
    from sternct.transfer import omega_transfer
    assert out.read_text() == f"{omega_transfer(30)}\n"


def test_verbose_report(capsys):
    code, out, _ = run(capsys, "omega", "--n", "7", "--verbose")
    assert code == 0 and out.startswith("omega(7) = 22607") and "method definition" in out


def test_ualpha(capsys):
    assert run(capsys, "ualpha", "--alpha", "2", "--n", "2")[:2] == (0, "13\n")
    assert run(capsys, "ualpha", "--alpha", "1", "--n", "1")[:2] == (0, "3\n")
    assert run(capsys, "ualpha", "--alpha", "3", "--n", "2")[:2] == (0, "21\n")
    assert run(capsys, "ualpha", "--alpha", "1,2", "--n", "2")[0] == 0
    for bad in ("0", "x", "-1", ""):
        assert run(capsys, "ualpha", "--alpha", bad, "--n", "2")[0] == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "20", "--suites", "oracle")
    assert code == 0 and out.strip().endswith("PASS (42 checks)")
    code, out, _ = run(capsys, "verify", "--suites", "series", "--order", "40")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "verify", "--max-n", "0")
    assert code == 0
    assert run(capsys, "verify", "--suites", "nope")[0] == 2


def test_verify_reports_failure(capsys, monkeypatch):
    import sternct.verify as v
    monkeypatch.setattr(v, "OMEGA_TABLE", (1, 4) + v.OMEGA_TABLE[2:])
    code, out, _ = run(capsys, "verify", "--max-n", "3", "--suites", "oracle")
    assert code == 1 and "FAIL: oracle omega_def(1)" in out


def test_cache_commands(capsys, tmp_path):
    root = tmp_path / "c"
    assert run(capsys, "cache", "path", "--cache-dir", str(root))[1].strip() == str(root)
    code, out, _ = run(capsys, "cache", "warm", "--n", "40", "--cache-dir", str(root))
    assert code == 0
    listed = run(capsys, "cache", "list", "--cache-dir", str(root))[1]
    assert "rec-u.txt" in listed and "table-6-34.txt" in listed
    assert run(capsys, "cache", "warm", "--cache-dir", str(root))[0] == 2
    run(capsys, "cache", "clear", "--cache-dir", str(root))
    assert not root.exists()


def test_default_method():
    assert [default_method(n) for n in (0, 20, 21, 300, 301)] == \
        ["definition", "definition", "transfer", "transfer", "gf"]
