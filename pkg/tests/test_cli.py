import json
import subprocess
import sys

import pytest

from csdc.cli import load_config, main
from csdc.errors import ConfigInvalid

SMALL_FIT = {"seed": 3, "fit": {"sweep": {"random": 300, "z_range": [0.3, 4.0],
                                          "log_uniform": False},
                                "degree": 6, "max_heldout_rms": 1.0}}


def _cfg(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc, indent=1))
    return str(p)


def _manifest(out):
    return json.loads((out / "manifest.json").read_text())


def test_member_success(tmp_path):
    cfg = _cfg(tmp_path, {"member": {"points": [[0, 0, 1], [1, 0, 2]]}})
    out = tmp_path / "out"
    assert main(["member", "--config", cfg, "--out", str(out)]) == 0
    rep = json.loads((out / "membership.json").read_text())
    assert [v["label"] for v in rep["verdicts"]] == ["Off", "OnDC"]
    m = _manifest(out)
    assert m["status"] == 0 and m["command"] == "member"
    assert {"tolerances", "versions", "config", "wall_time_s"} <= set(m)


def test_unknown_key_is_config_error(tmp_path, capsys):
    cfg = _cfg(tmp_path, {"member": {"points": [[0, 0, 1]], "bogus": 1}})
    assert main(["member", "--config", cfg, "--out", str(tmp_path / "o")]) == 1
    err = capsys.readouterr().err
    assert "bogus" in err and "line" in err


def test_unknown_tolerance_is_config_error(tmp_path):
    cfg = _cfg(tmp_path, {"tolerances": {"nope": 1.0}, "member": {"points": [[0, 0, 1]]}})
    assert main(["member", "--config", cfg]) == 1


def test_missing_seed_for_randomized_command(tmp_path, capsys):
    doc = dict(SMALL_FIT)
    doc.pop("seed")
    assert main(["fit", "--config", _cfg(tmp_path, doc), "--out", str(tmp_path / "o")]) == 1
    assert "seed" in capsys.readouterr().err


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"member": \n  {"points": [[0,0,1]],}}')
    with pytest.raises(ConfigInvalid, match="line 2"):
        load_config(str(p), {})
    assert main(["member", "--config", str(p)]) == 1


def test_missing_block(tmp_path):
    assert main(["member", "--config", _cfg(tmp_path, {}), "--out", str(tmp_path / "o")]) == 1


def test_failed_assertion_exits_two(tmp_path):
    doc = json.loads(json.dumps(SMALL_FIT))
    doc["fit"]["max_heldout_rms"] = 1e-12
    out = tmp_path / "out"
    assert main(["fit", "--config", _cfg(tmp_path, doc), "--out", str(out)]) == 2
    m = _manifest(out)
    assert m["status"] == 2 and "held-out" in m["message"]


def test_fit_rerun_is_byte_identical(tmp_path):
    cfg = _cfg(tmp_path, SMALL_FIT)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["fit", "--config", cfg, "--out", str(a)]) == 0
    assert main(["fit", "--config", cfg, "--out", str(b)]) == 0
    for name in ("samples.csv", "poly.json", "fit_report.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_seed_override_changes_output(tmp_path):
    cfg = _cfg(tmp_path, SMALL_FIT)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["fit", "--config", cfg, "--out", str(a)]) == 0
    assert main(["fit", "--config", cfg, "--out", str(b), "--seed", "4"]) == 0
    assert (a / "samples.csv").read_bytes() != (b / "samples.csv").read_bytes()
    assert _manifest(b)["config"]["seed"] == 4


def test_module_entry_point(tmp_path):
    cfg = _cfg(tmp_path, {"member": {"points": [[0, 0, 1]]}})
    r = subprocess.run([sys.executable, "-m", "csdc", "member", "--config", cfg,
                        "--out", str(tmp_path / "o")], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "o" / "membership.json").exists()
