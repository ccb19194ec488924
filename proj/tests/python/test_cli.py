import json
import os
import subprocess

import pytest

CLI = os.environ.get("RINGWAVE_CLI", "ringwave")


def run(*args, cwd=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)


def test_help_exits_zero():
    out = run("--help")
    assert out.returncode == 0
    assert "resonances" in out.stdout


def test_unknown_subcommand_is_usage_error():
    assert run("nonsense").returncode == 2


def test_bad_config_value_is_usage_error(tmp_path):
    out = run("--out", str(tmp_path), "--set", "varactor.c0=-1pF", "resonances")
    assert out.returncode == 2
    assert "varactor.c0" in out.stderr


def test_unknown_config_key_is_usage_error(tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("varactor:\n  c00: 1pF\n")
    assert run("--config", str(cfg), "--out", str(tmp_path), "resonances").returncode == 2


def test_resonances_summary_and_manifest(tmp_path):
    out = run("--out", str(tmp_path), "resonances")
    assert out.returncode == 0, out.stderr
    summary = json.loads(out.stdout)
    assert len(summary["zeros"]) == 1 and len(summary["poles"]) == 1
    assert summary["zeros"][0]["freq_hz"] == pytest.approx(2.4e9, rel=5e-3)
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["subcommand"] == "resonances"
    assert sorted(manifest["outputs"]) == ["impedance.csv", "resonances.json"]
    for name in ("impedance.csv", "resonances.json"):
        assert (tmp_path / name).exists()


def test_manifest_reproduces_run(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    assert run("--out", str(first), "--set", "varactor.c0=2.5pF", "dispersion").returncode == 0
    out = run("--config", str(first / "manifest.json"), "--out", str(second), "dispersion")
    assert out.returncode == 0, out.stderr
    assert (first / "dispersion.csv").read_text() == (second / "dispersion.csv").read_text()


def test_unit_suffixes(tmp_path):
    a = run("--out", str(tmp_path / "a"), "dispersion", "--f-start", "1GHz", "--f-stop", "3GHz", "--points", "5")
    b = run("--out", str(tmp_path / "b"), "dispersion", "--f-start", "1e9", "--f-stop", "3e9", "--points", "5")
    assert a.returncode == 0 and b.returncode == 0
    assert a.stdout == b.stdout
    assert run("--out", str(tmp_path / "c"), "dispersion", "--f-start", "1furlong").returncode == 2


def test_localize_without_reflections(tmp_path):
    out = run("--out", str(tmp_path), "localize", "--paths", "0")
    assert out.returncode == 0, out.stderr
    summary = json.loads(out.stdout)
    assert summary["variance_single_band_rad2"] == 0.0
    assert summary["variance_dual_band_rad2"] == 0.0
