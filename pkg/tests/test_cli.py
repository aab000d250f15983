"""Command-line interface tests: exit codes, artifacts, config handling."""

import csv
import os
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "ndeshock.cli"]


def run_cli(args, tmp_path, env_extra=None):
    env = dict(os.environ)
    env.pop("NDE_SHOCKKIT_OUT", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(CLI + args, capture_output=True, text=True,
                          env=env, cwd=tmp_path)


def test_no_subcommand_is_usage_error(tmp_path):
    proc = run_cli([], tmp_path)
    assert proc.returncode == 2


def test_euler_writes_artifacts(tmp_path):
    out = tmp_path / "run"
    proc = run_cli(["euler", "--alpha", "0.3", "--t", "1.0",
                    "--y-min", "-5", "--n", "64", "--out", str(out)],
                   tmp_path)
    assert proc.returncode == 0, proc.stderr
    names = {p.name for p in out.iterdir()}
    assert any(n.endswith(".csv") for n in names)
    assert any(n.endswith(".svg") for n in names)
    assert any(n.endswith("manifest.txt") for n in names)
    csv_path = next(p for p in out.iterdir() if p.suffix == ".csv")
    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) > 10 and len(rows[0]) >= 2


def test_out_of_range_alpha_is_exit_2(tmp_path):
    proc = run_cli(["blowup", "--alpha", "0.7", "--slope", "-1"], tmp_path)
    assert proc.returncode == 2
    assert proc.stderr.strip()


def test_zero_jump_shock_conditions_is_exit_2(tmp_path):
    proc = run_cli(["shock-conditions", "--minus", "1,-0.5,0.2",
                    "--plus", "1,-0.5,0.2", "--out", str(tmp_path / "o")],
                   tmp_path)
    assert proc.returncode == 2


def test_shock_conditions_antisymmetric_pair(tmp_path):
    out = tmp_path / "sc"
    proc = run_cli(["shock-conditions", "--minus", "0.8,-0.26,0.1",
                    "--plus=-0.8,-0.26,-0.1", "--out", str(out)],
                   tmp_path)
    assert proc.returncode == 0, proc.stderr
    assert "lambda" in proc.stdout


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("alpha = 0.2\nt = 1.0\nn = 32\n# comment\n")
    out = tmp_path / "cfgout"
    proc = run_cli(["euler", "--config", str(cfg), "--n", "64",
                    "--out", str(out)], tmp_path)
    assert proc.returncode == 0, proc.stderr
    manifest = (out / "euler-manifest.txt").read_text()
    assert "n = 64" in manifest
    assert "alpha = 0.2" in manifest


def test_unknown_config_key_is_exit_2(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("alpha = 0.2\nbogus_key = 1\n")
    proc = run_cli(["euler", "--config", str(cfg)], tmp_path)
    assert proc.returncode == 2


def test_output_env_variable(tmp_path):
    target = tmp_path / "envout"
    proc = run_cli(["euler", "--alpha", "0.3", "--n", "64"], tmp_path,
                   env_extra={"NDE_SHOCKKIT_OUT": str(target)})
    assert proc.returncode == 0, proc.stderr
    assert target.is_dir()
    assert (target / "euler-manifest.txt").exists()


def test_manifest_is_rerunnable_key_value(tmp_path):
    out = tmp_path / "m"
    proc = run_cli(["euler", "--alpha", "0.25", "--n", "64",
                    "--out", str(out)], tmp_path)
    assert proc.returncode == 0, proc.stderr
    lines = (out / "euler-manifest.txt").read_text().splitlines()
    kv = [ln for ln in lines if " = " in ln]
    assert any(ln.startswith("alpha") for ln in kv)
