import subprocess
import sys

import numpy as np
import pytest
import yaml

from oneflab.cli import main

CUSTOM_YAML = (
    "experiment: custom\n"
    "generator:\n  kind: fgn\n  hurst: 0.7\n  n: 2048\n"
)


@pytest.fixture
def cfg_file(tmp_path):
    p = tmp_path / "cfg.yaml"
    p.write_text(CUSTOM_YAML)
    return p


def test_list_experiments(capsys):
    assert main(["list-experiments"]) == 0
    out = capsys.readouterr().out
    for name in ("fgn-baseline", "eb-dichotomy", "custom"):
        assert name in out


def test_generate_writes_series(tmp_path, cfg_file, capsys):
    out = tmp_path / "run"
    assert main(["generate", "--config", str(cfg_file), "--out", str(out)]) == 0
    lines = (out / "series.csv").read_text().splitlines()
    assert lines[0] == "t,value"
    assert len(lines) == 2049
    assert "wrote 2048 samples" in capsys.readouterr().out


def test_generate_quiet(tmp_path, cfg_file, capsys):
    assert main(["generate", "--config", str(cfg_file), "--out", str(tmp_path / "q"), "--quiet"]) == 0
    assert capsys.readouterr().out == ""


def test_seed_override_changes_series(tmp_path, cfg_file):
    main(["generate", "--config", str(cfg_file), "--out", str(tmp_path / "a")])
    main(["generate", "--config", str(cfg_file), "--out", str(tmp_path / "b"), "--seed", "1"])
    main(["generate", "--config", str(cfg_file), "--out", str(tmp_path / "c"), "--seed", "0"])
    a = (tmp_path / "a" / "series.csv").read_bytes()
    b = (tmp_path / "b" / "series.csv").read_bytes()
    c = (tmp_path / "c" / "series.csv").read_bytes()
    assert a != b
    assert a == c  # default base_seed is 0


def test_env_var_sets_output_root(tmp_path, cfg_file, monkeypatch):
    monkeypatch.setenv("ONEFLAB_OUT_ROOT", str(tmp_path / "root"))
    assert main(["generate", "--config", str(cfg_file), "--quiet"]) == 0
    assert (tmp_path / "root" / "custom" / "series.csv").exists()


def test_analyze_writes_fits(tmp_path, cfg_file, capsys):
    out = tmp_path / "an"
    assert main(["analyze", "--config", str(cfg_file), "--out", str(out)]) == 0
    lines = (out / "fits.csv").read_text().splitlines()
    assert lines[0] == "estimator,exponent,stderr,lo,hi,n_points,r_squared"
    assert {l.split(",")[0] for l in lines[1:]} == {"rs", "dfa", "gph"}
    assert "exponent=" in capsys.readouterr().out


def test_experiment_exit_codes(tmp_path, capsys):
    # custom with a generator: no checks -> trivially passes -> exit 0
    cfg = tmp_path / "c.yaml"
    cfg.write_text(CUSTOM_YAML)
    rc = main(["experiment", "custom", "--config", str(cfg), "--out", str(tmp_path / "ok")])
    assert rc == 0
    assert '"passed": true' in capsys.readouterr().out
    doc = yaml.safe_load((tmp_path / "ok" / "summary.yaml").read_text())
    assert doc["passed"] is True


def test_experiment_config_name_mismatch(tmp_path, cfg_file, capsys):
    rc = main(["experiment", "fgn-baseline", "--config", str(cfg_file)])
    assert rc == 2
    assert "not 'fgn-baseline'" in capsys.readouterr().err


def test_experiment_without_config_uses_defaults(tmp_path):
    rc = main(["experiment", "fgn-baseline", "--out", str(tmp_path / "fb"), "--quiet"])
    assert rc == 0
    assert (tmp_path / "fb" / "summary.yaml").exists()
    assert (tmp_path / "fb" / "series.csv").exists()


def test_experiment_unknown_name(capsys):
    assert main(["experiment", "no-such-experiment", "--quiet"]) == 2
    assert "error:" in capsys.readouterr().err


def test_generate_requires_config(capsys):
    assert main(["generate"]) == 2
    assert "--config is required" in capsys.readouterr().err


def test_bad_config_value_is_error(tmp_path, capsys):
    p = tmp_path / "bad.yaml"
    p.write_text("experiment: custom\ngenerator:\n  kind: renewal\n  theta: 2.5\n  n: 256\n")
    assert main(["generate", "--config", str(p), "--quiet"]) == 2
    assert "theta" in capsys.readouterr().err


def test_console_script_smoke(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "oneflab.cli", "list-experiments"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "aging-spectrum" in proc.stdout
