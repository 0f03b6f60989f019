"""Command-line interface: configuration, dispatch, output files."""
import csv
import json
import os

import pytest

from kdvb_lpg.cli import ConfigError, main, parse_config, write_outputs


def test_defaults():
    cfg = parse_config()
    assert cfg.N == 32 and cfg.dt == 1e-4 and cfg.T == 2.0 and cfg.p == 2.0
    assert cfg.alpha_value == 1.0 and cfg.beta_value == 0.0
    assert cfg.alpha_kind == "constant" and cfg.beta_kind == "constant"


def test_empty_config_file_gives_defaults(tmp_path):
    path = tmp_path / "empty.cfg"
    path.write_text("# nothing but a comment\n\n")
    assert parse_config(str(path)) == parse_config()


def test_config_file_and_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("dt = 1e-3\nn = 16  # resolution\n")
    cfg = parse_config(str(path), overrides=["beta.value=0.4"])
    assert cfg.dt == 1e-3 and cfg.N == 16 and cfg.beta_value == 0.4
    assert cfg.T == 2.0  # untouched default


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("dx = 1e-3\n")
    with pytest.raises(ConfigError):
        parse_config(str(path))
    with pytest.raises(ConfigError):
        parse_config(None, overrides=["dx=1"])


def test_parse_error_reports_line(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("dt = 1e-3\nthis is not a pair\n")
    with pytest.raises(ConfigError, match=":2:"):
        parse_config(str(path))


def test_missing_file():
    with pytest.raises(ConfigError):
        parse_config("/no/such/file.cfg")


def test_case_profiles_must_pair():
    with pytest.raises(ConfigError, match="jointly"):
        parse_config(None, overrides=["beta.kind=case1"])
    cfg = parse_config(None, overrides=["alpha.kind=case1", "beta.kind=case1"])
    assert cfg.alpha_kind == "case1"


def test_value_validation():
    for bad in ["n=2", "dt=0", "p=0.5", "dt=abc", "alpha.kind=linear"]:
        with pytest.raises(ConfigError):
            parse_config(None, overrides=[bad])


def test_write_outputs_deterministic(tmp_path):
    params = {"n": 8, "dt": 1e-3}
    artifacts = {"data": (["a", "b"], [(1.0, 2.0), (0.1, 0.2)])}
    m1 = write_outputs("solve", params, artifacts, str(tmp_path))
    files1 = {f: (tmp_path / f).read_bytes() for f in os.listdir(tmp_path)}
    m2 = write_outputs("solve", params, artifacts, str(tmp_path))
    files2 = {f: (tmp_path / f).read_bytes() for f in os.listdir(tmp_path)}
    assert m1 == m2
    assert files1 == files2
    manifest = [f for f in files1 if f.endswith("manifest.json")]
    assert len(manifest) == 1
    listed = json.loads(files1[manifest[0]])
    assert {e["name"] for e in listed["files"]} == set(files1) - set(manifest)


def test_verify_command_exit_zero(tmp_path, capsys):
    rc = main(["--output-dir", str(tmp_path), "verify", "--n", "12"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "verify" in out


def test_spectrum_command_row_count(tmp_path):
    rc = main(
        ["--output-dir", str(tmp_path), "spectrum", "--n", "12", "--dt", "1",
         "--alpha", "0.1", "--beta", "0.1"]
    )
    assert rc == 0
    csvs = [f for f in os.listdir(tmp_path) if f.endswith("eigenvalues.csv")]
    assert len(csvs) == 1
    with open(tmp_path / csvs[0]) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["re", "im"]
    assert len(rows) == 1 + 10  # N - 2 eigenvalues


def test_solve_command_outputs(tmp_path, capsys):
    rc = main(
        ["--output-dir", str(tmp_path), "--set", "n=10", "--set", "dt=1e-2",
         "--set", "t=0.1", "solve"]
    )
    assert rc == 0
    names = os.listdir(tmp_path)
    assert any(n.endswith("modal.csv") for n in names)
    assert any(n.endswith("error.csv") for n in names)
    assert "eps=" in capsys.readouterr().out


def test_cases_command_runs(tmp_path, capsys):
    rc = main(
        ["--output-dir", str(tmp_path), "--set", "n=12", "cases", "--case", "1",
         "--dt", "1e-2"]
    )
    captured = capsys.readouterr()
    csvs = [f for f in os.listdir(tmp_path) if f.endswith("containment.csv")]
    assert len(csvs) == 1
    # exit status reflects containment; a failed containment must both
    # exit nonzero and say so on stderr
    if rc != 0:
        assert "error:containment" in captured.err


def test_config_error_exit_code(tmp_path, capsys):
    rc = main(["--output-dir", str(tmp_path), "--set", "n=banana", "solve"])
    assert rc == 2
    assert capsys.readouterr().err.startswith("error:config:")


def test_bad_dt_runtime_error_is_single_line(tmp_path, capsys):
    rc = main(["--output-dir", str(tmp_path), "--set", "t=0.05",
               "--set", "dt=3e-3", "solve"])  # T/dt not integral
    assert rc != 0
    err = capsys.readouterr().err.strip()
    assert err.startswith("error:")
    assert "\n" not in err
