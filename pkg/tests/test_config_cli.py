import json

import pytest

from mobius_dirac import cli
from mobius_dirac.config import RunConfig, apply_overrides
from mobius_dirac.errors import ConfigError
from mobius_dirac.serialize import read_csv

SMALL = ["--set", "grid.n_r=8", "--set", "grid.n_theta=32", "--set", "physics.count=8", "--set", "physics.window=8"]


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------- config


def test_defaults_are_valid():
    cfg = RunConfig.load()
    assert cfg.violations() == []
    assert cfg.strip_params().R == 4.0
    assert cfg.sectors() == (1, -1)


def test_ini_round_trip(tmp_path):
    cfg = RunConfig.load(overrides=["strip.R=5", "grid.n_r=16", "physics.emax=0.8", "output.format=json"])
    path = tmp_path / "run.ini"
    path.write_text(cfg.to_ini())
    assert RunConfig.load(path) == cfg


def test_all_violations_reported():
    with pytest.raises(ConfigError) as exc:
        RunConfig.load(overrides=["grid.n_r=4", "strip.w=5", "foo.bar=1", "grid.n_theta=abc", "physics.sectors=up"])
    msgs = exc.value.violations
    assert len(msgs) == 5
    text = str(exc.value)
    for key in ("grid.n_r", "strip.w", "[foo]", "grid.n_theta", "physics.sectors"):
        assert key in text


def test_dense_cap_violation():
    with pytest.raises(ConfigError, match="dense cap"):
        RunConfig.load(overrides=["grid.n_r=64", "grid.n_theta=128"])


def test_bare_override_keys():
    assert apply_overrides({}, ["n_r=12"]) == {"grid": {"n_r": "12"}}
    with pytest.raises(ConfigError):
        apply_overrides({}, ["nonsense=1"])
    with pytest.raises(ConfigError):
        apply_overrides({}, ["novalue"])


def test_integer_fields_reject_fractions():
    with pytest.raises(ConfigError, match="not an integer"):
        RunConfig.load(overrides=["grid.n_r=8.5"])


def test_replace_revalidates():
    cfg = RunConfig.load()
    assert cfg.replace(grid__n_r=10).grid.n_r == 10
    with pytest.raises(ConfigError):
        cfg.replace(grid__n_r=2)


def test_flat_control_options():
    opts = RunConfig.load(overrides=["physics.control=flat"]).dirac_options()
    assert opts.metric == "flat" and opts.boundary == "periodic" and not opts.gauge


def test_malformed_ini():
    with pytest.raises(ConfigError, match="malformed"):
        RunConfig.from_ini_text("not an ini")


# ---------------------------------------------------------------- cli


def test_geometry_csv_row_count(capsys):
    code, out, err = run(["geometry", "--set", "grid.n_r=16", "--set", "grid.n_theta=64"], capsys)
    assert code == 0
    config, columns, rows = read_csv(out)
    assert len(rows) == 1024
    assert columns == ["r", "theta", "K", "M", "m_eff", "g_det"]
    assert config["strip.R"] == "4.0"
    assert "1024 rows" in err


def test_gauge_json_classification(capsys):
    code, out, _ = run(["gauge", "--format", "json", "--set", "grid.n_r=17", "--set", "grid.n_theta=64"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["summaries"]["field_character"]["classification"] == "monopole-like"
    assert doc["config"]["grid"]["n_r"] == 17
    code, out, _ = run(["gauge", "--format", "json", "--set", "strip.twist_k=2", "--set", "grid.n_r=17", "--set", "grid.n_theta=64"], capsys)
    assert json.loads(out)["summaries"]["field_character"]["classification"] == "common field"


def test_spectrum_json_reports_pairing(capsys):
    code, out, _ = run(["spectrum", "--format", "json"] + SMALL, capsys)
    assert code == 0
    s = json.loads(out)["summaries"]
    assert s["sector_pairing"]["max_gap"] < 1e-8
    assert s["hermiticity"] < 1e-12
    assert s["time_reversal_residual"] < 1e-12
    assert "representation" in s


def test_spectrum_flat_control_matches_dispersion(capsys):
    code, out, _ = run(["spectrum", "--format", "json", "--set", "physics.control=flat"] + SMALL, capsys)
    assert code == 0
    assert json.loads(out)["summaries"]["dispersion_deviation"] < 1e-8


def test_validate_passes(capsys):
    code, out, err = run(["validate"], capsys)
    assert code == 0
    assert "FAIL" not in err


def test_exit_codes(tmp_path, capsys):
    assert run(["geometry", "--set", "grid.n_r=2", "--set", "strip.w=9"], capsys)[0] == 1
    code, _, err = run(["geometry", "--config", str(tmp_path / "missing.ini")], capsys)
    assert code == 2 and "missing.ini" in err
    code, _, err = run(["geometry", "--out", str(tmp_path / "no" / "such" / "dir.csv")], capsys)
    assert code == 2 and "dir.csv" in err


def test_validate_exit_code_on_hard_failure(monkeypatch, capsys):
    from mobius_dirac.validation import Check

    monkeypatch.setattr(cli, "run_invariants", lambda params: [Check("broken", "hard", 1.0, 0.0, False)])
    code, _, err = run(["validate"], capsys)
    assert code == 3 and "FAIL" in err


def test_out_file_and_config_file(tmp_path, capsys):
    ini = tmp_path / "run.ini"
    ini.write_text("[grid]\nn_r = 9\nn_theta = 32\n[output]\nformat = csv\nprecision = 6\n")
    out = tmp_path / "geo.csv"
    code, stdout, _ = run(["geometry", "--config", str(ini), "--out", str(out)], capsys)
    assert code == 0 and "288 rows" in stdout
    config, _, rows = read_csv(out.read_text())
    assert len(rows) == 288 and config["output.precision"] == "6"


@pytest.mark.parametrize("command, extra", [("geometry", []), ("gauge", []), ("spectrum", SMALL), ("validate", [])])
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_byte_identical_reruns(tmp_path, capsys, command, extra, fmt):
    paths = [tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"]
    base = [command, "--format", fmt, "--set", "grid.n_r=9", "--set", "grid.n_theta=32"] + extra
    for p in paths:
        assert cli.main(base + ["--out", str(p)]) == 0
    capsys.readouterr()
    assert paths[0].read_bytes() == paths[1].read_bytes()
