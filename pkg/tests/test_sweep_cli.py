import csv
import io
import json
import math
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oement.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, main
from oement.figures import reproduce_figure
from oement.model import SystemParams, reference_params
from oement.sweep import (
    ConfigParseError,
    ConfigValidationError,
    RunConfig,
    SweepSpec,
    apply_axis,
    expand_observables,
    format_config,
    parse_number,
    run_sweep,
    to_csv,
    to_json,
    validate_config,
)


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


# config parsing


def test_empty_config_gives_reference_defaults():
    cfg, notices = validate_config("")
    assert cfg == RunConfig(params=reference_params(), omega=0.0, samples=50_000, seed=0)
    assert notices == []


def test_comments_and_expressions():
    cfg, _ = validate_config("# header\ng_a = 1.2  # trailing\nphi = -pi/4\nn_th = 4e2\n\n")
    assert cfg.params.g_a == 1.2
    assert cfg.params.phi == pytest.approx(-math.pi / 4)
    assert cfg.params.n_th == 400.0


def test_negative_rate_names_key():
    with pytest.raises(ConfigValidationError) as exc:
        validate_config("kappa_a = -1")
    assert any(e.startswith("kappa_a") for e in exc.value.errors)


def test_every_violation_is_reported():
    with pytest.raises(ConfigValidationError) as exc:
        validate_config("kappa_a = -1\ng_c = -2\nbogus = 1\nsamples = 0\nseed = 1.5")
    keys = {e.split(":")[0] for e in exc.value.errors}
    assert keys == {"kappa_a", "g_c", "bogus", "samples", "seed"}


def test_phase_normalisation_notice():
    cfg, notices = validate_config("phi = 3*pi/2")
    assert cfg.params.phi == pytest.approx(-math.pi / 2)
    assert len(notices) == 1 and "phi" in notices[0]


@pytest.mark.parametrize(
    "text",
    ["kappa_a 2", "= 3", "g_a = 1 +", "g_a = __import__('os')", "g_a = 1\ng_a = 2", "phi = 1/0", "g_a = True"],
)
def test_parse_errors(text):
    with pytest.raises(ConfigParseError) as exc:
        validate_config(text)
    assert exc.value.errors


def test_parse_number():
    assert parse_number("2*pi") == pytest.approx(2 * math.pi)
    assert parse_number("π/2") == pytest.approx(math.pi / 2)
    assert parse_number("-(1.5 + 0.5)") == -2.0
    with pytest.raises(ValueError):
        parse_number("pi**2")


positive = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)
nonneg = st.floats(min_value=0.0, max_value=1e3, allow_nan=False)


@settings(max_examples=200)
@given(
    st.tuples(positive, positive, positive),
    st.tuples(nonneg, nonneg, nonneg, nonneg, nonneg, nonneg),
    st.floats(min_value=-10, max_value=10, allow_nan=False),
    st.floats(min_value=-100, max_value=100, allow_nan=False),
    st.integers(1, 10**7),
    st.integers(0, 2**64 - 1),
)
def test_config_round_trip(kappas, rest, phi, omega, samples, seed):
    gamma_m, g_a, g_c, g_x, g_d_mag, n_th = rest
    params = SystemParams(*kappas, gamma_m, g_a, g_c, g_x, g_d_mag, phi, n_th)
    cfg = RunConfig(params=params, omega=omega, samples=samples, seed=seed)
    again, notices = validate_config(format_config(cfg))
    assert again == cfg
    assert notices == []


# sweeps


@pytest.mark.parametrize(
    "args",
    [("theta", 0, 1, 3), ("phi", 0, 1, 1), ("phi", 1, 1, 5), ("phi", 0, 1, 2.5)],
)
def test_sweep_spec_validation(args):
    with pytest.raises(ValueError):
        SweepSpec(*args)


def test_sweep_spec_grid_is_inclusive():
    vals = SweepSpec("omega", -1.0, 1.0, 5).values()
    assert list(vals) == [-1.0, -0.5, 0.0, 0.5, 1.0]


def test_expand_observables():
    assert expand_observables(["eof"]) == ["E_F_ac", "E_F_ad", "E_F_cd"]
    assert expand_observables(["T31", "E_F_ac", "eof_ac"]) == ["T31_sq", "E_F_ac"]
    assert len(expand_observables(["T"])) == 16
    with pytest.raises(ValueError):
        expand_observables(["T51"])


def test_g_c_axis_keeps_impedance_matching():
    p, _ = apply_axis(RunConfig(), "g_c", 3.0)
    assert p.g_c == 3.0 and p.g_d_mag == pytest.approx(3.0)


def test_omega_axis_leaves_params():
    p, omega = apply_axis(RunConfig(), "omega", 1.5)
    assert p == reference_params() and omega == 1.5


def test_sweep_records_in_order_with_unstable_marked():
    spec = SweepSpec("g_a", 0.0, 2.5, 11)
    records = run_sweep(RunConfig(), spec, ["eof_ac", "T11"])
    assert [r["g_a"] for r in records] == pytest.approx(list(spec.values()))
    for r in records:
        if r["stable"]:
            assert math.isfinite(r["E_F_ac"]) and math.isfinite(r["T11_sq"])
        else:
            assert r["E_F_ac"] is None and r["T11_sq"] is None
    assert [r["stable"] for r in records] == [True] * 7 + [False] * 4


def test_all_unstable_sweep_warns():
    with pytest.warns(UserWarning, match="unstable"):
        records = run_sweep(RunConfig(), SweepSpec("g_a", 3.0, 4.0, 3), ["eof"])
    assert not any(r["stable"] for r in records)


def test_parallel_sweep_matches_serial():
    cfg = RunConfig(params=reference_params(0.0), samples=2000, seed=11)
    spec = SweepSpec("phi", -math.pi, math.pi, 9)
    serial = run_sweep(cfg, spec, ["witness", "eof"])
    parallel = run_sweep(cfg, spec, ["witness", "eof"], workers=3)
    assert to_csv(serial) == to_csv(parallel)


def test_csv_format():
    records = [{"x": 0.1 + 0.2, "stable": True, "y": None}, {"x": 2, "stable": False, "y": 1 / 3}]
    text = to_csv(records)
    assert text.splitlines() == ["x,stable,y", "0.3,true,", "2,false,0.333333333333"]
    assert "nan" not in text.lower() and "inf" not in text.lower()


def test_json_mirrors_columns():
    records = [{"x": 1.0, "stable": True, "y": None}, {"x": 2.0, "stable": False, "y": 0.5}]
    doc = json.loads(to_json(records, {"k": 1}))
    assert doc["columns"] == {"x": [1.0, 2.0], "stable": [True, False], "y": [None, 0.5]}
    assert doc["meta"] == {"k": 1}


# figure presets


def test_figure_3(tmp_path):
    paths = reproduce_figure(3, tmp_path)
    assert [p.name for p in paths] == ["fig3.csv", "fig3.json"]
    rows = read_csv(paths[0].read_text())
    assert list(rows[0]) == ["phi", "stable", "E_F_ac", "E_F_ad", "E_F_cd"]
    assert len(rows) == 201
    peak = max(rows, key=lambda r: float(r["E_F_ac"]))
    assert float(peak["phi"]) == pytest.approx(math.pi / 2, abs=0.02)
    assert float(peak["E_F_ac"]) == pytest.approx(8.2, abs=0.1)
    assert all(float(r["E_F_cd"]) <= 1e-8 for r in rows)
    meta = json.loads(paths[1].read_text())["meta"]
    assert meta["curves"][0]["params"]["kappa_a"] == 2.0


def test_figure_4_marks_unstable_regions(tmp_path):
    rows = read_csv(reproduce_figure(4, tmp_path)[0].read_text())
    for g_c in ("1.5", "2", "2.5"):
        curve = [r for r in rows if r["g_c"] == g_c]
        stable = [r["stable"] == "true" for r in curve]
        onset = float(curve[stable.index(False)]["g_a"])
        assert onset == pytest.approx(math.sqrt(2 / 3) * float(g_c), abs=0.01 + 1e-9)
        assert all(r["E_F_ac"] == "" for r in curve if r["stable"] == "false")


def test_figure_panels(tmp_path):
    assert [p.name for p in reproduce_figure(2, tmp_path)] == ["fig2a.csv", "fig2a.json", "fig2b.csv", "fig2b.json"]
    rows = read_csv((tmp_path / "fig2a.csv").read_text())
    mid = rows[len(rows) // 2]
    assert float(mid["omega"]) == 0.0
    assert float(mid["T43_sq"]) == pytest.approx(1.0, abs=1e-9)


def test_figure_7_small_sample_determinism(tmp_path):
    a = reproduce_figure(7, tmp_path / "a", seed=4, samples=500)
    b = reproduce_figure(7, tmp_path / "b", seed=4, samples=500)
    assert a[0].read_bytes() == b[0].read_bytes()


def test_unknown_figure(tmp_path):
    with pytest.raises(ValueError):
        reproduce_figure(9, tmp_path)


# command line


def test_cli_eof(capsys):
    assert main(["eof"]) == EXIT_OK
    rows = read_csv(capsys.readouterr().out)
    assert [r["pair"] for r in rows] == ["ac", "ad", "cd"]
    assert float(rows[0]["e_f"]) == pytest.approx(8.2005, abs=1e-4)


def test_cli_global_flags_before_or_after_verb(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("phi = 0\n")
    assert main(["--config", str(cfg), "--format", "json", "eof", "--pair", "cd"]) == EXIT_OK
    first = json.loads(capsys.readouterr().out)
    assert main(["eof", "--pair", "cd", "--config", str(cfg), "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == first


def test_cli_out_file(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["transmission", "--omega", "0.5", "--out", str(out)]) == EXIT_OK
    rows = read_csv(out.read_text())
    assert len(rows) == 16 and rows[0]["i"] == "1"


def test_cli_witness_and_stability(capsys):
    assert main(["witness", "--samples", "1000", "--seed", "3"]) == EXIT_OK
    row = read_csv(capsys.readouterr().out)[0]
    assert row["samples"] == "1000" and row["seed"] == "3"
    assert main(["stability"]) == EXIT_OK
    row = read_csv(capsys.readouterr().out)[0]
    assert row["stable_rh"] == row["stable_eig"] == "true"


def test_cli_sweep(capsys):
    code = main(["sweep", "--axis", "phi", "--start=-pi", "--stop", "pi", "--steps", "5", "--observables", "eof,T43"])
    assert code == EXIT_OK
    rows = read_csv(capsys.readouterr().out)
    assert list(rows[0]) == ["phi", "stable", "E_F_ac", "E_F_ad", "E_F_cd", "T43_sq"]


def test_cli_validation_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("kappa_a = -1\n")
    assert main(["--config", str(cfg), "eof"]) == EXIT_VALIDATION
    assert "kappa_a" in capsys.readouterr().err


def test_cli_parse_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("kappa_a 2\n")
    assert main(["--config", str(cfg), "eof"]) == EXIT_PARSE
    assert "line 1" in capsys.readouterr().err


def test_cli_numerical_exit_code(tmp_path, capsys):
    cfg = tmp_path / "hot.cfg"
    cfg.write_text("g_a = 3\n")
    assert main(["--config", str(cfg), "eof"]) == EXIT_NUMERICAL
    assert "unstable" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [["sweep", "--axis", "phi", "--start", "0", "--stop", "0", "--steps", "3"], ["sweep", "--axis", "bogus"], ["nope"]],
)
def test_cli_usage_errors(argv, capsys):
    assert main(argv) == EXIT_VALIDATION


def test_cli_missing_config_file(tmp_path, capsys):
    assert main(["--config", str(tmp_path / "missing.cfg"), "eof"]) == EXIT_VALIDATION


def test_cli_reproduce(tmp_path, capsys):
    assert main(["reproduce-fig", "5", "--out", str(tmp_path)]) == EXIT_OK
    assert sorted(p.name for p in tmp_path.iterdir()) == ["fig5a.csv", "fig5a.json", "fig5b.csv", "fig5b.json"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "oement", "show-config"], capture_output=True, text=True)
    assert res.returncode == 0
    assert validate_config(res.stdout)[0] == RunConfig()
