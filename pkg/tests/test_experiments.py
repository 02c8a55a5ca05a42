from pathlib import Path

import numpy as np
import pytest

from uscrabi.experiments import ConfigError, parse_config, render_config, run
from uscrabi.cli import main

SYSTEM_BLOCK = """
[system]
n_qubits = 2
omega_c = 2.0 wq
lambda = 0.1 wq
theta = pi/6
mu = 0.037
kappa = 0
gamma = 0
n_fock = 20
"""


def make_config(experiment: str, output: str = "out.csv") -> str:
    return SYSTEM_BLOCK + f"\n[experiment]\n{experiment}\n\n[output]\noutput_path = {output}\n"


def test_parse_basic_units_and_angle():
    spec = parse_config(make_config("kind = ghz"))
    assert spec.kind == "ghz"
    assert spec.system.lambdas == (0.1, 0.1)
    assert spec.system.omega_c == 2.0
    assert abs(spec.system.theta - 0.5235987755982988) < 1e-15


def test_parse_wq_suffix_scales_with_omega_q():
    text = make_config("kind = ghz").replace("n_qubits = 2", "n_qubits = 2\nomega_q = 3.0")
    spec = parse_config(text)
    assert spec.system.lambdas == pytest.approx((0.3, 0.3))
    assert spec.system.omega_c == pytest.approx(6.0)


def test_parse_missing_required_key_names_it():
    text = make_config("kind = ghz").replace("n_fock = 20\n", "")
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert "n_fock" in str(err.value)


def test_parse_unknown_key_rejected_with_line_number():
    text = make_config("kind = ghz").replace("mu = 0.037", "mu = 0.037\nmagic = 1")
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert "magic" in str(err.value) and "line" in str(err.value)


def test_parse_errors_are_aggregated():
    text = make_config("kind = anticrossing")  # missing bracket_lo/hi
    text = text.replace("lambda = 0.1 wq", "lambda = -0.1 wq")
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    message = str(err.value)
    assert "bracket_lo" in message and "bracket_hi" in message and "coupling" in message


def test_parse_duplicate_key_and_syntax_errors():
    with pytest.raises(ConfigError) as err:
        parse_config("[system]\nn_fock = 20\nn_fock = 21\n")
    assert "line 3" in str(err.value)
    with pytest.raises(ConfigError) as err:
        parse_config("[system]\nnonsense line\n")
    assert "line 2" in str(err.value)
    with pytest.raises(ConfigError):
        parse_config("key_outside = 1\n")
    with pytest.raises(ConfigError):
        parse_config("[wrong_section]\n")


def test_parse_rejects_both_lambda_forms():
    text = make_config("kind = ghz").replace(
        "lambda = 0.1 wq", "lambda = 0.1 wq\nlambdas = 0.1, 0.1"
    )
    with pytest.raises(ConfigError):
        parse_config(text)


def test_parse_unknown_kind():
    with pytest.raises(ConfigError) as err:
        parse_config(make_config("kind = banana"))
    assert "banana" in str(err.value)


def test_dynamics_kind_requires_two_qubits():
    text = make_config("kind = dynamics").replace("n_qubits = 2", "n_qubits = 3").replace(
        "lambda = 0.1 wq", "lambda = 0.1 wq"
    )
    with pytest.raises(ConfigError):
        parse_config(text)


def test_round_trip_render_parse():
    spec = parse_config(
        make_config(
            "kind = anticrossing\nbracket_lo = 1.9 wq\nbracket_hi = 2.1 wq\nstate_a = gg1\nstate_b = ee0",
            output="anticross.csv",
        )
    )
    assert parse_config(render_config(spec)) == spec
    spec2 = parse_config(make_config("kind = effective_coupling\nlambda_min = 0.02\nlambda_max = 0.06\nlambda_count = 2"))
    assert parse_config(render_config(spec2)) == spec2


def _read_csv(path: Path):
    lines = path.read_text().strip().splitlines()
    header = [h.strip() for h in lines[0].split(",")]
    rows = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    return header, rows


def test_run_anticrossing_writes_expected_csv(tmp_path):
    out = tmp_path / "ac.csv"
    spec = parse_config(
        make_config("kind = anticrossing\nbracket_lo = 1.9 wq\nbracket_hi = 2.1 wq", str(out))
    )
    run(spec)
    header, rows = _read_csv(out)
    assert header == ["omega_c_star_over_wq", "gap_over_wq", "overlap_bareA_sq", "overlap_bareB_sq"]
    assert rows.shape == (1, 4)
    assert abs(rows[0, 1] - 1.97e-3) < 0.01 * 1.97e-3
    assert abs(rows[0, 2] - 0.5) < 0.05 and abs(rows[0, 3] - 0.5) < 0.05
    manifest = out.with_suffix(out.suffix + ".manifest.txt")
    assert manifest.exists()
    assert "library version" in manifest.read_text()


def test_run_outputs_bit_identical(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    base = make_config("kind = anticrossing\nbracket_lo = 1.9 wq\nbracket_hi = 2.1 wq")
    run(parse_config(base.replace("out.csv", str(out1))))
    run(parse_config(base.replace("out.csv", str(out2))))
    assert out1.read_bytes() == out2.read_bytes()


def test_run_spectrum_sweep_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    spec = parse_config(
        make_config(
            "kind = spectrum_sweep\nomega_c_min = 1.5 wq\nomega_c_max = 2.5 wq\nomega_c_count = 5\nn_levels = 6",
            str(out),
        )
    )
    run(spec, n_workers=2)
    header, rows = _read_csv(out)
    assert header == ["omega_c_over_wq", "level_index", "omega_i0_over_wq"]
    assert rows.shape == (5 * 6, 3)
    # rows ordered by sweep point then level
    assert np.all(np.diff(rows[:, 0]) >= 0)


def test_run_effective_coupling_csv(tmp_path):
    out = tmp_path / "eff.csv"
    text = make_config(
        "kind = effective_coupling\nlambda_min = 0.04 wq\nlambda_max = 0.08 wq\nlambda_count = 2",
        str(out),
    ).replace("mu = 0.037", "mu = 0")
    run(parse_config(text))
    header, rows = _read_csv(out)
    assert header == ["lambda_over_wq", "two_omega_analytic", "two_omega_exact"]
    assert rows.shape == (2, 3)
    assert np.allclose(rows[:, 0], [0.04, 0.08])
    assert np.all(np.abs(rows[:, 2] / rows[:, 1] - 1.0) < 0.02)


def test_run_ghz_csv(tmp_path):
    out = tmp_path / "ghz.csv"
    spec = parse_config(make_config("kind = ghz", str(out)))
    run(spec)
    header, rows = _read_csv(out)
    assert header == ["fidelity"]
    assert rows[0, 0] >= 0.95


def test_run_dynamics_csv_schema_and_peak(tmp_path):
    out = tmp_path / "dyn.csv"
    text = make_config(
        "kind = dynamics\nrabi_halfperiods = 1.2\nn_samples = 120\nwork_levels = 20",
        str(out),
    ).replace("n_fock = 20", "n_fock = 12")
    run(parse_config(text))
    header, rows = _read_csv(out)
    assert header == [
        "time_wq",
        "omega_eff_t_over_pi",
        "photon_XX",
        "qubit1_CC",
        "qubit2_CC",
        "Gq2",
        "Gc2",
        "Gqc2",
    ]
    assert rows.shape == (120, 8)
    assert np.max(rows[:, 3]) >= 0.9  # qubit excitation peaks near one
    assert np.allclose(rows[:, 1], rows[:, 0] * rows[-1, 1] / rows[-1, 0])


def test_cli_subcommand_kind_mismatch(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text(make_config("kind = ghz", str(tmp_path / "x.csv")))
    assert main(["anticross", "--config", str(cfg)]) == 1
    assert "does not match" in capsys.readouterr().err


def test_cli_missing_config(capsys):
    assert main(["ghz", "--config", "/does/not/exist.cfg"]) == 1
    assert "cannot read" in capsys.readouterr().err


def test_cli_runs_ghz_end_to_end(tmp_path, capsys):
    cfg = tmp_path / "ghz.cfg"
    out = tmp_path / "ghz.csv"
    cfg.write_text(make_config("kind = ghz", "ignored.csv"))
    assert main(["ghz", "--config", str(cfg), "--out", str(out)]) == 0
    assert out.exists()
    header, rows = _read_csv(out)
    assert rows[0, 0] >= 0.95


def test_render_config_contains_all_fields():
    spec = parse_config(make_config("kind = ghz"))
    text = render_config(spec)
    for key in ("n_qubits", "omega_q", "omega_c", "lambdas", "theta", "mu", "kappa", "gamma", "n_fock"):
        assert key in text
