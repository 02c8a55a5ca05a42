"""Experiment configuration, orchestration, and CSV output.

Config files are sectioned key-value text::

    [system]
    n_qubits = 2
    omega_q = 1.0
    lambda = 0.1 wq        # 'wq' suffix: in units of omega_q
    theta = pi/6
    n_fock = 20

    [experiment]
    kind = anticrossing
    bracket_lo = 1.9 wq
    bracket_hi = 2.1 wq

    [output]
    output_path = anticross.csv

Unknown keys are errors, every validation problem is reported at once, and
all numeric output is written with 17 significant digits so identical runs
produce bit-identical CSV files.
"""

from __future__ import annotations

import math
import re
import time
from dataclasses import dataclass, fields as dc_fields, replace as dc_replace
from pathlib import Path

import numpy as np

from . import __version__
from .hilbert import BareLabel, parse_bare_label
from .model import SystemConfig, static_hamiltonian
from .spectral import diagonalize, find_anticrossing, sweep_spectrum
from .perturbation import compare_with_exact
from .dynamics import calibrate_pi_pulse, full_protocol, ghz_fidelity

KINDS = ("spectrum_sweep", "anticrossing", "effective_coupling", "dynamics", "calibrate", "ghz")

_SYSTEM_KEYS = {
    "n_qubits": "int",
    "omega_q": "number",
    "omega_c": "freq",
    "lambda": "freq",
    "lambdas": "freq_list",
    "theta": "angle",
    "mu": "freq",
    "kappa": "freq",
    "gamma": "freq",
    "n_fock": "int",
}

_EXPERIMENT_KEYS = {
    "kind": "word",
    "omega_c_min": "freq",
    "omega_c_max": "freq",
    "omega_c_count": "int",
    "n_levels": "int",
    "bracket_lo": "freq",
    "bracket_hi": "freq",
    "state_a": "label",
    "state_b": "label",
    "lambda_min": "freq",
    "lambda_max": "freq",
    "lambda_count": "int",
    "rabi_halfperiods": "number",
    "n_samples": "int",
    "amplitude": "number",
    "tau": "number",
    "carrier_frequency": "freq",
    "work_levels": "int",
}

_OUTPUT_KEYS = {"output_path": "path"}


class ConfigError(ValueError):
    """Config text failed to parse or validate; the message lists every problem."""


@dataclass(frozen=True)
class ExperimentSpec:
    """One fully validated, deterministic experiment."""

    kind: str
    system: SystemConfig
    output_path: str = "out.csv"
    # spectrum_sweep
    omega_c_min: float | None = None
    omega_c_max: float | None = None
    omega_c_count: int | None = None
    n_levels: int | None = None
    # anticrossing / effective_coupling / dynamics / ghz
    bracket_lo: float | None = None
    bracket_hi: float | None = None
    state_a: BareLabel | None = None
    state_b: BareLabel | None = None
    # effective_coupling
    lambda_min: float | None = None
    lambda_max: float | None = None
    lambda_count: int | None = None
    # dynamics / calibrate
    rabi_halfperiods: float | None = None
    n_samples: int | None = None
    amplitude: float | None = None
    tau: float | None = None
    carrier_frequency: float | None = None
    work_levels: int | None = None


_PI_EXPR = re.compile(r"^(?P<num>[+-]?\d+(\.\d+)?)?\s*\*?\s*pi\s*(/\s*(?P<den>\d+(\.\d+)?))?$")


def _parse_number(token: str, line_no: int) -> float:
    m = _PI_EXPR.match(token.strip())
    if m:
        num = float(m.group("num")) if m.group("num") else 1.0
        den = float(m.group("den")) if m.group("den") else 1.0
        return num * math.pi / den
    try:
        return float(token)
    except ValueError:
        raise ConfigError(f"line {line_no}: cannot parse number {token!r}") from None


def _parse_scalar(value: str, kind: str, line_no: int):
    """Parse one value; 'freq' returns (number, is_wq_units)."""
    v = value.strip()
    if kind == "int":
        try:
            return int(v)
        except ValueError:
            raise ConfigError(f"line {line_no}: expected integer, got {v!r}") from None
    if kind in ("number", "angle"):
        return _parse_number(v, line_no)
    if kind == "freq":
        if v.endswith("wq"):
            return (_parse_number(v[:-2], line_no), True)
        return (_parse_number(v, line_no), False)
    if kind == "freq_list":
        return [_parse_scalar(part, "freq", line_no) for part in v.split(",")]
    if kind == "label":
        try:
            return parse_bare_label(v)
        except ValueError as exc:
            raise ConfigError(f"line {line_no}: {exc}") from None
    if kind == "word":
        return v
    if kind == "path":
        return v
    raise AssertionError(kind)


def parse_config(text: str) -> ExperimentSpec:
    """Parse and validate config text into an ExperimentSpec.

    Parse problems carry the offending line number; validation problems are
    aggregated into a single error listing every violated constraint.
    """
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    current = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in ("system", "experiment", "output"):
                raise ConfigError(f"line {line_no}: unknown section [{current}]")
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {raw.strip()!r}")
        if current is None:
            raise ConfigError(f"line {line_no}: key outside of any [section]")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in sections[current]:
            raise ConfigError(f"line {line_no}: duplicate key {key!r} in [{current}]")
        sections[current][key] = (value, line_no)

    problems: list[str] = []
    for section, allowed in (
        ("system", _SYSTEM_KEYS),
        ("experiment", _EXPERIMENT_KEYS),
        ("output", _OUTPUT_KEYS),
    ):
        for key, (_value, line_no) in sections.get(section, {}).items():
            if key not in allowed:
                problems.append(f"line {line_no}: unknown key {key!r} in [{section}]")
    if problems:
        raise ConfigError("invalid config:\n  " + "\n  ".join(problems))

    sys_raw = sections.get("system", {})
    parsed: dict[str, object] = {}
    for key, (value, line_no) in sys_raw.items():
        parsed[key] = _parse_scalar(value, _SYSTEM_KEYS[key], line_no)

    # configs are reproducible records: every physical parameter is explicit
    # (omega_q alone defaults to 1, it only fixes the unit)
    for key in ("n_qubits", "omega_c", "theta", "mu", "kappa", "gamma", "n_fock"):
        if key not in parsed:
            problems.append(f"[system] is missing the required key {key!r}")
    if "lambda" not in parsed and "lambdas" not in parsed:
        problems.append("[system] is missing the coupling ('lambda' or 'lambdas')")

    if "omega_q" in parsed:
        omega_q = float(parsed["omega_q"])
    else:
        omega_q = 1.0
    def resolve_freq(item) -> float:
        value, in_wq = item
        return value * omega_q if in_wq else value

    system_kwargs: dict[str, object] = {"omega_q": omega_q}
    if "n_qubits" in parsed:
        system_kwargs["n_qubits"] = parsed["n_qubits"]
    if "n_fock" in parsed:
        system_kwargs["n_fock"] = parsed["n_fock"]
    if "theta" in parsed:
        system_kwargs["theta"] = parsed["theta"]
    for key in ("omega_c", "mu", "kappa", "gamma"):
        if key in parsed:
            system_kwargs[key] = resolve_freq(parsed[key])
    if "lambda" in parsed and "lambdas" in parsed:
        problems.append("[system] specifies both 'lambda' and 'lambdas'")
    elif "lambda" in parsed:
        system_kwargs["lambdas"] = resolve_freq(parsed["lambda"])
    elif "lambdas" in parsed:
        system_kwargs["lambdas"] = tuple(resolve_freq(item) for item in parsed["lambdas"])

    try:
        system = SystemConfig(**system_kwargs)
    except ValueError as exc:
        problems.append(str(exc))
        system = None

    exp_raw = sections.get("experiment", {})
    if "kind" not in exp_raw:
        problems.append("[experiment] is missing the required key 'kind'")
        kind = None
    else:
        kind = exp_raw["kind"][0].strip()
        if kind not in KINDS:
            problems.append(f"unknown experiment kind {kind!r}; expected one of {KINDS}")
            kind = None

    spec_kwargs: dict[str, object] = {}
    for key, (value, line_no) in exp_raw.items():
        if key == "kind":
            continue
        vkind = _EXPERIMENT_KEYS[key]
        item = _parse_scalar(value, vkind, line_no)
        spec_kwargs[key] = resolve_freq(item) if vkind == "freq" else item

    out_raw = sections.get("output", {})
    output_path = out_raw.get("output_path", ("out.csv", 0))[0]

    required = {
        "spectrum_sweep": ("omega_c_min", "omega_c_max", "omega_c_count", "n_levels"),
        "anticrossing": ("bracket_lo", "bracket_hi"),
        "effective_coupling": ("lambda_min", "lambda_max", "lambda_count"),
        "dynamics": (),
        "calibrate": (),
        "ghz": (),
    }
    if kind is not None:
        for key in required[kind]:
            if key not in spec_kwargs:
                problems.append(f"experiment kind {kind!r} requires key {key!r}")
    if kind == "dynamics" and system is not None and system.n_qubits != 2:
        problems.append("dynamics CSV output is defined for exactly 2 qubits")

    if problems:
        raise ConfigError("invalid config:\n  " + "\n  ".join(problems))

    return ExperimentSpec(kind=kind, system=system, output_path=output_path, **spec_kwargs)


def _format(x: float) -> str:
    return f"{x:.17g}"


def render_config(spec: ExperimentSpec) -> str:
    """Serialize a spec back to config text; parse(render(spec)) == spec."""
    lines = ["[system]"]
    sys = spec.system
    lines.append(f"n_qubits = {sys.n_qubits}")
    lines.append(f"omega_q = {_format(sys.omega_q)}")
    lines.append(f"omega_c = {_format(sys.omega_c)}")
    lines.append("lambdas = " + ", ".join(_format(x) for x in sys.lambdas))
    lines.append(f"theta = {_format(sys.theta)}")
    lines.append(f"mu = {_format(sys.mu)}")
    lines.append(f"kappa = {_format(sys.kappa)}")
    lines.append(f"gamma = {_format(sys.gamma)}")
    lines.append(f"n_fock = {sys.n_fock}")
    lines.append("")
    lines.append("[experiment]")
    lines.append(f"kind = {spec.kind}")
    for field in dc_fields(ExperimentSpec):
        if field.name in ("kind", "system", "output_path"):
            continue
        value = getattr(spec, field.name)
        if value is None:
            continue
        if isinstance(value, BareLabel):
            lines.append(f"{field.name} = {value.qubits}{value.n_photons}")
        elif isinstance(value, int):
            lines.append(f"{field.name} = {value}")
        else:
            lines.append(f"{field.name} = {_format(value)}")
    lines.append("")
    lines.append("[output]")
    lines.append(f"output_path = {spec.output_path}")
    lines.append("")
    return "\n".join(lines)


def _write_csv(path: Path, header: list[str], rows: list[list[float]]) -> None:
    with path.open("w", encoding="utf-8") as fh:
        fh.write(", ".join(header) + "\n")
        for row in rows:
            fh.write(", ".join(_format(x) for x in row) + "\n")


def _default_states(spec: ExperimentSpec) -> tuple[BareLabel, BareLabel]:
    n = spec.system.n_qubits
    state_a = spec.state_a or BareLabel("g" * n, 1)
    state_b = spec.state_b or BareLabel("e" * n, 0)
    return state_a, state_b


def _default_bracket(spec: ExperimentSpec) -> tuple[float, float]:
    n = spec.system.n_qubits
    lo = spec.bracket_lo if spec.bracket_lo is not None else (n - 0.1) * spec.system.omega_q
    hi = spec.bracket_hi if spec.bracket_hi is not None else (n + 0.1) * spec.system.omega_q
    return lo, hi


def run(spec: ExperimentSpec, n_workers: int = 1) -> Path:
    """Execute an experiment; write its CSV and a run manifest.

    Returns the CSV path.  Output rows follow the input grid order regardless
    of evaluation order, so repeated runs are bit-identical.
    """
    t_start = time.perf_counter()
    out = Path(spec.output_path)
    if out.parent != Path("."):
        out.parent.mkdir(parents=True, exist_ok=True)
    sys = spec.system
    wq = sys.omega_q

    if spec.kind == "spectrum_sweep":
        grid = np.linspace(spec.omega_c_min, spec.omega_c_max, spec.omega_c_count)
        sweep = sweep_spectrum(sys, grid, spec.n_levels, n_workers=n_workers)
        rows = []
        for p, wc in enumerate(sweep.omega_c_values):
            for level in range(spec.n_levels):
                rows.append([wc / wq, float(level), sweep.transitions[p, level] / wq])
        _write_csv(out, ["omega_c_over_wq", "level_index", "omega_i0_over_wq"], rows)

    elif spec.kind == "anticrossing":
        state_a, state_b = _default_states(spec)
        result = find_anticrossing(sys, state_a, state_b, (spec.bracket_lo, spec.bracket_hi))
        # overlaps of the lower level of the hybridized pair with each target
        _write_csv(
            out,
            ["omega_c_star_over_wq", "gap_over_wq", "overlap_bareA_sq", "overlap_bareB_sq"],
            [[
                result.omega_c_star / wq,
                result.gap / wq,
                float(result.hybridized_overlaps[0, 0]),
                float(result.hybridized_overlaps[0, 1]),
            ]],
        )

    elif spec.kind == "effective_coupling":
        grid = np.linspace(spec.lambda_min, spec.lambda_max, spec.lambda_count) / wq
        bracket = None
        if spec.bracket_lo is not None and spec.bracket_hi is not None:
            bracket = (spec.bracket_lo, spec.bracket_hi)
        cmp = compare_with_exact(sys, grid, bracket=bracket, n_workers=n_workers)
        rows = [
            [lam, a, e]
            for lam, a, e in zip(cmp.lambdas_over_wq, cmp.two_omega_analytic, cmp.two_omega_exact)
        ]
        _write_csv(out, ["lambda_over_wq", "two_omega_analytic", "two_omega_exact"], rows)

    elif spec.kind == "dynamics":
        kwargs: dict[str, object] = {}
        if spec.rabi_halfperiods is not None:
            kwargs["rabi_halfperiods"] = spec.rabi_halfperiods
        if spec.n_samples is not None:
            kwargs["n_samples"] = spec.n_samples
        if spec.work_levels is not None:
            kwargs["n_levels"] = spec.work_levels
        record = full_protocol(sys, bracket=_default_bracket(spec), **kwargs)
        rows = []
        for idx, t in enumerate(record.times):
            rows.append([
                t * wq,
                record.omega_eff * t / math.pi,
                record.photon_xx[idx],
                record.qubit_cc[0, idx],
                record.qubit_cc[1, idx],
                record.gq2[idx],
                record.gc2[idx],
                record.gqc2[idx],
            ])
        _write_csv(
            out,
            ["time_wq", "omega_eff_t_over_pi", "photon_XX", "qubit1_CC", "qubit2_CC", "Gq2", "Gc2", "Gqc2"],
            rows,
        )

    elif spec.kind == "calibrate":
        state_a, state_b = _default_states(spec)
        result = find_anticrossing(sys, state_a, state_b, _default_bracket(spec))
        cfg = dc_replace(sys, omega_c=result.omega_c_star)
        tau = spec.tau if spec.tau is not None else 1.0 / (4.0 * result.gap)
        if spec.carrier_frequency is not None:
            omega_d = spec.carrier_frequency
        else:
            spectrum = diagonalize(static_hamiltonian(cfg), cfg.shape)
            j, k = result.level_pair
            omega_d = 0.5 * (spectrum.eigenvalues[j] + spectrum.eigenvalues[k]) - spectrum.eigenvalues[0]
        calib = calibrate_pi_pulse(cfg, tau, omega_d, n_levels=spec.work_levels)
        rows = [[a, tr] for a, tr in zip(calib.scan_amplitudes, calib.scan_transfers)]
        rows.append([calib.pulse.amplitude, calib.transfer])
        _write_csv(out, ["amplitude", "transfer"], rows)

    elif spec.kind == "ghz":
        fidelity = ghz_fidelity(sys, bracket=_default_bracket(spec))
        _write_csv(out, ["fidelity"], [[fidelity]])

    else:
        raise ConfigError(f"unknown experiment kind {spec.kind!r}")

    wall = time.perf_counter() - t_start
    manifest = out.with_suffix(out.suffix + ".manifest.txt")
    manifest.write_text(
        render_config(spec)
        + f"\n# library version: {__version__}\n# wall time: {wall:.3f} s\n",
        encoding="utf-8",
    )
    return out
