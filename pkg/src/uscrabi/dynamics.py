"""Dressed-operator Lindblad dynamics of the driven, damped system.

The master equation propagated here is

    drho/dt = i[rho, H(t)] + kappa D[X+] rho + gamma sum_i D[C_i+] rho,
    D[O] rho = O rho O^dag - (O^dag O rho + rho O^dag O) / 2,

where X+ and C_i+ are the positive-frequency parts of the field quadrature
and of each qubit's sigma_x, built in the eigenbasis of the *static*
Hamiltonian (no post-trace rotating-wave approximation, zero-temperature
baths).  The drive enters only the coherent part; the dissipators stay frozen
to the drive-free dressed operators.

Propagation happens in the static eigenbasis, optionally truncated to the
``n_levels`` lowest levels (an isometry, so trace, Hermiticity and positivity
are exact in the truncated model); ``n_levels=None`` keeps the full space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace as dc_replace

import numpy as np
from scipy.integrate import solve_ivp

from .hilbert import BareLabel, bare_state, pauli, quadrature
from .model import PulseSpec, SystemConfig, drive_envelope, static_hamiltonian
from .spectral import Spectrum, diagonalize, find_anticrossing, identify_state

TRACE_TOL = 1e-8
HERMITICITY_TOL = 1e-9
POSITIVITY_TOL = 1e-7


class IntegrationError(RuntimeError):
    """Master-equation integration failed or violated density-matrix invariants."""


class CalibrationError(RuntimeError):
    """Pulse-amplitude calibration could not reach the requested transfer."""


def check_density_matrix(rho: np.ndarray, context: str = "") -> None:
    """Enforce trace one, Hermiticity and positivity within tolerances."""
    where = f" ({context})" if context else ""
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise IntegrationError(f"trace(rho) = {tr:.12g} drifted beyond {TRACE_TOL}{where}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITICITY_TOL:
        raise IntegrationError(f"rho non-Hermitian by {herm:.3g}{where}")
    min_eig = float(np.linalg.eigvalsh(rho)[0])
    if min_eig < -POSITIVITY_TOL:
        raise IntegrationError(f"rho has negative eigenvalue {min_eig:.3g}{where}")


def lindblad_rhs(
    rho: np.ndarray,
    h_total: np.ndarray,
    x_plus: np.ndarray,
    c_plus_list: list[np.ndarray],
    kappa: float,
    gamma: float,
) -> np.ndarray:
    """Right-hand side of the dressed-operator master equation.

    All operators must share the density matrix's basis.  The generator is
    trace-free by construction.
    """
    if rho.shape != h_total.shape:
        raise ValueError(f"shape mismatch: rho {rho.shape} vs H {h_total.shape}")
    drho = -1j * (h_total @ rho - rho @ h_total)
    for rate, op in [(kappa, x_plus)] + [(gamma, c) for c in c_plus_list]:
        if rate == 0.0:
            continue
        od_o = op.conj().T @ op
        drho += rate * (op @ rho @ op.conj().T - 0.5 * (od_o @ rho + rho @ od_o))
    return drho


@dataclass(frozen=True)
class TrajectoryRecord:
    """Observables of one master-equation trajectory.

    ``qubit_cc[i]`` is the dressed excitation number <C_i- C_i+> of qubit i;
    ``photon_xx`` is <X- X+> (the emitted-flux proxy up to the factor kappa);
    the second-order correlators are G_q2 = <C1- C2- C2+ C1+>,
    G_c2 = <X- X- X+ X+> and G_qc2 = <C1- X- X+ C1+>.  ``omega_eff`` (when
    set) is the joint-excitation rate used to normalize time axes, and
    ``states`` optionally stores the density matrix at every sample in the
    bare basis.
    """

    times: np.ndarray
    photon_xx: np.ndarray
    qubit_cc: np.ndarray
    gq2: np.ndarray
    gc2: np.ndarray
    gqc2: np.ndarray
    omega_eff: float | None = None
    states: np.ndarray | None = None
    pulse: PulseSpec | None = None


class _Workspace:
    """Static-eigenbasis operators shared by one family of evolutions."""

    def __init__(self, config: SystemConfig, n_levels: int | None = None, rwa: bool = False):
        self.config = config
        shape = config.shape
        self.spectrum = diagonalize(static_hamiltonian(config, rwa=rwa), shape)
        dim = shape.dim
        levels = dim if n_levels is None else int(n_levels)
        if not 2 <= levels <= dim:
            raise ValueError(f"n_levels must be in [2, {dim}], got {levels}")
        self.levels = levels
        self.basis = self.spectrum.eigenvectors[:, :levels]
        self.energies = self.spectrum.eigenvalues[:levels]
        u = self.basis
        x_eig = u.conj().T @ quadrature(shape) @ u
        self.x_drive = x_eig
        self.x_plus = np.triu(x_eig, k=1)
        self.c_plus = []
        for i in range(shape.n_qubits):
            sx_eig = u.conj().T @ pauli(shape, i, "x") @ u
            self.c_plus.append(np.triu(sx_eig, k=1))

        self.n_x = self.x_plus.conj().T @ self.x_plus
        self.n_c = [c.conj().T @ c for c in self.c_plus]
        xx = self.x_plus @ self.x_plus
        self.g_c2_op = xx.conj().T @ xx
        if shape.n_qubits >= 2:
            c21 = self.c_plus[1] @ self.c_plus[0]
            self.g_q2_op = c21.conj().T @ c21
        else:
            self.g_q2_op = np.zeros_like(self.n_x)
        xc1 = self.x_plus @ self.c_plus[0]
        self.g_qc2_op = xc1.conj().T @ xc1

    def to_work_basis(self, rho_bare: np.ndarray) -> np.ndarray:
        rho = self.basis.conj().T @ rho_bare @ self.basis
        missing = 1.0 - float(np.trace(rho).real)
        if missing > 1e-10:
            raise ValueError(
                f"initial state has weight {missing:.3g} above the {self.levels} "
                "retained levels; increase n_levels"
            )
        return rho

    def to_bare_basis(self, rho_work: np.ndarray) -> np.ndarray:
        return self.basis @ rho_work @ self.basis.conj().T

    def ground_state_density(self) -> np.ndarray:
        rho = np.zeros((self.levels, self.levels), dtype=complex)
        rho[0, 0] = 1.0
        return rho


def _expect(rho: np.ndarray, op: np.ndarray) -> float:
    return float(np.einsum("ij,ji->", rho, op).real)


def _integrate(
    ws: _Workspace,
    rho0_work: np.ndarray,
    pulse: PulseSpec | None,
    t_grid: np.ndarray,
    rtol: float,
    atol: float,
) -> np.ndarray:
    """Adaptive Runge-Kutta propagation; returns rho at every grid time."""
    cfg = ws.config
    levels = ws.levels
    w = ws.energies
    kappa, gamma = cfg.kappa, cfg.gamma
    drag = 0.5 * kappa * ws.n_x
    for n_c in ws.n_c:
        drag = drag + 0.5 * gamma * n_c
    dissipative = kappa > 0.0 or gamma > 0.0
    x_minus = ws.x_plus.conj().T
    c_minus = [c.conj().T for c in ws.c_plus]

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        rho = y.reshape(levels, levels)
        # static part is diagonal in this basis
        drho = -1j * (w[:, None] * rho - rho * w[None, :])
        if pulse is not None:
            amp = drive_envelope(t, pulse) * math.cos(pulse.carrier_frequency * t)
            if amp != 0.0:
                hd = amp * ws.x_drive
                drho += -1j * (hd @ rho - rho @ hd)
        if dissipative:
            if kappa > 0.0:
                drho += kappa * (ws.x_plus @ rho @ x_minus)
            if gamma > 0.0:
                for c_p, c_m in zip(ws.c_plus, c_minus):
                    drho += gamma * (c_p @ rho @ c_m)
            drho -= drag @ rho + rho @ drag
        return drho.ravel()

    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 1 or np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be a 1-D ascending array")
    t_span = (min(0.0, t_grid[0]), t_grid[-1])
    if t_span[1] == t_span[0]:
        return np.repeat(rho0_work[np.newaxis], len(t_grid), axis=0)
    sol = solve_ivp(
        rhs,
        t_span,
        rho0_work.ravel().astype(complex),
        method="DOP853",
        t_eval=t_grid,
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise IntegrationError(f"integrator failed: {sol.message}")
    return sol.y.T.reshape(len(t_grid), levels, levels)


def evolve(
    config: SystemConfig,
    rho0: np.ndarray,
    pulse: PulseSpec | None,
    t_grid: np.ndarray,
    n_levels: int | None = None,
    rtol: float = 1e-9,
    atol: float = 1e-12,
    store_states: bool = False,
    omega_eff: float | None = None,
    rwa: bool = False,
) -> TrajectoryRecord:
    """Propagate the master equation and record the standard observables.

    Parameters
    ----------
    rho0 : ndarray
        Initial density matrix in the bare basis (a pure-state vector is
        also accepted).
    pulse : PulseSpec or None
        Optional coherent drive; dissipators remain the drive-free dressed
        operators either way.
    t_grid : ndarray
        Ascending sample times (dense output of the adaptive integrator).
    n_levels : int, optional
        Propagate in the lowest ``n_levels`` static eigenstates instead of
        the full space.  The initial state must live below the cutoff.
    rwa : bool
        Propagate under the counter-rotating-free Hamiltonian instead
        (control case; the joint-excitation oscillation disappears).

    Density-matrix invariants (trace, Hermiticity, positivity) are enforced
    at every sample; their violation aborts with IntegrationError.
    """
    ws = _Workspace(config, n_levels, rwa=rwa)
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.ndim == 1:
        rho0 = np.outer(rho0, rho0.conj())
    if rho0.shape != (config.shape.dim,) * 2:
        raise ValueError(
            f"rho0 has shape {rho0.shape}, expected {(config.shape.dim,) * 2}"
        )
    rho_work = ws.to_work_basis(rho0)
    trajectory = _integrate(ws, rho_work, pulse, np.asarray(t_grid, float), rtol, atol)

    n_t = trajectory.shape[0]
    record = TrajectoryRecord(
        times=np.asarray(t_grid, float),
        photon_xx=np.empty(n_t),
        qubit_cc=np.empty((config.n_qubits, n_t)),
        gq2=np.empty(n_t),
        gc2=np.empty(n_t),
        gqc2=np.empty(n_t),
        omega_eff=omega_eff,
        states=np.empty((n_t, config.shape.dim, config.shape.dim), complex)
        if store_states
        else None,
    )
    for k in range(n_t):
        rho = trajectory[k]
        check_density_matrix(rho, context=f"t={record.times[k]:.6g}")
        record.photon_xx[k] = _expect(rho, ws.n_x)
        for i in range(config.n_qubits):
            record.qubit_cc[i, k] = _expect(rho, ws.n_c[i])
        record.gq2[k] = _expect(rho, ws.g_q2_op)
        record.gc2[k] = _expect(rho, ws.g_c2_op)
        record.gqc2[k] = _expect(rho, ws.g_qc2_op)
        if store_states:
            record.states[k] = ws.to_bare_basis(rho)
    return record


def _joint_excitation_levels(spectrum: Spectrum, config: SystemConfig) -> tuple[int, int]:
    """Indices of the (photon-like, joint-excitation-like) hybridized pair,
    chosen by combined weight on the two target bare states."""
    n = config.n_qubits
    va = bare_state(spectrum.shape, BareLabel("g" * n, 1))
    vb = bare_state(spectrum.shape, BareLabel("e" * n, 0))
    combined = (
        np.abs(va.conj() @ spectrum.eigenvectors) ** 2
        + np.abs(vb.conj() @ spectrum.eigenvectors) ** 2
    )
    top = np.argsort(combined)[-2:]
    if combined[top].sum() < 0.25:
        raise ValueError("hybridized pair not resolved; is omega_c at the anticrossing?")
    return (int(top.min()), int(top.max()))


def bare_state_in_levels(
    spectrum: Spectrum, label: BareLabel, levels: tuple[int, ...]
) -> np.ndarray:
    """Normalized projection of a bare state onto a set of eigenstates.

    With ``levels`` the hybridized anticrossing pair and ``label`` the
    one-photon state, this prepares the "photon loaded, qubits in the ground
    state" initial condition without the pulse machinery.
    """
    target = bare_state(spectrum.shape, label)
    u = spectrum.eigenvectors[:, list(levels)]
    coeffs = u.conj().T @ target
    norm = np.linalg.norm(coeffs)
    if norm < 1e-6:
        raise ValueError(f"{label} has no weight on levels {levels}")
    return u @ (coeffs / norm)


@dataclass(frozen=True)
class CalibrationResult:
    """Outcome of the pulse-amplitude scan."""

    pulse: PulseSpec
    transfer: float
    scan_amplitudes: np.ndarray
    scan_transfers: np.ndarray
    blockade_leakage: float


def calibrate_pi_pulse(
    config: SystemConfig,
    tau: float,
    omega_d: float,
    amp_bracket: tuple[float, float] = (0.5, 9.0),
    coarse_points: int = 8,
    n_levels: int | None = None,
    rtol: float = 1e-8,
    atol: float = 1e-11,
) -> CalibrationResult:
    """Scan the Gaussian-pulse amplitude for maximum transfer into the
    hybridized pair, starting from the dressed ground state.

    The transfer curve must rise monotonically to its first maximum inside
    the scanned range (checked on the coarse grid); a golden-section
    refinement then locates the optimum.  Scan evolutions run at relaxed
    tolerance, the final reported run at ``rtol``/``atol``.  The Kerr
    anharmonicity must be active, otherwise a strong pulse climbs the photon
    ladder instead of stopping at one photon; the residual population
    reaching the two-photon-like level is reported as blockade leakage.
    """
    if config.mu <= 0.0:
        raise ValueError("pi-pulse calibration requires an active Kerr term (mu > 0)")
    if tau <= 0.0:
        raise ValueError(f"pulse width must be positive, got {tau}")
    ws = _Workspace(config, n_levels)
    pair = _joint_excitation_levels(ws.spectrum, config)
    t_center = 4.0 * tau
    t_end = 8.0 * tau
    rho0 = ws.ground_state_density()
    scan_rtol, scan_atol = 10.0 * rtol, 100.0 * atol

    def transfer_at(amplitude: float) -> float:
        pulse = PulseSpec(amplitude, t_center, tau, omega_d)
        rho = _integrate(ws, rho0, pulse, np.array([t_end]), scan_rtol, scan_atol)[0]
        return float(rho[pair[0], pair[0]].real + rho[pair[1], pair[1]].real)

    amplitudes = np.linspace(amp_bracket[0], amp_bracket[1], coarse_points)
    transfers = np.array([transfer_at(a) for a in amplitudes])
    # bracket the first lobe of the (pi-pulse-like) transfer curve
    best = None
    for idx in range(1, coarse_points - 1):
        if transfers[idx] >= transfers[idx - 1] and transfers[idx] > transfers[idx + 1]:
            best = idx
            break
    if best is None:
        raise CalibrationError(
            f"no interior transfer maximum inside the amplitude bracket {amp_bracket}; widen it"
        )
    if not np.all(np.diff(transfers[: best + 1]) > -1e-9):
        raise CalibrationError("transfer curve is not unimodal up to its first maximum")

    lo, hi = amplitudes[best - 1], amplitudes[best + 1]
    inv_golden = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - inv_golden * (hi - lo)
    x2 = lo + inv_golden * (hi - lo)
    f1, f2 = transfer_at(x1), transfer_at(x2)
    for _ in range(10):
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_golden * (hi - lo)
            f1 = transfer_at(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_golden * (hi - lo)
            f2 = transfer_at(x2)
    a_star = float(0.5 * (lo + hi))

    # final dense run at the optimum: transfer plus blockade leakage history
    pulse = PulseSpec(a_star, t_center, tau, omega_d)
    two_photon_level, _ = identify_state(
        ws.spectrum, BareLabel("g" * config.n_qubits, 2)
    )
    t_eval = np.linspace(0.0, t_end, 81)
    rhos = _integrate(ws, rho0, pulse, t_eval, rtol, atol)
    transfer = float(
        rhos[-1][pair[0], pair[0]].real + rhos[-1][pair[1], pair[1]].real
    )
    leakage = float(max(rho[two_photon_level, two_photon_level].real for rho in rhos))
    if transfer < 0.8:
        raise CalibrationError(
            f"best transfer {transfer:.3f} < 0.8: photon blockade insufficient "
            "(mu too small?) or pulse width inconsistent with the splitting"
        )
    return CalibrationResult(
        pulse=pulse,
        transfer=transfer,
        scan_amplitudes=amplitudes,
        scan_transfers=transfers,
        blockade_leakage=leakage,
    )


def full_protocol(
    config: SystemConfig,
    bracket: tuple[float, float] | None = None,
    rabi_halfperiods: float = 2.5,
    n_samples: int = 600,
    n_levels: int | None = None,
    rtol: float = 1e-9,
    atol: float = 1e-12,
    store_states: bool = False,
    pulse: PulseSpec | None = None,
) -> TrajectoryRecord:
    """Pulse-then-oscillate sequence from the dressed ground state.

    Locates the joint-excitation anticrossing, parks the resonator there,
    calibrates a pi-like Gaussian pulse (width 1/(4 omega_43), carrier at the
    mean transition frequency of the hybridized pair, losses switched off
    during the calibration scan), then propagates with the configured losses
    through the pulse and ``rabi_halfperiods`` half-periods of the subsequent
    joint absorption/emission oscillation.  A precalibrated ``pulse`` (e.g.
    from a previous run's record) skips the calibration scan.
    """
    n = config.n_qubits
    if bracket is None:
        bracket = ((n - 0.1) * config.omega_q, (n + 0.1) * config.omega_q)
    ac = find_anticrossing(
        config, BareLabel("g" * n, 1), BareLabel("e" * n, 0), bracket
    )
    cfg = dc_replace(config, omega_c=ac.omega_c_star)
    omega_eff = 0.5 * ac.gap
    spectrum = diagonalize(static_hamiltonian(cfg), cfg.shape)
    if pulse is None:
        j, k = _joint_excitation_levels(spectrum, cfg)
        w = spectrum.eigenvalues
        omega_d = 0.5 * (w[j] + w[k]) - w[0]
        tau = 1.0 / (4.0 * ac.gap)
        calib = calibrate_pi_pulse(
            dc_replace(cfg, kappa=0.0, gamma=0.0),
            tau,
            omega_d,
            n_levels=n_levels,
        )
        pulse = calib.pulse
    t_end = pulse.center_time + rabi_halfperiods * math.pi / omega_eff
    t_grid = np.linspace(0.0, t_end, n_samples)
    rho0 = np.outer(spectrum.state(0), spectrum.state(0).conj())
    record = evolve(
        cfg,
        rho0,
        pulse,
        t_grid,
        n_levels=n_levels,
        rtol=rtol,
        atol=atol,
        store_states=store_states,
        omega_eff=omega_eff,
    )
    return TrajectoryRecord(
        times=record.times,
        photon_xx=record.photon_xx,
        qubit_cc=record.qubit_cc,
        gq2=record.gq2,
        gc2=record.gc2,
        gqc2=record.gqc2,
        omega_eff=omega_eff,
        states=record.states,
        pulse=pulse,
    )


def ghz_fidelity(
    config: SystemConfig, bracket: tuple[float, float] | None = None
) -> float:
    """Fidelity of the quarter-period entangled state against the hybrid GHZ
    target (|g..g,1> + e^{i phi}|e..e,0>)/sqrt(2), maximized over phi.

    Lossless evolution from the photon-like member of the hybridized pair,
    evaluated at t = pi/(4 Omega_eff) with Omega_eff half the exact gap; the
    pure state is advanced by exact eigenphases.
    """
    n = config.n_qubits
    if bracket is None:
        bracket = ((n - 0.1) * config.omega_q, (n + 0.1) * config.omega_q)
    label_photon = BareLabel("g" * n, 1)
    label_excited = BareLabel("e" * n, 0)
    ac = find_anticrossing(config, label_photon, label_excited, bracket)
    cfg = dc_replace(config, omega_c=ac.omega_c_star)
    spectrum = diagonalize(static_hamiltonian(cfg), cfg.shape)
    pair = _joint_excitation_levels(spectrum, cfg)
    psi0 = bare_state_in_levels(spectrum, label_photon, pair)
    t_star = math.pi / (4.0 * 0.5 * ac.gap)
    phases = np.exp(-1j * spectrum.eigenvalues * t_star)
    psi_t = spectrum.eigenvectors @ (
        phases * (spectrum.eigenvectors.conj().T @ psi0)
    )
    alpha = bare_state(cfg.shape, label_photon).conj() @ psi_t
    beta = bare_state(cfg.shape, label_excited).conj() @ psi_t
    return float(0.5 * (abs(alpha) + abs(beta)) ** 2)
