"""Effective coupling between one photon and N jointly excited atoms.

Third-order perturbation theory in the qubit-resonator coupling gives

    V_eff(f<-i) = sum_{m,n} V_fn V_nm V_mi / ((E_i - E_m)(E_i - E_n))

for the energy-degenerate pair |g..g,1> and |e..e,0> at resonance
omega_c = N * omega_q.  For equal couplings the perturbation preserves qubit
permutation symmetry, so the sum collapses onto the symmetric collective
ladder |k excited, n photons>; walking that ladder enumerates every virtual
path exactly once (four paths for two qubits).  A dense sum over all product
bare states serves as an independent brute-force oracle.

All quantities in this module are expressed in units of omega_q.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace as dc_replace
from itertools import product as iter_product

import numpy as np

from .hilbert import BareLabel, all_bare_labels, bare_index, pauli, quadrature
from .model import SystemConfig
from .spectral import find_anticrossing

_DEGENERACY_TOL = 1e-9


class DegenerateIntermediateError(ValueError):
    """An intermediate state is degenerate with the initial state: the
    resonance condition is violated and the virtual-path sum is ill-defined."""


@dataclass(frozen=True)
class CollectiveLabel:
    """Permutation-symmetric basis state: ``n_excited`` qubits share one
    excitation-symmetric (Dicke) state, with ``n_photons`` in the resonator."""

    n_excited: int
    n_photons: int

    def __str__(self) -> str:
        return f"|{self.n_excited} exc,{self.n_photons} ph>"


@dataclass(frozen=True)
class PathContribution:
    """One virtual path i -> ... -> f with its recomputable ingredients.

    ``vertex_elements[s]`` is <states[s+1]|V|states[s]>; ``denominators[s]``
    is E_i - E(intermediate s).  The amplitude is the product of vertex
    elements divided by the product of denominators.
    """

    states: tuple[CollectiveLabel, ...]
    vertex_elements: tuple[float, ...]
    denominators: tuple[float, ...]
    amplitude: float


@dataclass(frozen=True)
class EffectiveCoupling:
    """Joint-excitation coupling rate Omega_eff in units of omega_q.

    The sign convention is Omega_eff = -V_eff(f<-i); for the two-qubit
    process this is positive for mixing angles in (0, pi/2).  ``source`` is
    one of 'analytic', 'path_sum', 'exact_gap'; an exact-gap value stores
    half the anticrossing splitting.
    """

    value: float
    order: int
    source: str

    @classmethod
    def from_gap(cls, gap: float) -> "EffectiveCoupling":
        return cls(value=0.5 * gap, order=0, source="exact_gap")


def effective_coupling_analytic(lambda_over_wq: float, theta: float) -> EffectiveCoupling:
    """Closed-form two-qubit result (8/3) sin(theta) cos^2(theta) (lambda/wq)^3."""
    value = (8.0 / 3.0) * math.sin(theta) * math.cos(theta) ** 2 * lambda_over_wq**3
    return EffectiveCoupling(value=value, order=3, source="analytic")


def _collective_energy(label: CollectiveLabel, n_qubits: int, omega_c: float) -> float:
    """Bare energy (units of omega_q) of a collective state."""
    return (label.n_excited - 0.5 * n_qubits) + omega_c * label.n_photons


def _collective_vertex(
    src: CollectiveLabel, dst: CollectiveLabel, n_qubits: int, lam: float, theta: float
) -> float:
    """<dst| lambda*(a+a^dag)*sum_i(cos t sx_i + sin t sz_i) |src> on the
    symmetric ladder; zero unless the photon number changes by one."""
    dn = dst.n_photons - src.n_photons
    dk = dst.n_excited - src.n_excited
    if abs(dn) != 1:
        return 0.0
    photon = math.sqrt(src.n_photons + 1) if dn == 1 else math.sqrt(src.n_photons)
    k = src.n_excited
    if dk == 1:
        qubit = math.cos(theta) * math.sqrt((k + 1) * (n_qubits - k))
    elif dk == -1:
        qubit = math.cos(theta) * math.sqrt(k * (n_qubits - k + 1))
    elif dk == 0:
        qubit = math.sin(theta) * (2 * k - n_qubits)
    else:
        return 0.0
    return lam * photon * qubit


def _collective_endpoint(label: BareLabel) -> CollectiveLabel:
    if set(label.qubits) not in ({"g"}, {"e"}):
        raise ValueError(
            "path enumeration requires uniform endpoints (all qubits g or all e), "
            f"got {label}"
        )
    k = label.qubits.count("e")
    return CollectiveLabel(n_excited=k, n_photons=label.n_photons)


def enumerate_paths(
    config: SystemConfig, initial: BareLabel, final: BareLabel, order: int
) -> list[PathContribution]:
    """All virtual paths of the given perturbative order between two
    degenerate uniform bare states, for equal qubit-resonator couplings.

    Paths are sequences of collective states connected by non-zero matrix
    elements of the coupling operator; intermediates degenerate with the
    initial state are excluded (revisiting the endpoint pair is skipped, any
    other degeneracy raises DegenerateIntermediateError).
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if len(set(config.lambdas)) != 1:
        raise ValueError("path enumeration requires equal coupling rates on all qubits")
    n = config.n_qubits
    wc = config.omega_c / config.omega_q
    lam = config.lambdas[0] / config.omega_q
    start = _collective_endpoint(initial)
    goal = _collective_endpoint(final)
    e_init = _collective_energy(start, n, wc)
    e_goal = _collective_energy(goal, n, wc)
    if abs(e_init - e_goal) > _DEGENERACY_TOL:
        raise ValueError(
            f"endpoints are not bare-degenerate: E_i={e_init:.6g}, E_f={e_goal:.6g} "
            "(choose omega_c at the joint-excitation resonance)"
        )

    n_photon_cap = start.n_photons + order
    paths: list[PathContribution] = []

    def neighbors(s: CollectiveLabel):
        for dk, dn in iter_product((-1, 0, 1), (-1, 1)):
            k2, n2 = s.n_excited + dk, s.n_photons + dn
            if not (0 <= k2 <= n and 0 <= n2 <= n_photon_cap):
                continue
            dst = CollectiveLabel(k2, n2)
            v = _collective_vertex(s, dst, n, lam, config.theta)
            if v != 0.0:
                yield dst, v

    def walk(seq, vertices, steps_left):
        here = seq[-1]
        if steps_left == 0:
            if here == goal:
                denoms = tuple(
                    e_init - _collective_energy(s, n, wc) for s in seq[1:-1]
                )
                amp = math.prod(vertices) / math.prod(denoms) if denoms else math.prod(vertices)
                paths.append(
                    PathContribution(
                        states=tuple(seq),
                        vertex_elements=tuple(vertices),
                        denominators=denoms,
                        amplitude=amp,
                    )
                )
            return
        for dst, v in neighbors(here):
            if steps_left > 1:  # dst would be an intermediate state
                e_dst = _collective_energy(dst, n, wc)
                if abs(e_dst - e_init) < _DEGENERACY_TOL:
                    if dst in (start, goal):
                        continue
                    raise DegenerateIntermediateError(
                        f"intermediate {dst} is degenerate with the initial state "
                        f"(E={e_dst:.6g}); resonance condition violated"
                    )
            elif dst != goal:
                continue
            walk(seq + [dst], vertices + [v], steps_left - 1)

    walk([start], [], order)
    return paths


def effective_coupling_path_sum(paths: list[PathContribution]) -> EffectiveCoupling:
    """Signed sum of path amplitudes, reported as Omega_eff = -V_eff."""
    if not paths:
        return EffectiveCoupling(value=0.0, order=0, source="path_sum")
    order = len(paths[0].vertex_elements)
    v_eff = sum(p.amplitude for p in paths)
    return EffectiveCoupling(value=-v_eff, order=order, source="path_sum")


def coupling_dense(
    config: SystemConfig, initial: BareLabel, final: BareLabel, order: int
) -> float:
    """Brute-force V_eff over ALL product bare states (units of omega_q).

    Builds the full perturbation matrix and bare energies on the product
    space and contracts sum_{m,n,...} V_f..V..i / prod(E_i - E) directly,
    masking states degenerate with the initial one.  Independent oracle for
    the path enumeration.
    """
    shape = config.shape
    cos_t, sin_t = math.cos(config.theta), math.sin(config.theta)
    x = quadrature(shape)
    v = np.zeros((shape.dim, shape.dim), dtype=complex)
    for i, lam in enumerate(config.lambdas):
        v += (lam / config.omega_q) * (
            cos_t * (x @ pauli(shape, i, "x")) + sin_t * (x @ pauli(shape, i, "z"))
        )
    wq = config.omega_q
    energies = np.zeros(shape.dim)
    for idx, label in enumerate(all_bare_labels(shape)):
        energies[idx] = (label.qubits.count("e") - 0.5 * shape.n_qubits) + (
            config.omega_c / wq
        ) * label.n_photons
    i_idx = bare_index(shape, initial)
    f_idx = bare_index(shape, final)
    e_i = energies[i_idx]
    if abs(e_i - energies[f_idx]) > _DEGENERACY_TOL:
        raise ValueError("endpoints are not bare-degenerate at this omega_c")
    virtual = np.abs(energies - e_i) > _DEGENERACY_TOL
    resolvent = np.zeros(shape.dim)
    resolvent[virtual] = 1.0 / (e_i - energies[virtual])
    w = v[:, i_idx]
    for _ in range(order - 1):
        w = v @ (resolvent * w)
    return float(np.real(w[f_idx]))


@dataclass(frozen=True)
class CouplingComparison:
    """Analytic vs exact-diagonalization splitting across a coupling grid."""

    lambdas_over_wq: np.ndarray
    two_omega_analytic: np.ndarray
    two_omega_exact: np.ndarray


def compare_with_exact(
    config: SystemConfig,
    lambda_grid: np.ndarray,
    bracket: tuple[float, float] | None = None,
    n_workers: int = 1,
) -> CouplingComparison:
    """For each coupling rate, the analytic splitting 2*Omega_eff and the
    exact minimum gap of the joint-excitation anticrossing.

    Grid points are independent; with ``n_workers > 1`` they are evaluated
    in parallel, with results merged back in grid order.
    """
    lambda_grid = np.asarray(lambda_grid, dtype=float)
    n = config.n_qubits
    state_a = BareLabel("g" * n, 1)
    state_b = BareLabel("e" * n, 0)
    if bracket is None:
        bracket = ((n - 0.2) * config.omega_q, (n + 0.2) * config.omega_q)

    def exact_gap(lam: float) -> float:
        cfg = dc_replace(config, lambdas=(lam * config.omega_q,) * n)
        return find_anticrossing(cfg, state_a, state_b, bracket).gap / config.omega_q

    analytic = np.array(
        [2.0 * effective_coupling_analytic(lam, config.theta).value for lam in lambda_grid]
    )
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            exact = np.array(list(pool.map(exact_gap, lambda_grid)))
    else:
        exact = np.array([exact_gap(lam) for lam in lambda_grid])
    return CouplingComparison(
        lambdas_over_wq=lambda_grid,
        two_omega_analytic=analytic,
        two_omega_exact=exact,
    )


def power_law_exponent(x: np.ndarray, y: np.ndarray) -> float:
    """Slope of log(y) against log(x), by least squares."""
    return float(np.polyfit(np.log(np.asarray(x)), np.log(np.asarray(y)), 1)[0])


def format_path_report(paths: list[PathContribution]) -> str:
    """Human-readable audit listing of every path: the state sequence, each
    vertex matrix element, the energy denominators, and the amplitude."""
    lines = []
    for p_idx, p in enumerate(paths):
        seq = " -> ".join(str(s) for s in p.states)
        lines.append(f"path {p_idx + 1}: {seq}")
        lines.append(
            "  vertices: " + ", ".join(f"{v:+.6g}" for v in p.vertex_elements)
        )
        if p.denominators:
            lines.append(
                "  denominators: " + ", ".join(f"{d:+.6g}" for d in p.denominators)
            )
        lines.append(f"  amplitude: {p.amplitude:+.9g}")
    total = sum(p.amplitude for p in paths)
    lines.append(f"total V_eff: {total:+.9g} (Omega_eff = {-total:+.9g})")
    return "\n".join(lines)
