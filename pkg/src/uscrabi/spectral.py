"""Exact diagonalization: spectra, level tracking, avoided crossings, and the
dressed positive/negative-frequency operators.

Eigenvectors carry a deterministic gauge (largest-magnitude component made
real and positive) so repeated diagonalization of the same matrix is
bit-identical.  Numerically degenerate clusters are ordered by the bare state
each eigenvector most resembles, which keeps level labels stable at exact
symmetry points.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace as dc_replace

import numpy as np
from scipy.optimize import linear_sum_assignment

from .hilbert import BareLabel, SpaceShape, bare_index, bare_state, is_hermitian
from .model import SystemConfig, static_hamiltonian

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class TrackingError(RuntimeError):
    """Raised when eigenstates cannot be followed across a parameter sweep."""


class BracketError(RuntimeError):
    """Raised when a gap minimum cannot be located inside the given bracket."""


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (ascending) and gauge-fixed eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    shape: SpaceShape

    @property
    def dim(self) -> int:
        return self.shape.dim

    def transition_frequencies(self) -> np.ndarray:
        """omega_i0 = omega_i - omega_0 for every level."""
        return self.eigenvalues - self.eigenvalues[0]

    def state(self, index: int) -> np.ndarray:
        """Eigenvector of level ``index`` in the bare basis."""
        return self.eigenvectors[:, index]


@dataclass(frozen=True)
class AnticrossingResult:
    """Minimum gap between two hybridizing levels along an omega_c scan."""

    omega_c_star: float
    gap: float
    level_pair: tuple[int, int]
    # overlaps[i, j] = |<bare_j | level_i>|^2 with i over the pair (lower,
    # upper) and j over (state_a, state_b)
    hybridized_overlaps: np.ndarray


def _fix_gauge(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column's phase so its largest-|.| entry is real positive."""
    lead = np.argmax(np.abs(vectors), axis=0)
    cols = np.arange(vectors.shape[1])
    pivot = vectors[lead, cols]
    phase = pivot / np.abs(pivot)
    return vectors * phase.conj()[np.newaxis, :]


def _order_degenerate(w: np.ndarray, v: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Within clusters of eigenvalues closer than ``tol``, order eigenvectors
    by the index of their dominant bare component (ties by larger overlap)."""
    order = np.arange(len(w))
    start = 0
    for stop in range(1, len(w) + 1):
        if stop == len(w) or w[stop] - w[stop - 1] > tol:
            if stop - start > 1:
                block = order[start:stop]
                dominant = np.argmax(np.abs(v[:, block]), axis=0)
                weight = np.abs(v[dominant, block]) ** 2
                block_order = sorted(
                    range(len(block)), key=lambda k: (dominant[k], -weight[k])
                )
                order[start:stop] = block[block_order]
            start = stop
    return w[order], v[:, order]


def diagonalize(h: np.ndarray, shape: SpaceShape, degeneracy_tol: float = 1e-10) -> Spectrum:
    """Dense Hermitian eigendecomposition with deterministic labeling.

    Rejects non-Hermitian input.  Ascending eigenvalue order; within
    numerically degenerate clusters (spread below ``degeneracy_tol``) levels
    are ordered by dominant bare component so the labeling is reproducible.
    """
    if h.shape != (shape.dim, shape.dim):
        raise ValueError(f"matrix shape {h.shape} does not match space dim {shape.dim}")
    scale = max(1.0, float(np.max(np.abs(h))))
    if not is_hermitian(h, tol=1e-12 * scale):
        raise ValueError("matrix is not Hermitian within 1e-12 (relative)")
    w, v = np.linalg.eigh(h)
    w, v = _order_degenerate(w, v, degeneracy_tol)
    return Spectrum(eigenvalues=w, eigenvectors=_fix_gauge(v), shape=shape)


def identify_state(spectrum: Spectrum, target: BareLabel) -> tuple[int, float]:
    """Level index with the largest overlap on a bare state.

    Returns ``(index, overlap_sq)`` where overlap_sq = |<bare|level>|^2.
    """
    row = spectrum.eigenvectors[bare_index(spectrum.shape, target), :]
    weights = np.abs(row) ** 2
    idx = int(np.argmax(weights))
    return idx, float(weights[idx])


def dressed_operators(spectrum: Spectrum, bare_op: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Positive/negative-frequency parts of an operator in the dressed basis.

    O_plus = sum_{j, k>j} <j|O|k> |j><k| couples every eigenstate only to
    lower ones (so O_plus annihilates the ground state); O_minus is its
    adjoint.  Both are returned in the bare basis.  For vanishing coupling
    these reduce to the bare annihilation/creation parts of ``bare_op``.
    """
    u = spectrum.eigenvectors
    in_eigenbasis = u.conj().T @ bare_op @ u
    plus_eig = np.triu(in_eigenbasis, k=1)
    o_plus = u @ plus_eig @ u.conj().T
    return o_plus, o_plus.conj().T


@dataclass(frozen=True)
class SpectrumSweep:
    """Transition frequencies of tracked levels along an omega_c scan.

    ``transitions[p, l]`` is omega_i0 of tracked level l at sweep point p;
    tracked labels are the level indices at the first sweep point.  States are
    followed by eigenvector overlap, not by energy order, so levels keep their
    identity through crossings.
    """

    omega_c_values: np.ndarray
    transitions: np.ndarray
    tracked_levels: np.ndarray
    min_overlap: float


def sweep_spectrum(
    config: SystemConfig,
    omega_c_values: np.ndarray,
    n_levels: int,
    overlap_threshold: float = 0.5,
    n_workers: int = 1,
) -> SpectrumSweep:
    """Diagonalize along an ascending omega_c grid and track the lowest
    ``n_levels`` states by eigenvector continuity.

    Raises TrackingError when the overlap between matched eigenvectors at
    adjacent grid points falls below ``overlap_threshold`` (sweep step too
    coarse), rather than silently mislabeling levels.
    """
    omega_c_values = np.asarray(omega_c_values, dtype=float)
    if omega_c_values.ndim != 1 or len(omega_c_values) < 1:
        raise ValueError("omega_c_values must be a non-empty 1-D array")
    if np.any(np.diff(omega_c_values) <= 0):
        raise ValueError("omega_c_values must be strictly ascending")
    if not 1 <= n_levels <= config.shape.dim:
        raise ValueError(f"n_levels must be in [1, {config.shape.dim}]")

    def solve(wc: float) -> Spectrum:
        cfg = dc_replace(config, omega_c=wc)
        return diagonalize(static_hamiltonian(cfg), cfg.shape)

    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            spectra = list(pool.map(solve, omega_c_values))
    else:
        spectra = [solve(wc) for wc in omega_c_values]

    n_pts = len(omega_c_values)
    transitions = np.empty((n_pts, n_levels))
    tracked = np.arange(n_levels)
    prev_vectors = spectra[0].eigenvectors[:, :n_levels]
    transitions[0] = spectra[0].transition_frequencies()[:n_levels]
    min_overlap = 1.0
    for p in range(1, n_pts):
        spec = spectra[p]
        overlap = np.abs(prev_vectors.conj().T @ spec.eigenvectors) ** 2
        rows, cols = linear_sum_assignment(-overlap)
        matched = overlap[rows, cols]
        worst = float(np.min(matched))
        min_overlap = min(min_overlap, worst)
        if worst < overlap_threshold:
            raise TrackingError(
                f"level tracking lost between omega_c={omega_c_values[p - 1]:.6g} and "
                f"{omega_c_values[p]:.6g} (best overlap {worst:.3f} < {overlap_threshold}); "
                "refine the sweep grid"
            )
        assigned = cols[np.argsort(rows)]
        transitions[p] = spec.transition_frequencies()[assigned]
        prev_vectors = spec.eigenvectors[:, assigned]
    return SpectrumSweep(
        omega_c_values=omega_c_values,
        transitions=transitions,
        tracked_levels=tracked,
        min_overlap=min_overlap,
    )


def _gap_at(config: SystemConfig, wc: float, va: np.ndarray, vb: np.ndarray, rwa: bool = False):
    """Gap between the two levels carrying the most weight on two bare states."""
    cfg = dc_replace(config, omega_c=wc)
    spectrum = diagonalize(static_hamiltonian(cfg, rwa=rwa), cfg.shape)
    wa = np.abs(va.conj() @ spectrum.eigenvectors) ** 2
    wb = np.abs(vb.conj() @ spectrum.eigenvectors) ** 2
    combined = wa + wb
    top = np.argsort(combined)[-2:]
    j, k = int(min(top)), int(max(top))
    if combined[j] + combined[k] < 0.25:
        raise TrackingError(
            f"target bare states not identifiable at omega_c={wc:.6g} "
            f"(combined overlap {combined[j] + combined[k]:.3f} < 0.25)"
        )
    # levels inside a numerically degenerate cluster are ordered by bare
    # character, which can locally invert the <1e-10 eigenvalue order
    gap = float(abs(spectrum.eigenvalues[k] - spectrum.eigenvalues[j]))
    overlaps = np.array([[wa[j], wb[j]], [wa[k], wb[k]]])
    return gap, (j, k), overlaps


def find_anticrossing(
    config: SystemConfig,
    state_a: BareLabel,
    state_b: BareLabel,
    bracket: tuple[float, float],
    rel_tol: float = 1e-10,
    rwa: bool = False,
) -> AnticrossingResult:
    """Locate the minimum splitting between the levels dominated by two bare
    states, scanning the resonator frequency inside ``bracket``.

    Golden-section search on the (unimodal) gap; the two levels are
    re-identified at every trial point by their overlap with the target bare
    states, so the search is insensitive to index swaps.  With ``rwa=True``
    the counter-rotating coupling terms are dropped first (control case: the
    joint-excitation gap collapses to a true crossing).
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError(f"invalid bracket {bracket}")
    va = bare_state(config.shape, state_a)
    vb = bare_state(config.shape, state_b)

    def g(wc: float) -> float:
        return _gap_at(config, wc, va, vb, rwa=rwa)[0]

    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    g1, g2 = g(x1), g(x2)
    width0 = hi - lo
    while (hi - lo) > rel_tol * max(abs(lo), abs(hi)):
        if g1 <= g2:
            hi, x2, g2 = x2, x1, g1
            x1 = hi - _GOLDEN * (hi - lo)
            g1 = g(x1)
        else:
            lo, x1, g1 = x1, x2, g2
            x2 = lo + _GOLDEN * (hi - lo)
            g2 = g(x2)
    wc_star = 0.5 * (lo + hi)
    if min(abs(wc_star - bracket[0]), abs(bracket[1] - wc_star)) < 1e-8 * width0:
        raise BracketError(
            f"gap keeps decreasing toward the bracket edge at omega_c={wc_star:.9g}; "
            "no interior minimum"
        )
    gap, pair, overlaps = _gap_at(config, wc_star, va, vb, rwa=rwa)
    return AnticrossingResult(
        omega_c_star=wc_star, gap=gap, level_pair=pair, hybridized_overlaps=overlaps
    )
