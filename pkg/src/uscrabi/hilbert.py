"""Composite Hilbert space of N two-level systems and one truncated boson mode.

Operators are plain complex ndarrays on the full product space.  The tensor
ordering is fixed once and for all: qubit 0 is the slowest-varying index,
the boson occupation the fastest.  A basis state |q_0, q_1, ..., n> therefore
sits at flat index ((q_0*2 + q_1)*2 + ...) * n_fock + n.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

# Single-qubit matrices in the (g, e) basis; sigma_z |e> = +|e>.
_SIGMA = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "z": np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex),
    "plus": np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex),
    "minus": np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex),
}


@dataclass(frozen=True)
class SpaceShape:
    """Dimensions of the composite space: n_qubits two-level systems, one
    boson mode truncated to Fock states 0..n_fock-1."""

    n_qubits: int
    n_fock: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if self.n_fock < 2:
            raise ValueError(f"n_fock must be >= 2, got {self.n_fock}")

    @property
    def dim(self) -> int:
        return 2**self.n_qubits * self.n_fock


@dataclass(frozen=True)
class BareLabel:
    """Label of an uncoupled basis state, e.g. BareLabel("gg", 1) for |g,g,1>.

    ``qubits`` is a string of 'g'/'e' characters, one per qubit in tensor
    order; ``n_photons`` is the Fock occupation.
    """

    qubits: str
    n_photons: int

    def __post_init__(self):
        if not self.qubits or any(c not in "ge" for c in self.qubits):
            raise ValueError(f"qubits must be a non-empty 'g'/'e' string, got {self.qubits!r}")
        if self.n_photons < 0:
            raise ValueError(f"n_photons must be >= 0, got {self.n_photons}")

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    def __str__(self) -> str:
        return f"|{','.join(self.qubits)},{self.n_photons}>"


def parse_bare_label(text: str) -> BareLabel:
    """Parse a compact label like "gg1" or "eee0" into a BareLabel."""
    s = text.strip()
    i = 0
    while i < len(s) and s[i] in "ge":
        i += 1
    if i == 0 or i == len(s) or not s[i:].isdigit():
        raise ValueError(f"cannot parse bare-state label {text!r} (expected e.g. 'gg1')")
    return BareLabel(s[:i], int(s[i:]))


def bare_index(shape: SpaceShape, label: BareLabel) -> int:
    """Flat index of a bare basis state under the fixed tensor ordering."""
    if label.n_qubits != shape.n_qubits:
        raise ValueError(
            f"label has {label.n_qubits} qubits, space has {shape.n_qubits}"
        )
    if label.n_photons >= shape.n_fock:
        raise ValueError(
            f"photon number {label.n_photons} outside truncation n_fock={shape.n_fock}"
        )
    q = 0
    for c in label.qubits:
        q = 2 * q + (1 if c == "e" else 0)
    return q * shape.n_fock + label.n_photons


def bare_state(shape: SpaceShape, label: BareLabel) -> np.ndarray:
    """Unit vector of the bare basis state described by ``label``."""
    v = np.zeros(shape.dim, dtype=complex)
    v[bare_index(shape, label)] = 1.0
    return v


def all_bare_labels(shape: SpaceShape) -> list[BareLabel]:
    """All bare labels of the space, ordered by flat index."""
    labels = []
    for q in range(2**shape.n_qubits):
        bits = format(q, f"0{shape.n_qubits}b")
        qubits = "".join("e" if b == "1" else "g" for b in bits)
        for n in range(shape.n_fock):
            labels.append(BareLabel(qubits, n))
    return labels


def _embed(shape: SpaceShape, factors: dict[int, np.ndarray], boson: np.ndarray | None) -> np.ndarray:
    """Kronecker product over all tensor factors; identity where unspecified.

    ``factors`` maps qubit index -> 2x2 matrix; ``boson`` is the n_fock x
    n_fock factor (identity if None).
    """
    mats = [factors.get(i, np.eye(2, dtype=complex)) for i in range(shape.n_qubits)]
    mats.append(boson if boson is not None else np.eye(shape.n_fock, dtype=complex))
    return reduce(np.kron, mats)


def annihilation(shape: SpaceShape) -> np.ndarray:
    """Boson annihilation operator a on the full space, <n-1|a|n> = sqrt(n)."""
    a = np.diag(np.sqrt(np.arange(1, shape.n_fock, dtype=float)), k=1).astype(complex)
    return _embed(shape, {}, a)


def number_operator(shape: SpaceShape) -> np.ndarray:
    """Boson number operator a^dag a on the full space."""
    n = np.diag(np.arange(shape.n_fock, dtype=float)).astype(complex)
    return _embed(shape, {}, n)


def quadrature(shape: SpaceShape) -> np.ndarray:
    """Field quadrature a + a^dag on the full space."""
    a = annihilation(shape)
    return a + a.conj().T


def pauli(shape: SpaceShape, qubit_index: int, kind: str) -> np.ndarray:
    """Pauli operator of the given kind on one qubit, identity elsewhere.

    Parameters
    ----------
    qubit_index : int
        Which qubit, 0-based in tensor order.
    kind : {'x', 'z', 'plus', 'minus'}
        'plus' raises g -> e, 'minus' lowers e -> g.
    """
    if kind not in _SIGMA:
        raise ValueError(f"unknown Pauli kind {kind!r}")
    if not 0 <= qubit_index < shape.n_qubits:
        raise ValueError(
            f"qubit_index {qubit_index} out of range for {shape.n_qubits} qubits"
        )
    return _embed(shape, {qubit_index: _SIGMA[kind]}, None)


def parity_operator(shape: SpaceShape) -> np.ndarray:
    """Excitation parity exp(i*pi*(a^dag a + sum_i sigma_+^i sigma_-^i)).

    Diagonal in the bare basis with entries (-1)**(photons + excited qubits).
    """
    diag = np.empty(shape.dim)
    for idx, label in enumerate(all_bare_labels(shape)):
        n_exc = label.qubits.count("e") + label.n_photons
        diag[idx] = -1.0 if n_exc % 2 else 1.0
    return np.diag(diag).astype(complex)


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    """True if max |M - M^dag| is below ``tol``."""
    return bool(np.max(np.abs(m - m.conj().T)) < tol)


def normalized(v: np.ndarray) -> np.ndarray:
    """Return v / ||v||, rejecting zero vectors."""
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / nrm
