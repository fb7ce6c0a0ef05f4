"""Dense statevector reference simulator used as an independent check.

Qubit ``j`` is bit ``j`` of the basis-state index.  Everything here is plain
numpy on ``2**n`` amplitudes and refuses more than ``MAX_QUBITS`` qubits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliOperator

MAX_QUBITS = 14
_TOL = 1e-12


class OracleError(ValueError):
    pass


def _check_n(n: int) -> None:
    if n > MAX_QUBITS:
        raise OracleError(f"dense oracle is capped at {MAX_QUBITS} qubits (got {n})")


def _parity(idx: np.ndarray, mask: int) -> np.ndarray:
    return np.bitwise_count(idx & mask) & 1


@dataclass(frozen=True)
class DenseState:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_n(self.num_qubits)
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise OracleError("amplitude vector has the wrong length")

    @classmethod
    def basis(cls, bits) -> "DenseState":
        bits = list(bits)
        n = len(bits)
        _check_n(n)
        psi = np.zeros(1 << n, dtype=complex)
        psi[sum(int(b) << q for q, b in enumerate(bits))] = 1.0
        return cls(n, psi)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def apply_pauli_dense(state: DenseState, p: PauliOperator) -> DenseState:
    """Exact action of ``p`` including its global phase."""
    if p.num_qubits != state.num_qubits:
        raise OracleError("size mismatch")
    idx = np.arange(1 << state.num_qubits)
    # Z part acts first, then X flips bits
    amp = state.amplitudes * np.where(_parity(idx, p.z_mask), -1.0, 1.0)
    out = np.empty_like(amp)
    out[idx ^ p.x_mask] = amp
    return DenseState(state.num_qubits, out * (1j ** p.phase_exp))


def pauli_matrix(p: PauliOperator) -> np.ndarray:
    """Full ``2**n x 2**n`` matrix of ``p`` built from 2x2 factors (independent of the fast path)."""
    _check_n(p.num_qubits)
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Z = np.array([[1, 0], [0, -1]], dtype=complex)
    m = np.array([[1.0 + 0j]])
    # qubit 0 is the least significant bit, so it is the right-most kron factor
    for q in range(p.num_qubits):
        f = np.eye(2, dtype=complex)
        if (p.x_mask >> q) & 1:
            f = f @ X
        if (p.z_mask >> q) & 1:
            f = f @ Z
        m = np.kron(f, m)
    return (1j ** p.phase_exp) * m


def expectation_dense(state: DenseState, p: PauliOperator) -> float:
    return float(np.real(np.vdot(state.amplitudes, apply_pauli_dense(state, p).amplitudes)))


def project(state: DenseState, p: PauliOperator, sign: int = 1) -> tuple[DenseState, float]:
    """Apply ``(1 + sign*p)/2``, return the normalised state and the branch probability."""
    if not p.is_hermitian:
        raise OracleError("projector needs a Hermitian Pauli")
    moved = apply_pauli_dense(state, p).amplitudes
    out = 0.5 * (state.amplitudes + sign * moved)
    prob = float(np.vdot(out, out).real)
    if prob < _TOL:
        raise OracleError("zero-probability branch")
    return DenseState(state.num_qubits, out / np.sqrt(prob)), prob


def overlap(a: DenseState, b: DenseState) -> complex:
    if a.num_qubits != b.num_qubits:
        raise OracleError("size mismatch")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def apply_operator(state: DenseState, terms) -> DenseState:
    """Apply ``sum c_k P_k`` for ``terms = [(c_k, P_k), ...]`` and renormalise."""
    out = np.zeros_like(state.amplitudes)
    for c, p in terms:
        out = out + c * apply_pauli_dense(state, p).amplitudes
    nrm = np.linalg.norm(out)
    if nrm < _TOL:
        raise OracleError("operator annihilates the state")
    return DenseState(state.num_qubits, out / nrm)


def state_from_stabilizers(gens, num_qubits: int, seed: int = 0) -> DenseState:
    """Dense state fixed by a full set of signed stabilizer generators.

    A generic seeded vector is projected onto each ``+1`` eigenspace in turn.
    """
    _check_n(num_qubits)
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=1 << num_qubits) + 1j * rng.normal(size=1 << num_qubits)
    state = DenseState(num_qubits, psi / np.linalg.norm(psi))
    for g in gens:
        state, _ = project(state, g, +1)
    return state
