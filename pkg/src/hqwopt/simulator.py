"""Dense statevector engine for coin-conditioned diagonal/mixer evolutions.

Basis convention: when a coin is present the coin bit is the most
significant index bit, so the amplitude array splits into the coin-0 block
followed by the coin-1 block; position bitstrings are read with vertex 0
as the least significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DimensionMismatchError, ParameterError, StructureError

POSITION_QUBIT_CAP = 14


def _energies_of(diag):
    return diag.energies if hasattr(diag, "energies") else np.asarray(diag, dtype=float)


@dataclass
class StateVector:
    amplitudes: np.ndarray
    n_position: int
    has_coin: bool

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy(), self.n_position, self.has_coin)

    @property
    def position_dim(self) -> int:
        return 1 << self.n_position

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def coin_block(self, value: int) -> np.ndarray:
        if not self.has_coin:
            raise StructureError("state has no coin qubit")
        d = self.position_dim
        return self.amplitudes[value * d : (value + 1) * d]

    def position_probabilities(self) -> np.ndarray:
        """Probability per position basis state, coin traced out."""
        p = np.abs(self.amplitudes) ** 2
        if self.has_coin:
            return p.reshape(2, -1).sum(axis=0)
        return p

    def dump(self) -> str:
        """Debug dump: index, real, imaginary per line."""
        return "\n".join(
            f"{i} {a.real:.17g} {a.imag:.17g}" for i, a in enumerate(self.amplitudes)
        )


def init_plus_state(n: int, with_coin: bool = False) -> StateVector:
    """Uniform superposition over positions; with a coin, the coin starts
    in |0> so only the first half of the array is populated."""
    if n < 1:
        raise ParameterError("need at least one position qubit")
    if n > POSITION_QUBIT_CAP:
        raise CapacityError(f"position space capped at {POSITION_QUBIT_CAP} qubits")
    d = 1 << n
    amp = np.full(d, d ** -0.5, dtype=complex)
    if with_coin:
        amp = np.concatenate([amp, np.zeros(d, dtype=complex)])
    return StateVector(amp, n, with_coin)


def u3_matrix(theta: float, phi: float, delta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * delta) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + delta)) * c],
        ]
    )


def _apply_coin_matrix_inplace(amp: np.ndarray, mat: np.ndarray):
    half = len(amp) // 2
    a0 = amp[:half].copy()
    a1 = amp[half:].copy()
    amp[:half] = mat[0, 0] * a0 + mat[0, 1] * a1
    amp[half:] = mat[1, 0] * a0 + mat[1, 1] * a1


def apply_coin_u3(s: StateVector, theta: float, phi: float, delta: float) -> StateVector:
    """Apply the 2x2 coin rotation tensored with identity on positions."""
    if not s.has_coin:
        raise StructureError("coin operation needs a coin qubit")
    out = s.copy()
    _apply_coin_matrix_inplace(out.amplitudes, u3_matrix(theta, phi, delta))
    return out


def _diag_phases(energies: np.ndarray, gamma: float) -> np.ndarray:
    return np.exp(-1j * gamma * energies)


def apply_controlled_diagonal(s: StateVector, diag, gamma: float, control_value: int = 1) -> StateVector:
    """Phase the coin = control_value block by exp(-i*gamma*N(x))."""
    energies = _energies_of(diag)
    if not s.has_coin:
        raise StructureError("controlled operation needs a coin qubit")
    if len(energies) != s.position_dim:
        raise DimensionMismatchError("diagonal length does not match position dimension")
    out = s.copy()
    out.coin_block(control_value)[:] *= _diag_phases(energies, gamma)
    return out


def _apply_mixer_block_inplace(block: np.ndarray, n: int, beta: float):
    # exp(-i*beta*sum X_i) factorizes into one rotation per position qubit
    c, s = np.cos(beta), -1j * np.sin(beta)
    view = block.reshape([2] * n)
    for axis in range(n):
        lo = np.moveaxis(view, axis, 0)
        a0 = lo[0].copy()
        a1 = lo[1].copy()
        lo[0] = c * a0 + s * a1
        lo[1] = s * a0 + c * a1


def apply_controlled_mixer(s: StateVector, beta: float, control_value: int = 0) -> StateVector:
    """Apply exp(-i*beta*X) to each position qubit inside one coin block."""
    if not s.has_coin:
        raise StructureError("controlled operation needs a coin qubit")
    out = s.copy()
    _apply_mixer_block_inplace(out.coin_block(control_value), s.n_position, beta)
    return out


def apply_diagonal(s: StateVector, diag, gamma: float) -> StateVector:
    """Uncontrolled diagonal phase layer (acts on both coin blocks if any)."""
    energies = _energies_of(diag)
    if len(energies) != s.position_dim:
        raise DimensionMismatchError("diagonal length does not match position dimension")
    out = s.copy()
    phases = _diag_phases(energies, gamma)
    if s.has_coin:
        out.amplitudes *= np.concatenate([phases, phases])
    else:
        out.amplitudes *= phases
    return out


def apply_mixer(s: StateVector, beta: float) -> StateVector:
    """Uncontrolled transverse mixer layer."""
    out = s.copy()
    if s.has_coin:
        _apply_mixer_block_inplace(out.coin_block(0), s.n_position, beta)
        _apply_mixer_block_inplace(out.coin_block(1), s.n_position, beta)
    else:
        _apply_mixer_block_inplace(out.amplitudes, s.n_position, beta)
    return out


def expectation_diagonal(s: StateVector, diag) -> float:
    """<N> over the position marginal (coin traced out when present)."""
    energies = _energies_of(diag)
    if len(energies) != s.position_dim:
        raise DimensionMismatchError("diagonal length does not match position dimension")
    return float(np.dot(energies, s.position_probabilities()))


def eigenspace_projections(s: StateVector, diag, k: int):
    """Total probability in each of the k lowest distinct diagonal
    eigenspaces of the analysis operator (pass -N for a maximization
    problem).  Returns [(energy, probability), ...] in ascending energy."""
    energies = _energies_of(diag)
    if len(energies) != s.position_dim:
        raise DimensionMismatchError("diagonal length does not match position dimension")
    distinct = np.unique(energies)
    if k > len(distinct):
        raise ParameterError(f"only {len(distinct)} distinct eigenvalues available")
    probs = s.position_probabilities()
    out = []
    for e in distinct[:k]:
        out.append((float(e), float(probs[energies == e].sum())))
    return out


def general_hqw_step(s: StateVector, coin_matrix: np.ndarray, subgraph_hams, t: float) -> StateVector:
    """One step of the d-coin walk: coin unitary, then exp(-i*Sj*t) on the
    position block attached to each coin label j."""
    coin_matrix = np.asarray(coin_matrix, dtype=complex)
    d = coin_matrix.shape[0]
    if coin_matrix.shape != (d, d) or len(subgraph_hams) != d:
        raise DimensionMismatchError("coin dimension must match the Hamiltonian list")
    if np.linalg.norm(coin_matrix.conj().T @ coin_matrix - np.eye(d)) > 1e-10:
        raise ParameterError("coin matrix is not unitary")
    pos_dim = len(np.asarray(subgraph_hams[0]))
    if d * pos_dim > 4096:
        raise CapacityError("general walk step capped at 4096 amplitudes")
    if d * pos_dim != len(s.amplitudes):
        raise DimensionMismatchError("subspace sizes do not match the state")
    amp = np.asarray(s.amplitudes, dtype=complex).reshape(d, pos_dim)
    amp = coin_matrix @ amp
    for j, h in enumerate(subgraph_hams):
        h = np.asarray(h, dtype=complex)
        vals, vecs = np.linalg.eigh(h)
        amp[j] = vecs @ (np.exp(-1j * vals * t) * (vecs.conj().T @ amp[j]))
    out = s.copy()
    out.amplitudes = amp.reshape(-1)
    return out
