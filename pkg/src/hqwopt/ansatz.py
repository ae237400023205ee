"""Circuit builders: the alternating-layer baseline, the coin-controlled
walk ansatz, the explicit path-sum oracle, and the reduction identity
between the two."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .simulator import (
    StateVector,
    apply_coin_u3,
    apply_controlled_diagonal,
    apply_controlled_mixer,
    apply_diagonal,
    apply_mixer,
    init_plus_state,
    u3_matrix,
)

# U3(pi, 0, pi) equals the Pauli-X gate exactly under our matrix convention
X_COIN = (np.pi, 0.0, np.pi)


@dataclass(frozen=True)
class QaoaParams:
    """Per-layer (gamma, beta) pairs."""

    layers: tuple  # of (gamma, beta)

    def __post_init__(self):
        if len(self.layers) < 1:
            raise ParameterError("need at least one layer")
        object.__setattr__(
            self, "layers", tuple((float(g), float(b)) for g, b in self.layers)
        )

    @property
    def depth(self) -> int:
        return len(self.layers)

    def flat(self) -> np.ndarray:
        return np.array([v for layer in self.layers for v in layer])

    @classmethod
    def from_flat(cls, values) -> "QaoaParams":
        values = np.asarray(values, dtype=float)
        if len(values) % 2:
            raise ParameterError("flat parameter count must be even")
        return cls(tuple(zip(values[0::2], values[1::2])))


@dataclass(frozen=True)
class HqwParams:
    """Per-step (gamma, beta, theta, phi, delta) tuples; the last three are
    the coin rotation angles."""

    steps: tuple  # of (gamma, beta, theta, phi, delta)

    def __post_init__(self):
        if len(self.steps) < 1:
            raise ParameterError("need at least one step")
        steps = tuple(tuple(float(v) for v in s) for s in self.steps)
        if any(len(s) != 5 for s in steps):
            raise ParameterError("each step takes 5 parameters")
        object.__setattr__(self, "steps", steps)

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    def flat(self) -> np.ndarray:
        return np.array([v for step in self.steps for v in step])

    @classmethod
    def from_flat(cls, values) -> "HqwParams":
        values = np.asarray(values, dtype=float)
        if len(values) % 5:
            raise ParameterError("flat parameter count must be a multiple of 5")
        return cls(tuple(tuple(values[i : i + 5]) for i in range(0, len(values), 5)))


@dataclass(frozen=True)
class PathTerm:
    """One coin path: bitstring v, chain amplitude, and the operator word
    applied along that path."""

    path: tuple
    amplitude: complex
    operator_word: str


def qaoa_state(params: QaoaParams, diag, n: int) -> StateVector:
    """Alternating layers on |+>^n: diagonal phase first, then mixer."""
    s = init_plus_state(n, with_coin=False)
    for gamma, beta in params.layers:
        s = apply_diagonal(s, diag, gamma)
        s = apply_mixer(s, beta)
    return s


def hqw_state(params: HqwParams, diag, n: int) -> StateVector:
    """Walk ansatz from |0>|+>^n: each step applies the coin rotation, the
    coin-1 diagonal evolution, then the coin-0 mixer evolution."""
    s = init_plus_state(n, with_coin=True)
    for gamma, beta, theta, phi, delta in params.steps:
        s = apply_coin_u3(s, theta, phi, delta)
        s = apply_controlled_diagonal(s, diag, gamma, control_value=1)
        s = apply_controlled_mixer(s, beta, control_value=0)
    return s


def hqw_path_expansion(params: HqwParams, diag, n: int):
    """Explicit sum over all 2^p coin paths.

    Returns the summed state and the per-path terms; the summed state must
    agree with hqw_state, which is the cross-implementation oracle test.
    """
    p = params.n_steps
    if p > 12:
        raise ParameterError("path enumeration capped at 12 steps")
    coins = [u3_matrix(t, f, d) for _, _, t, f, d in params.steps]
    base = init_plus_state(n, with_coin=False)
    total = init_plus_state(n, with_coin=True)
    total.amplitudes[:] = 0
    terms = []
    for code in range(1 << p):
        v = tuple((code >> k) & 1 for k in range(p))
        alpha = 1.0 + 0j
        prev = 0
        for k in range(p):
            alpha *= coins[k][v[k], prev]
            prev = v[k]
        word_parts = []
        s = base.copy()
        for k, (gamma, beta, _, _, _) in enumerate(params.steps):
            if v[k]:
                s = apply_diagonal(s, diag, gamma)
                word_parts.append(f"Uc(g{k + 1})")
            else:
                s = apply_mixer(s, beta)
                word_parts.append(f"Ub(b{k + 1})")
        terms.append(PathTerm(v, alpha, "*".join(reversed(word_parts))))
        total.coin_block(v[-1])[:] += alpha * s.amplitudes
    return total, terms


def qaoa_reduction_check(qparams: QaoaParams, diag, n: int) -> float:
    """Residual of the identity: a 2p-step walk with every coin fixed to X
    reproduces the p-layer alternating circuit in its coin-0 block.

    Odd steps carry the diagonal angle, even steps the mixer angle; the
    branch angle unused on each step is irrelevant and set to 0.
    """
    steps = []
    for gamma, beta in qparams.layers:
        steps.append((gamma, 0.0) + X_COIN)
        steps.append((0.0, beta) + X_COIN)
    walk = hqw_state(HqwParams(tuple(steps)), diag, n)
    target = qaoa_state(qparams, diag, n)
    return float(np.linalg.norm(walk.coin_block(0) - target.amplitudes))


def variant_params_from_hqw(hparams: HqwParams, parity: str) -> QaoaParams:
    """Extract alternating-circuit parameters from an even-length walk.

    parity="odd":  diagonal angles from odd steps (1st, 3rd, ...), mixer
    angles from even steps.  parity="even": the opposite interleaving.
    """
    if hparams.n_steps % 2:
        raise ParameterError("step count must be even")
    if parity not in ("odd", "even"):
        raise ParameterError("parity must be 'odd' or 'even'")
    odd = hparams.steps[0::2]
    even = hparams.steps[1::2]
    if parity == "odd":
        layers = tuple((o[0], e[1]) for o, e in zip(odd, even))
    else:
        layers = tuple((e[0], o[1]) for o, e in zip(odd, even))
    return QaoaParams(layers)
