"""Problem/mixer operators on Pauli strings, their diagonal forms, and the
symmetrized-product diagnostics (negativity, curvature, truncation residuals).

Pauli strings are words over {I, X, Y, Z}; character k acts on qubit k and
qubit 0 is the least significant bit of the computational basis index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .errors import CapacityError, DegeneratePlaneError, DimensionMismatchError, DomainError, ParameterError
from .graphs import Graph

_PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# single-qubit products: (a, b) -> (phase power of i, letter) with a·b = i^m · letter
_MUL = {}
for _a in "IXYZ":
    for _b in "IXYZ":
        _m = _PAULI_MATS[_a] @ _PAULI_MATS[_b]
        for _c in "IXYZ":
            for _p in range(4):
                if np.allclose(_m, (1j ** _p) * _PAULI_MATS[_c]):
                    _MUL[(_a, _b)] = (_p, _c)
del _a, _b, _c, _m, _p

DENSE_QUBIT_CAP = 12
DENSE_EIG_CAP = 10  # above this, extremal eigenvalues go through an iterative solver


def pauli_string_product(p: str, q: str):
    """Product of two equal-length Pauli strings: returns (m, r) with
    P·Q = i^m · R."""
    m = 0
    chars = []
    for a, b in zip(p, q):
        mm, c = _MUL[(a, b)]
        m += mm
        chars.append(c)
    return m % 4, "".join(chars)


def pauli_strings_commute(p: str, q: str) -> bool:
    anti = sum(
        1
        for a, b in zip(p, q)
        if a != "I" and b != "I" and a != b
    )
    return anti % 2 == 0


@dataclass(frozen=True)
class DiagonalHamiltonian:
    """Diagonal operator: entry x is the objective value of bitstring x."""

    energies: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        object.__setattr__(self, "energies", e)
        n = len(e).bit_length() - 1
        if len(e) != 1 << n:
            raise ParameterError("diagonal length must be a power of two")

    @property
    def n_qubits(self) -> int:
        return len(self.energies).bit_length() - 1

    @property
    def ground_energy(self) -> float:
        return float(self.energies.min())


class PauliOperator:
    """Real linear combination of n-qubit Pauli strings (a Hermitian operator).

    Zero coefficients are pruned; the term map is kept in sorted string order
    so serialization is deterministic.
    """

    def __init__(self, n_qubits: int, terms=None):
        self.n_qubits = int(n_qubits)
        clean = {}
        for s, c in (terms or {}).items():
            if len(s) != self.n_qubits or any(ch not in "IXYZ" for ch in s):
                raise ParameterError(f"bad Pauli string {s!r} for {n_qubits} qubits")
            c = float(c)
            if c != 0.0:
                clean[s] = clean.get(s, 0.0) + c
        self.terms = {s: clean[s] for s in sorted(clean) if clean[s] != 0.0}

    def __eq__(self, other):
        return isinstance(other, PauliOperator) and self.terms == other.terms and self.n_qubits == other.n_qubits

    def is_zero(self) -> bool:
        return not self.terms

    def frobenius_norm(self) -> float:
        # Pauli strings are orthogonal with squared Frobenius norm 2^n
        return float(np.sqrt((1 << self.n_qubits) * sum(c * c for c in self.terms.values())))

    def scaled(self, factor: float) -> "PauliOperator":
        return PauliOperator(self.n_qubits, {s: factor * c for s, c in self.terms.items()})

    def to_dense(self) -> np.ndarray:
        if self.n_qubits > DENSE_QUBIT_CAP:
            raise CapacityError(f"dense form capped at {DENSE_QUBIT_CAP} qubits")
        dim = 1 << self.n_qubits
        out = np.zeros((dim, dim), dtype=complex)
        for s, c in self.terms.items():
            m = np.array([[1.0 + 0j]])
            for k in reversed(range(self.n_qubits)):
                m = np.kron(m, _PAULI_MATS[s[k]])
            out += c * m
        return out

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Matrix-vector product without densifying."""
        vec = np.asarray(vec, dtype=complex)
        idx = np.arange(len(vec), dtype=np.int64)
        out = np.zeros_like(vec)
        for s, c in self.terms.items():
            x_mask = z_mask = 0
            y_count = 0
            for k, ch in enumerate(s):
                if ch in "XY":
                    x_mask |= 1 << k
                if ch in "ZY":
                    z_mask |= 1 << k
                if ch == "Y":
                    y_count += 1
            parity = np.zeros(len(vec), dtype=np.int64)
            b = z_mask
            while b:
                k = (b & -b).bit_length() - 1
                parity ^= (idx >> k) & 1
                b &= b - 1
            phase = (1j ** y_count) * np.where(parity, -1.0, 1.0)
            out[idx ^ x_mask] += c * phase * vec
        return out

    def serialize(self) -> str:
        """One line per term: "PAULI_STRING coefficient" with 17 significant digits."""
        return "\n".join(f"{s} {c:.17g}" for s, c in self.terms.items())

    @classmethod
    def deserialize(cls, text: str, n_qubits=None) -> "PauliOperator":
        terms = {}
        for line in text.strip().splitlines():
            s, c = line.split()
            terms[s] = float(c)
            if n_qubits is None:
                n_qubits = len(s)
        return cls(n_qubits, terms)

    def __repr__(self):
        return f"PauliOperator({self.n_qubits}, {self.terms!r})"


def maxcut_hamiltonian(g: Graph):
    """Cut-counting operator: diagonal entry x is the weight cut by
    bipartition x; Pauli form sum over edges of w·(I - Z_u Z_v)/2."""
    n = g.n_vertices
    if n > 24:
        raise CapacityError("diagonal form capped at 24 vertices")
    x = np.arange(1 << n, dtype=np.int64)
    energies = np.zeros(1 << n)
    terms = {}
    ident = "I" * n
    for u, v, w in g.edges:
        energies += w * (((x >> u) ^ (x >> v)) & 1)
        terms[ident] = terms.get(ident, 0.0) + w / 2
        s = "".join("Z" if k in (u, v) else "I" for k in range(n))
        terms[s] = terms.get(s, 0.0) - w / 2
    return DiagonalHamiltonian(energies), PauliOperator(n, terms)


def mis_hamiltonian(g: Graph, penalty: float = 1.0) -> DiagonalHamiltonian:
    """Independent-set objective: -|x| plus penalty per violated edge."""
    if penalty <= 0:
        raise ParameterError("penalty must be positive")
    n = g.n_vertices
    if n > 24:
        raise CapacityError("diagonal form capped at 24 vertices")
    x = np.arange(1 << n, dtype=np.int64)
    energies = np.zeros(1 << n)
    for k in range(n):
        energies -= (x >> k) & 1
    for u, v, w in g.edges:
        energies += penalty * (((x >> u) & (x >> v)) & 1)
    return DiagonalHamiltonian(energies)


def mixer_hamiltonian(n: int) -> PauliOperator:
    """Transverse-field mixer: one X per qubit, coefficient 1."""
    if n < 1:
        raise ParameterError("need at least one qubit")
    terms = {}
    for k in range(n):
        terms["".join("X" if j == k else "I" for j in range(n))] = 1.0
    return PauliOperator(n, terms)


def _check_same_qubits(a: PauliOperator, b: PauliOperator):
    if a.n_qubits != b.n_qubits:
        raise DimensionMismatchError("operators act on different qubit counts")


def jordan_product(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Symmetrized product (ab + ba)/2, expressed back in the Pauli basis.

    Only commuting string pairs contribute; their product carries a real
    phase, so the result is Hermitian with real coefficients by construction.
    """
    _check_same_qubits(a, b)
    terms = {}
    for sa, ca in a.terms.items():
        for sb, cb in b.terms.items():
            if not pauli_strings_commute(sa, sb):
                continue
            m, r = pauli_string_product(sa, sb)
            if m % 2 != 0:
                raise AssertionError("imaginary phase on a commuting pair: phase bookkeeping bug")
            sign = 1.0 if m == 0 else -1.0
            terms[r] = terms.get(r, 0.0) + sign * ca * cb
    return PauliOperator(a.n_qubits, terms)


def _extreme_eigenvalue(op: PauliOperator, which: str) -> float:
    n = op.n_qubits
    if n <= DENSE_EIG_CAP:
        vals = np.linalg.eigvalsh(op.to_dense())
        return float(vals.min() if which == "SA" else vals.max())
    if n > DENSE_QUBIT_CAP:
        raise CapacityError(f"negativity computation capped at {DENSE_QUBIT_CAP} qubits")
    dim = 1 << n
    lin = scipy.sparse.linalg.LinearOperator(
        (dim, dim), matvec=op.apply, dtype=complex
    )
    vals = scipy.sparse.linalg.eigsh(lin, k=1, which=which, return_eigenvectors=False)
    return float(vals[0])


def _min_eigenvalue(op: PauliOperator) -> float:
    return _extreme_eigenvalue(op, "SA")


def _operator_norm(op: PauliOperator) -> float:
    return max(
        abs(_extreme_eigenvalue(op, "SA")), abs(_extreme_eigenvalue(op, "LA"))
    )


def jordan_negativity(hc: PauliOperator, hb: PauliOperator, norm: str = "frobenius") -> float:
    """Minimum eigenvalue of the symmetrized product of the two operators
    after normalizing each input, by Frobenius norm (default) or by
    operator (spectral) norm."""
    if hc.is_zero() or hb.is_zero():
        raise ParameterError("normalization undefined for a zero operator")
    if norm == "frobenius":
        nc, nb = hc.frobenius_norm(), hb.frobenius_norm()
    elif norm == "spectral":
        nc, nb = _operator_norm(hc), _operator_norm(hb)
    else:
        raise ParameterError("norm must be frobenius or spectral")
    prod = jordan_product(hc.scaled(1.0 / nc), hb.scaled(1.0 / nb))
    if prod.is_zero():
        return 0.0
    return _min_eigenvalue(prod)


def sectional_curvature(hc: PauliOperator, hb: PauliOperator) -> float:
    """Curvature of the plane spanned by the two skew-Hermitian generators,
    from Hilbert-Schmidt inner products of their commutator and
    symmetrized product."""
    _check_same_qubits(hc, hb)
    a = hc.to_dense()
    b = hb.to_dense()
    ia, ib = 1j * a, 1j * b
    na2 = float(np.real(np.trace(ia.conj().T @ ia)))
    nb2 = float(np.real(np.trace(ib.conj().T @ ib)))
    cross = float(np.real(np.trace(ia.conj().T @ ib)))
    denom = na2 * nb2 - cross * cross
    if denom < 1e-12 * max(na2 * nb2, 1.0):
        raise DegeneratePlaneError("generators are near-parallel")
    comm = ia @ ib - ib @ ia
    jord = 1j * (a @ b + b @ a)
    num = float(np.real(np.trace(comm.conj().T @ jord)))
    return -num / denom


def taylor_bch_residuals(hc: PauliOperator, hb: PauliOperator, gamma: float, beta: float):
    """Operator-norm residuals of the second-order Taylor truncation of
    exp(-i*beta*Hb)exp(-i*gamma*Hc) and of the second-order
    Baker-Campbell-Hausdorff truncation of its logarithm."""
    _check_same_qubits(hc, hb)
    a = hc.to_dense()
    b = hb.to_dense()
    u = scipy.linalg.expm(-1j * beta * b) @ scipy.linalg.expm(-1j * gamma * a)
    xb = -1j * beta * b
    xc = -1j * gamma * a
    eye = np.eye(len(a))
    taylor2 = eye + xb + xc + 0.5 * (xb @ xb) + 0.5 * (xc @ xc) + xb @ xc
    taylor_residual = float(np.linalg.norm(u - taylor2, 2))

    phases = np.angle(np.linalg.eigvals(u))
    if np.any(np.abs(np.abs(phases) - np.pi) < 1e-9):
        raise DomainError("matrix-log branch point: eigenphase at +/- pi")
    logu = scipy.linalg.logm(u)
    bch2 = xb + xc + 0.5 * (xb @ xc - xc @ xb)
    bch_residual = float(np.linalg.norm(logu - bch2, 2))
    return taylor_residual, bch_residual
