"""Pauli-string operator algebra: commutator and symmetrized-product
bilinear maps, Lie and Jordan-Lie closures, and the structure/dimension
diagnostics of the coin-enlarged generator set.

Elements represent i*A with A Hermitian, so both bilinear maps stay inside
the real-coefficient Pauli ring:
  [iA, iB]   -> coefficient -2s on R for each anticommuting pair with
                P*Q = i*s*R
  i{A, B}    -> coefficient +2t on R for each commuting pair with P*Q = t*R
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatchError, ParameterError
from .hamiltonian import PauliOperator, _MUL

RANK_TOL = 1e-9
SPAN_TOL = 1e-9
TABLE_QUBIT_CAP = 4

_LETTERS = "IXYZ"


@dataclass(frozen=True)
class AlgebraElement:
    """i*(Hermitian) as a real coefficient map over Pauli strings."""

    n_qubits: int
    coeffs: dict  # Pauli string -> real coefficient, zero entries pruned

    def __post_init__(self):
        clean = {
            s: float(c)
            for s, c in sorted(self.coeffs.items())
            if float(c) != 0.0
        }
        for s in clean:
            if len(s) != self.n_qubits or any(ch not in _LETTERS for ch in s):
                raise ParameterError(f"bad Pauli string {s!r}")
        object.__setattr__(self, "coeffs", clean)

    def is_zero(self) -> bool:
        return not self.coeffs

    def norm(self) -> float:
        return float(np.sqrt(sum(c * c for c in self.coeffs.values())))

    @classmethod
    def from_pauli(cls, op: PauliOperator) -> "AlgebraElement":
        return cls(op.n_qubits, dict(op.terms))

    def to_pauli(self) -> PauliOperator:
        return PauliOperator(self.n_qubits, dict(self.coeffs))

    def to_dense_matrix(self) -> np.ndarray:
        """The actual element i*A as a dense skew-Hermitian matrix."""
        return 1j * self.to_pauli().to_dense()

    def tensor_coin(self, coin_letter: str) -> "AlgebraElement":
        """Attach a coin-qubit letter as the new most significant qubit."""
        return AlgebraElement(
            self.n_qubits + 1, {s + coin_letter: c for s, c in self.coeffs.items()}
        )


# ---------------------------------------------------------------------------
# vectorized Pauli index tables (used by the closures)

@lru_cache(maxsize=None)
class _PauliTable:
    """Product index/coefficient tables over the full 4^q string basis.

    Index digits are base 4 over I, X, Y, Z with digit k = qubit k.
    """

    def __init__(self, q: int):
        if q > TABLE_QUBIT_CAP:
            raise ParameterError(f"closure tables capped at {TABLE_QUBIT_CAP} qubits")
        self.q = q
        self.dim = 4 ** q
        t_idx = np.zeros((4, 4), dtype=np.int64)
        t_phase = np.zeros((4, 4), dtype=np.int64)
        for a in range(4):
            for b in range(4):
                m, c = _MUL[(_LETTERS[a], _LETTERS[b])]
                t_idx[a, b] = _LETTERS.index(c)
                t_phase[a, b] = m
        idx = np.arange(self.dim)
        digits = np.stack([(idx // 4 ** k) % 4 for k in range(q)], axis=1)
        prod = np.zeros((self.dim, self.dim), dtype=np.int64)
        phase = np.zeros((self.dim, self.dim), dtype=np.int64)
        for k in range(q):
            da = digits[:, k][:, None]
            db = digits[:, k][None, :]
            prod += t_idx[da, db] * 4 ** k
            phase += t_phase[da, db]
        phase %= 4
        self.prod = prod
        self.lie_coef = np.where(phase == 1, -2.0, np.where(phase == 3, 2.0, 0.0))
        self.jordan_coef = np.where(phase == 0, 2.0, np.where(phase == 2, -2.0, 0.0))

    def string_to_index(self, s: str) -> int:
        return sum(_LETTERS.index(ch) * 4 ** k for k, ch in enumerate(s))

    def index_to_string(self, i: int) -> str:
        return "".join(_LETTERS[(i // 4 ** k) % 4] for k in range(self.q))

    def to_vector(self, elem: AlgebraElement) -> np.ndarray:
        v = np.zeros(self.dim)
        for s, c in elem.coeffs.items():
            v[self.string_to_index(s)] = c
        return v

    def to_element(self, v: np.ndarray, tol: float = 0.0) -> AlgebraElement:
        coeffs = {
            self.index_to_string(i): float(v[i])
            for i in np.nonzero(np.abs(v) > tol)[0]
        }
        return AlgebraElement(self.q, coeffs)

    def bracket(self, va: np.ndarray, vb: np.ndarray, coef: np.ndarray) -> np.ndarray:
        ia = np.nonzero(va)[0]
        ib = np.nonzero(vb)[0]
        if len(ia) == 0 or len(ib) == 0:
            return np.zeros(self.dim)
        sub = np.ix_(ia, ib)
        m = np.outer(va[ia], vb[ib]) * coef[sub]
        return np.bincount(self.prod[sub].ravel(), weights=m.ravel(), minlength=self.dim)


# ---------------------------------------------------------------------------
# bilinear maps (term-wise; exact phase arithmetic)

def _check_same(a: AlgebraElement, b: AlgebraElement):
    if a.n_qubits != b.n_qubits:
        raise DimensionMismatchError("elements act on different qubit counts")


def bracket_lie(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Commutator [iA, iB] in the i*Hermitian convention."""
    _check_same(a, b)
    out = {}
    for sa, ca in a.coeffs.items():
        for sb, cb in b.coeffs.items():
            m, r = _string_product(sa, sb)
            if m % 2 == 0:
                continue
            coef = -2.0 if m == 1 else 2.0
            out[r] = out.get(r, 0.0) + coef * ca * cb
    return AlgebraElement(a.n_qubits, out)


def bracket_jordan(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Symmetrized map i{A, B} in the i*Hermitian convention."""
    _check_same(a, b)
    out = {}
    for sa, ca in a.coeffs.items():
        for sb, cb in b.coeffs.items():
            m, r = _string_product(sa, sb)
            if m % 2 == 1:
                continue
            coef = 2.0 if m == 0 else -2.0
            out[r] = out.get(r, 0.0) + coef * ca * cb
    return AlgebraElement(a.n_qubits, out)


def _string_product(p: str, q: str):
    m = 0
    chars = []
    for a, b in zip(p, q):
        mm, c = _MUL[(a, b)]
        m += mm
        chars.append(c)
    return m % 4, "".join(chars)


# ---------------------------------------------------------------------------
# closures

@dataclass
class AlgebraBasis:
    """Ordered linearly independent spanning set with provenance and an
    orthonormalized projector for span tests."""

    n_qubits: int
    elements: list
    provenance: list
    truncated: bool = False
    _ortho: np.ndarray = field(default=None, repr=False)
    _table: object = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.elements)

    def projection_residual(self, elem: AlgebraElement) -> float:
        """Relative residual of elem after projection onto the span."""
        v = self._table.to_vector(elem)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            return 0.0
        r = v - self._ortho.T @ (self._ortho @ v)
        return float(np.linalg.norm(r) / nrm)

    def contains(self, elem: AlgebraElement, tol: float = SPAN_TOL) -> bool:
        return self.projection_residual(elem) < tol


class _BasisBuilder:
    def __init__(self, q: int, max_dim: int):
        self.table = _PauliTable(q)
        self.max_dim = max_dim
        self.vecs = []
        self.ortho = np.zeros((0, self.table.dim))
        self.prov = []
        self.truncated = False

    def try_add(self, v: np.ndarray, prov: str) -> bool:
        nrm = np.linalg.norm(v)
        if nrm < 1e-14:
            return False
        r = v - self.ortho.T @ (self.ortho @ v)
        rn = np.linalg.norm(r)
        if rn <= RANK_TOL * nrm:
            return False
        if len(self.vecs) >= self.max_dim:
            self.truncated = True
            return False
        self.vecs.append(v)
        self.ortho = np.vstack([self.ortho, r / rn])
        self.prov.append(prov)
        return True

    def finish(self) -> AlgebraBasis:
        elements = [self.table.to_element(v) for v in self.vecs]
        return AlgebraBasis(
            self.table.q,
            elements,
            list(self.prov),
            truncated=self.truncated,
            _ortho=self.ortho,
            _table=self.table,
        )


def _saturate(generators, maps, max_dim) -> AlgebraBasis:
    if not generators:
        raise ParameterError("need at least one generator")
    q = generators[0].n_qubits
    if any(g.n_qubits != q for g in generators):
        raise DimensionMismatchError("generators act on different qubit counts")
    if any(g.is_zero() for g in generators):
        raise ParameterError("zero generator")
    if max_dim is None:
        max_dim = 4 ** q
    b = _BasisBuilder(q, max_dim)
    queue = []
    for k, g in enumerate(generators):
        if b.try_add(b.table.to_vector(g), f"gen{k}"):
            queue.append(len(b.vecs) - 1)
    while queue and not b.truncated:
        i = queue.pop(0)
        j = 0
        while j < len(b.vecs):
            for name, coef in maps:
                v = b.table.bracket(b.vecs[i], b.vecs[j], coef)
                label = f"[e{i},e{j}]" if name == "lie" else f"{{e{i},e{j}}}"
                if b.try_add(v, label):
                    queue.append(len(b.vecs) - 1)
            j += 1
    return b.finish()


def lie_closure(generators, max_dim=None) -> AlgebraBasis:
    """Bracket saturation under the commutator alone."""
    gens = [_as_element(g) for g in generators]
    table = _PauliTable(gens[0].n_qubits)
    return _saturate(gens, [("lie", table.lie_coef)], max_dim)


def jordan_lie_closure(generators, max_dim=None) -> AlgebraBasis:
    """Saturation under both the commutator and the symmetrized map."""
    gens = [_as_element(g) for g in generators]
    table = _PauliTable(gens[0].n_qubits)
    return _saturate(
        gens, [("lie", table.lie_coef), ("jordan", table.jordan_coef)], max_dim
    )


def _as_element(x) -> AlgebraElement:
    if isinstance(x, AlgebraElement):
        return x
    if isinstance(x, PauliOperator):
        return AlgebraElement.from_pauli(x)
    raise ParameterError(f"cannot interpret {type(x).__name__} as an algebra element")


def identity_element(n: int) -> AlgebraElement:
    return AlgebraElement(n, {"I" * n: 1.0})


def k_q_basis(l_q: AlgebraBasis, hc, hb) -> AlgebraBasis:
    """Span of all pairwise commutators of the closed algebra, extended by
    the two problem generators."""
    q = l_q.n_qubits
    table = _PauliTable(q)
    b = _BasisBuilder(q, 4 ** q)
    vecs = [table.to_vector(e) for e in l_q.elements]
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            b.try_add(table.bracket(vecs[i], vecs[j], table.lie_coef), f"[e{i},e{j}]")
    for name, g in (("hc", hc), ("hb", hb)):
        b.try_add(table.to_vector(_as_element(g)), name)
    return b.finish()


def hqw_generators(hc: PauliOperator, hb: PauliOperator):
    """The four coin-enlarged generators: two coin rotations and the two
    coin-projected Hamiltonians, projectors expanded as (I -+ Z)/2."""
    n = hc.n_qubits
    ident = "I" * n
    coin_y = AlgebraElement(n + 1, {ident + "Y": 1.0})
    coin_z = AlgebraElement(n + 1, {ident + "Z": 1.0})
    proj1_hc = {}
    for s, c in hc.terms.items():
        proj1_hc[s + "I"] = proj1_hc.get(s + "I", 0.0) + c / 2
        proj1_hc[s + "Z"] = proj1_hc.get(s + "Z", 0.0) - c / 2
    proj0_hb = {}
    for s, c in hb.terms.items():
        proj0_hb[s + "I"] = proj0_hb.get(s + "I", 0.0) + c / 2
        proj0_hb[s + "Z"] = proj0_hb.get(s + "Z", 0.0) + c / 2
    return [
        coin_y,
        coin_z,
        AlgebraElement(n + 1, proj1_hc),
        AlgebraElement(n + 1, proj0_hb),
    ]


def hqw_dla(hc: PauliOperator, hb: PauliOperator, n: int, max_dim=None) -> AlgebraBasis:
    """Lie closure of the coin-enlarged generator set on n+1 qubits."""
    if hc.n_qubits != n or hb.n_qubits != n:
        raise DimensionMismatchError("operators must act on n qubits")
    return lie_closure(hqw_generators(hc, hb), max_dim)


def jordan_in_dla_check(hc, hb, g_q: AlgebraBasis = None):
    """Is the symmetrized product of the two generators inside the plain
    Lie closure?  Returns (is_member, relative residual)."""
    hc_e, hb_e = _as_element(hc), _as_element(hb)
    if g_q is None:
        g_q = lie_closure([hc_e, hb_e])
    jordan = bracket_jordan(hc_e, hb_e)
    if jordan.is_zero():
        return True, 0.0
    residual = g_q.projection_residual(jordan)
    return residual < SPAN_TOL, residual


def theorem1_check(hc: PauliOperator, hb: PauliOperator, n: int) -> dict:
    """Verify the structural decomposition of the coin-enlarged algebra.

    Checks dim(g_H) = 3*dim(L_Q) + dim(K_Q), plus membership of P (x) b for
    every closed-algebra basis element b and coin letter P, and of I (x) b
    for every b in the commutator-extended part.
    """
    if n > 3:
        raise ParameterError("dense verification capped at 3 position qubits")
    hc_e, hb_e = _as_element(hc), _as_element(hb)
    g_q = lie_closure([hc_e, hb_e])
    l_q = jordan_lie_closure([hc_e, hb_e, identity_element(n)])
    k_q = k_q_basis(l_q, hc_e, hb_e)
    g_h = hqw_dla(hc, hb, n)
    identity_holds = g_h.dim == 3 * l_q.dim + k_q.dim

    membership_residuals = []
    for b in l_q.elements:
        for letter in "XYZ":
            membership_residuals.append(g_h.projection_residual(b.tensor_coin(letter)))
    for b in k_q.elements:
        membership_residuals.append(g_h.projection_residual(b.tensor_coin("I")))
    max_residual = max(membership_residuals) if membership_residuals else 0.0

    return {
        "dim_g_q": g_q.dim,
        "dim_l_q": l_q.dim,
        "dim_k_q": k_q.dim,
        "dim_g_h": g_h.dim,
        "identity_holds": identity_holds,
        "max_membership_residual": max_residual,
        "membership_holds": max_residual < SPAN_TOL,
    }


def dimension_inequality_report(hc: PauliOperator, hb: PauliOperator, n: int) -> dict:
    """dim(g_H) versus 4*dim(g_Q); strict inequality is expected exactly
    when the symmetrized product falls outside the plain Lie closure."""
    if n > 3:
        raise ParameterError("dense verification capped at 3 position qubits")
    hc_e, hb_e = _as_element(hc), _as_element(hb)
    g_q = lie_closure([hc_e, hb_e])
    g_h = hqw_dla(hc, hb, n)
    is_member, residual = jordan_in_dla_check(hc_e, hb_e, g_q)
    return {
        "dim_g_q": g_q.dim,
        "dim_g_h": g_h.dim,
        "four_dim_g_q": 4 * g_q.dim,
        "jordan_is_member": is_member,
        "jordan_residual": residual,
        "strict_inequality": g_h.dim > 4 * g_q.dim,
        "inequality_asserted": not is_member,
    }
