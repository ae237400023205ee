import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hqwopt.errors import CapacityError, DegeneratePlaneError, DomainError, ParameterError
from hqwopt.graphs import make_graph, random_connected_graph
from hqwopt.hamiltonian import (
    DiagonalHamiltonian,
    PauliOperator,
    jordan_negativity,
    jordan_product,
    maxcut_hamiltonian,
    mis_hamiltonian,
    mixer_hamiltonian,
    pauli_string_product,
    pauli_strings_commute,
    sectional_curvature,
    taylor_bch_residuals,
)

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
MATS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def dense_string(s):
    """Dense matrix of a Pauli string; character k acts on qubit k (bit k,
    the least significant)."""
    m = np.eye(1)
    for ch in s:
        m = np.kron(MATS[ch], m)
    return m


def dense_operator(op):
    total = np.zeros((1 << op.n_qubits, 1 << op.n_qubits), dtype=complex)
    for s, c in op.terms.items():
        total += c * dense_string(s)
    return total


pauli_strings = st.text(alphabet="IXYZ", min_size=1, max_size=3)


class TestPauliProducts:
    @given(pauli_strings, pauli_strings)
    @settings(max_examples=150, deadline=None)
    def test_product_matches_dense(self, p, q):
        if len(p) != len(q):
            q = (q + "I" * len(p))[: len(p)]
        m, r = pauli_string_product(p, q)
        np.testing.assert_allclose(
            (1j**m) * dense_string(r), dense_string(p) @ dense_string(q), atol=1e-12
        )

    @given(pauli_strings, pauli_strings)
    @settings(max_examples=100, deadline=None)
    def test_commute_matches_dense(self, p, q):
        if len(p) != len(q):
            q = (q + "I" * len(p))[: len(p)]
        a, b = dense_string(p), dense_string(q)
        assert pauli_strings_commute(p, q) == np.allclose(a @ b, b @ a)

    def test_known_cases(self):
        assert pauli_string_product("Z", "Z") == (0, "I")
        assert pauli_string_product("X", "Y") == (1, "Z")
        assert pauli_string_product("Y", "X") == (3, "Z")
        assert pauli_strings_commute("ZZ", "XX")
        assert not pauli_strings_commute("Z", "X")


class TestDiagonalHamiltonian:
    def test_single_edge_maxcut(self):
        g = make_graph(2, [(0, 1)])
        diag, _ = maxcut_hamiltonian(g)
        np.testing.assert_array_equal(diag.energies, [0.0, 1.0, 1.0, 0.0])
        assert diag.n_qubits == 2
        assert diag.ground_energy == 0.0

    def test_non_power_of_two_rejected(self):
        with pytest.raises(ParameterError):
            DiagonalHamiltonian(np.zeros(3))

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_diagonal_matches_pauli_dense(self, seed):
        g = random_connected_graph(5, 5, 9, seed)
        diag, pauli = maxcut_hamiltonian(g)
        dense = dense_operator(pauli)
        # cut Hamiltonian counts cut edges, diagonal in the bit basis
        np.testing.assert_allclose(np.diag(dense).real, diag.energies, atol=1e-12)
        np.testing.assert_allclose(dense, np.diag(np.diag(dense)), atol=1e-12)

    def test_mis_energies(self):
        g = make_graph(2, [(0, 1)])
        diag = mis_hamiltonian(g, 1.0)
        # -(n0 + n1) + n0 n1: states 00, 10, 01, 11
        np.testing.assert_array_equal(diag.energies, [0.0, -1.0, -1.0, -1.0])

    def test_mis_penalty_scaling(self):
        g = make_graph(2, [(0, 1)])
        diag = mis_hamiltonian(g, 3.0)
        np.testing.assert_array_equal(diag.energies, [0.0, -1.0, -1.0, 1.0])

    def test_mixer_dense(self):
        hb = mixer_hamiltonian(2)
        expected = np.kron(I2, X) + np.kron(X, I2)
        np.testing.assert_allclose(hb.to_dense(), expected, atol=1e-12)


class TestPauliOperator:
    def test_apply_matches_dense(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            n = int(rng.integers(1, 4))
            strings = ["".join(rng.choice(list("IXYZ"), size=n)) for _ in range(3)]
            op = PauliOperator(n, {s: float(rng.normal()) for s in strings})
            v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
            np.testing.assert_allclose(op.apply(v), dense_operator(op) @ v, atol=1e-10)

    def test_frobenius_norm(self):
        op = PauliOperator(2, {"ZZ": 3.0, "XI": 4.0})
        assert op.frobenius_norm() == pytest.approx(2 * 5.0)  # sqrt(4 * (9+16))

    def test_serialize_round_trip(self):
        op = PauliOperator(3, {"ZZI": 0.5, "XIX": -1 / 3, "III": 1.25})
        assert PauliOperator.deserialize(op.serialize()) == op


class TestJordanProduct:
    def test_squares_to_identity(self):
        z = PauliOperator(1, {"Z": 1.0})
        assert jordan_product(z, z) == PauliOperator(1, {"I": 1.0})

    def test_anticommuting_pair_vanishes(self):
        z = PauliOperator(1, {"Z": 1.0})
        x = PauliOperator(1, {"X": 1.0})
        assert jordan_product(z, x).is_zero()

    def test_two_qubit_cases(self):
        zz = PauliOperator(2, {"ZZ": 1.0})
        assert jordan_product(zz, PauliOperator(2, {"XI": 1.0})).is_zero()
        assert jordan_product(zz, PauliOperator(2, {"ZI": 1.0})) == PauliOperator(
            2, {"IZ": 1.0}
        )

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_dense_anticommutator(self, seed):
        rng = np.random.default_rng(seed)
        n = 2
        ops = []
        for _ in range(2):
            strings = ["".join(rng.choice(list("IXYZ"), size=n)) for _ in range(3)]
            ops.append(PauliOperator(n, {s: float(rng.normal()) for s in strings}))
        a, b = ops
        da, db = dense_operator(a), dense_operator(b)
        np.testing.assert_allclose(
            dense_operator(jordan_product(a, b)), (da @ db + db @ da) / 2, atol=1e-10
        )

    def test_symmetry(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            strings = ["".join(rng.choice(list("IXYZ"), size=2)) for _ in range(3)]
            a = PauliOperator(2, {s: float(rng.normal()) for s in strings})
            b = PauliOperator(2, {s: float(rng.normal()) for s in strings[::-1]})
            assert jordan_product(a, b) == jordan_product(b, a)


class TestJordanNegativity:
    def test_parallel_z_pair(self):
        # dense oracle value for the (Z, Z) pair: normalized product is Z/sqrt(2)
        # twice, Jordan product I/2, minimum eigenvalue 1/2
        z = PauliOperator(1, {"Z": 1.0})
        assert jordan_negativity(z, z) == pytest.approx(0.5, abs=1e-10)

    def test_anticommuting_pair(self):
        z = PauliOperator(1, {"Z": 1.0})
        x = PauliOperator(1, {"X": 1.0})
        assert jordan_negativity(z, x) == pytest.approx(0.0, abs=1e-12)

    def test_zero_operator_rejected(self):
        z = PauliOperator(1, {"Z": 1.0})
        with pytest.raises(ParameterError):
            jordan_negativity(z, PauliOperator(1, {}))

    @pytest.mark.parametrize("seed", range(4))
    def test_scale_invariance(self, seed):
        rng = np.random.default_rng(seed)
        g = random_connected_graph(5, 5, 8, seed)
        _, hc = maxcut_hamiltonian(g)
        hb = mixer_hamiltonian(5)
        base = jordan_negativity(hc, hb)
        c, d = rng.uniform(0.1, 10, size=2)
        assert jordan_negativity(hc.scaled(c), hb.scaled(d)) == pytest.approx(
            base, abs=1e-10
        )

    @pytest.mark.parametrize("seed", [3, 7])
    def test_matches_dense_oracle(self, seed):
        g = random_connected_graph(6, 6, 12, seed)
        _, hc = maxcut_hamiltonian(g)
        hb = mixer_hamiltonian(6)
        da = dense_operator(hc)
        db = dense_operator(hb)
        da /= np.linalg.norm(da)
        db /= np.linalg.norm(db)
        jp = (da @ db + db @ da) / 2
        oracle = float(np.linalg.eigvalsh(jp)[0])
        value = jordan_negativity(hc, hb)
        assert value == pytest.approx(oracle, abs=1e-10)
        # the reported value is a true eigenvalue of the Jordan product
        vals, vecs = np.linalg.eigh(jp)
        v = vecs[:, 0]
        assert abs(v.conj() @ jp @ v - value) < 1e-10

    def test_spectral_norm_variant_matches_dense_oracle(self):
        g = random_connected_graph(6, 8, 12, 4)
        _, hc = maxcut_hamiltonian(g)
        hb = mixer_hamiltonian(6)
        da = dense_operator(hc)
        db = dense_operator(hb)
        da /= np.linalg.norm(da, 2)
        db /= np.linalg.norm(db, 2)
        oracle = float(np.linalg.eigvalsh((da @ db + db @ da) / 2)[0])
        value = jordan_negativity(hc, hb, norm="spectral")
        assert value == pytest.approx(oracle, abs=1e-10)
        # bounded by the product of unit spectral norms
        assert -1.0 - 1e-12 <= value <= 1.0 + 1e-12

    def test_spectral_variant_scale_invariant(self):
        g = random_connected_graph(5, 6, 8, 2)
        _, hc = maxcut_hamiltonian(g)
        hb = mixer_hamiltonian(5)
        base = jordan_negativity(hc, hb, norm="spectral")
        assert jordan_negativity(hc.scaled(3.7), hb.scaled(0.2), norm="spectral") == (
            pytest.approx(base, abs=1e-10)
        )

    def test_unknown_norm_rejected(self):
        z = PauliOperator(1, {"Z": 1.0})
        with pytest.raises(ParameterError):
            jordan_negativity(z, z, norm="trace")

    def test_iterative_path_matches_dense(self):
        # 11 qubits exceeds the dense eigensolver cap, exercising the
        # iterative extremal eigenvalue route
        g = random_connected_graph(11, 14, 18, 0)
        _, hc = maxcut_hamiltonian(g)
        hb = mixer_hamiltonian(11)
        value = jordan_negativity(hc, hb)
        assert np.isfinite(value)
        assert value < 0.2


class TestSectionalCurvature:
    def test_single_pauli_pair_oracle(self):
        # K = -<[iZ, iX], i{Z,X}> / (|iZ|^2 |iX|^2 - <iZ, iX>^2); the
        # anticommutator vanishes, so K = 0
        z = PauliOperator(1, {"Z": 1.0})
        x = PauliOperator(1, {"X": 1.0})
        assert sectional_curvature(z, x) == pytest.approx(0.0, abs=1e-12)

    def test_degenerate_plane(self):
        z = PauliOperator(1, {"Z": 1.0})
        with pytest.raises(DegeneratePlaneError):
            sectional_curvature(z, z.scaled(2.0))

    @pytest.mark.parametrize("seed", range(3))
    def test_matches_dense_oracle(self, seed):
        rng = np.random.default_rng(seed + 20)
        n = 2
        ops = []
        for _ in range(2):
            strings = ["".join(rng.choice(list("IXYZ"), size=n)) for _ in range(3)]
            ops.append(PauliOperator(n, {s: float(rng.normal()) for s in strings}))
        a, b = ops
        da, db = dense_operator(a), dense_operator(b)
        comm = da @ db - db @ da
        anti = da @ db + db @ da
        # <iA, iB>_HS = Re tr((iA)^dag iB) = Re tr(A^dag B)
        num = -np.real(np.trace((1j * comm).conj().T @ (1j * anti)))
        na = np.real(np.trace(da.conj().T @ da))
        nb = np.real(np.trace(db.conj().T @ db))
        ab = np.real(np.trace(da.conj().T @ db))
        denom = na * nb - ab * ab
        if denom < 1e-9:
            return
        assert sectional_curvature(a, b) == pytest.approx(num / denom, rel=1e-9)


class TestTaylorBchResiduals:
    def test_third_order_scaling(self):
        g = random_connected_graph(4, 4, 6, 1)
        _, hc = maxcut_hamiltonian(g)
        hb = mixer_hamiltonian(4)
        r2, rb = taylor_bch_residuals(hc, hb, 0.08, 0.08)
        r2h, rbh = taylor_bch_residuals(hc, hb, 0.04, 0.04)
        # both truncations are second-order accurate: residual ~ t^3, so
        # halving the angles shrinks it by at least 2^2.9
        assert r2 / r2h > 2**2.9
        assert rb / rbh > 2**2.9

    def test_commuting_pair_bch_exact(self):
        a = PauliOperator(2, {"ZI": 1.0})
        b = PauliOperator(2, {"IZ": 1.0})
        _, rb = taylor_bch_residuals(a, b, 0.3, 0.2)
        assert rb < 1e-12

    def test_eigenphase_wrap_rejected(self):
        z = PauliOperator(1, {"Z": 1.0})
        x = PauliOperator(1, {"X": 1.0})
        with pytest.raises(DomainError):
            taylor_bch_residuals(z, x, np.pi, 0.0)


class TestCapacity:
    def test_dense_cap(self):
        op = PauliOperator(13, {"Z" * 13: 1.0})
        with pytest.raises(CapacityError):
            op.to_dense()
