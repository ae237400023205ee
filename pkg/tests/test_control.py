import numpy as np
import pytest

from hqwopt.control import (
    ControlInterval,
    assemble_hamiltonian,
    blend_coefficients,
    coin_full_observable,
    control_hamiltonian,
    integrate_adjoint,
    integrate_schrodinger,
    optimal_coin_axis,
    pmp_sweep,
    sensitivity,
    sweep_rows_to_csv,
)
from hqwopt.errors import DimensionMismatchError, ParameterError
from hqwopt.graphs import make_graph
from hqwopt.hamiltonian import maxcut_hamiltonian, mixer_hamiltonian

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


def single_edge_problem():
    g = make_graph(2, [(0, 1)])
    diag, _ = maxcut_hamiltonian(g)
    hb = mixer_hamiltonian(2).to_dense()
    return diag.energies, hb


def uniform_state(pos_dim):
    dim = 2 * pos_dim
    return np.full(dim, dim**-0.5, dtype=complex)


class TestBlendCoefficients:
    def test_boundary_values(self):
        assert blend_coefficients(0.0) == (0.0, 0.0, 1.0)
        assert blend_coefficients(0.5) == (0.0, 1.0, 0.0)
        assert blend_coefficients(1.0) == (1.0, 0.0, 0.0)

    def test_partition_of_unity(self):
        for u in np.linspace(0.0, 1.0, 101):
            y1, y2, y3 = blend_coefficients(u)
            assert abs(y1 + y2 + y3 - 1.0) < 1e-14

    def test_out_of_range(self):
        with pytest.raises(ParameterError):
            blend_coefficients(1.5)


class TestScheduleValidation:
    def test_duration_positive(self):
        with pytest.raises(ParameterError):
            ControlInterval(0.0, 1.0)

    def test_u_restricted(self):
        with pytest.raises(ParameterError):
            ControlInterval(1.0, 0.25)

    def test_axis_unit_when_coin_active(self):
        with pytest.raises(ParameterError):
            ControlInterval(1.0, 0.0, (1.0, 1.0, 0.0))


class TestAssembleHamiltonian:
    def test_u1_problem_block_only(self):
        hc, hb = single_edge_problem()
        h = assemble_hamiltonian(1.0, (1.0, 0.0, 0.0), hc, hb)
        np.testing.assert_allclose(h[:4, :4], 0.0, atol=1e-14)
        np.testing.assert_allclose(h[4:, 4:], np.diag(hc), atol=1e-14)

    def test_u_half_mixer_block_only(self):
        hc, hb = single_edge_problem()
        h = assemble_hamiltonian(0.5, (1.0, 0.0, 0.0), hc, hb)
        np.testing.assert_allclose(h[:4, :4], hb, atol=1e-14)
        np.testing.assert_allclose(h[4:, 4:], 0.0, atol=1e-14)

    def test_hermitian(self):
        hc, hb = single_edge_problem()
        for u in (0.0, 0.3, 0.5, 0.8, 1.0):
            h = assemble_hamiltonian(u, (0.6, 0.8, 0.0), hc, hb)
            assert np.max(np.abs(h - h.conj().T)) < 1e-12

    def test_non_unit_axis_rejected(self):
        hc, hb = single_edge_problem()
        with pytest.raises(ParameterError):
            assemble_hamiltonian(0.0, (2.0, 0.0, 0.0), hc, hb)


class TestIntegration:
    def test_norm_preserved_many_steps(self):
        hc, hb = single_edge_problem()
        sched = [ControlInterval(1.0, 0.5), ControlInterval(1.0, 1.0)]
        traj = integrate_schrodinger(uniform_state(4), sched, 0.002, hc, hb)
        norms = np.linalg.norm(traj.psi, axis=1)
        assert np.max(np.abs(norms - 1.0)) < 1e-12

    def test_u_half_leaves_coin1_block_static(self):
        hc, hb = single_edge_problem()
        rng = np.random.default_rng(0)
        psi0 = rng.normal(size=8) + 1j * rng.normal(size=8)
        psi0 /= np.linalg.norm(psi0)
        sched = [ControlInterval(0.7, 0.5)]
        traj = integrate_schrodinger(psi0, sched, 0.01, hc, hb)
        np.testing.assert_allclose(traj.psi[-1][4:], psi0[4:], atol=1e-12)

    def test_forward_backward_reversibility(self):
        hc, hb = single_edge_problem()
        sched = [
            ControlInterval(0.4, 1.0),
            ControlInterval(0.4, 0.0, (1.0, 0.0, 0.0)),
            ControlInterval(0.4, 0.5),
        ]
        psi0 = uniform_state(4)
        traj = integrate_schrodinger(psi0, sched, 0.01, hc, hb)
        # k(0) propagated forward must reproduce the terminal condition
        traj = integrate_adjoint(traj, sched, 0.01, hc, hb)
        recovered = traj.k[0]
        hc_full = np.concatenate([hc, hc])
        fwd = integrate_schrodinger(
            recovered / np.linalg.norm(recovered), sched, 0.01, hc, hb
        )
        np.testing.assert_allclose(
            fwd.psi[-1] * np.linalg.norm(recovered),
            hc_full * traj.psi[-1],
            atol=1e-9,
        )

    def test_unnormalized_initial_state_rejected(self):
        hc, hb = single_edge_problem()
        with pytest.raises(ParameterError):
            integrate_schrodinger(
                np.ones(8, dtype=complex), [ControlInterval(0.1, 0.5)], 0.01, hc, hb
            )


class TestAdjoint:
    def test_zero_problem_gives_zero_adjoint(self):
        hc = np.zeros(4)
        _, hb = single_edge_problem()
        sched = [ControlInterval(0.5, 0.5)]
        traj = integrate_schrodinger(uniform_state(4), sched, 0.01, hc, hb)
        traj = integrate_adjoint(traj, sched, 0.01, hc, hb)
        assert np.max(np.abs(traj.k)) < 1e-14

    def test_overlap_conserved(self):
        hc, hb = single_edge_problem()
        sched = [
            ControlInterval(0.4, 1.0),
            ControlInterval(0.4, 0.0, (0.0, 1.0, 0.0)),
            ControlInterval(0.4, 0.5),
        ]
        traj = integrate_schrodinger(uniform_state(4), sched, 0.005, hc, hb)
        traj = integrate_adjoint(traj, sched, 0.005, hc, hb)
        overlaps = np.einsum("ij,ij->i", traj.k.conj(), traj.psi)
        assert np.max(np.abs(overlaps - overlaps[0])) < 1e-8


class TestSensitivity:
    def test_hermitian_expectation_gives_zero(self):
        rng = np.random.default_rng(1)
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        psi /= np.linalg.norm(psi)
        a = rng.normal(size=(8, 8))
        a = (a + a.T) / 2
        assert abs(sensitivity(psi, psi, a.astype(complex))) < 1e-12

    def test_phase_rotated_state_identity(self):
        rng = np.random.default_rng(2)
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        psi /= np.linalg.norm(psi)
        assert sensitivity(psi, 1j * psi, np.eye(8, dtype=complex)) == pytest.approx(2.0)

    def test_matches_direct_complex_oracle(self):
        rng = np.random.default_rng(3)
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        k = rng.normal(size=8) + 1j * rng.normal(size=8)
        a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        a = (a + a.conj().T) / 2
        oracle = 1j * (k.conj() @ a @ psi)
        oracle = float((oracle + oracle.conjugate()).real)
        assert sensitivity(psi, k, a) == pytest.approx(oracle, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            sensitivity(np.ones(4), np.ones(4), np.eye(8, dtype=complex))


class TestOptimalAxis:
    def test_unit_norm(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            psi = rng.normal(size=8) + 1j * rng.normal(size=8)
            k = rng.normal(size=8) + 1j * rng.normal(size=8)
            axis = optimal_coin_axis(psi, k)
            if axis is not None:
                assert abs(np.linalg.norm(axis) - 1.0) < 1e-12

    def test_aligned_component(self):
        # state engineered so only the X sensitivity is nonzero
        psi = np.zeros(4, dtype=complex)
        psi[0] = 1.0  # coin 0, position 0
        k = np.zeros(4, dtype=complex)
        k[2] = 1j  # coin 1, position 0
        axis = optimal_coin_axis(psi, k)
        phi_x = sensitivity(psi, k, coin_full_observable(X, 2))
        assert phi_x != 0.0
        expected = np.sign(phi_x)
        assert axis[0] == pytest.approx(expected)

    def test_degenerate_returns_none(self):
        psi = np.zeros(4, dtype=complex)
        psi[0] = 1.0
        assert optimal_coin_axis(psi, np.zeros(4, dtype=complex)) is None

    def test_beats_random_axes(self):
        hc, hb = single_edge_problem()
        sched = [
            ControlInterval(0.4, 1.0),
            ControlInterval(0.4, 0.0, (1.0, 0.0, 0.0)),
            ControlInterval(0.4, 0.5),
        ]
        traj = integrate_schrodinger(uniform_state(4), sched, 0.05, hc, hb)
        traj = integrate_adjoint(traj, sched, 0.05, hc, hb)
        rng = np.random.default_rng(5)
        for psi, k in zip(traj.psi, traj.k):
            axis = optimal_coin_axis(psi, k)
            if axis is None:
                continue
            h_opt = control_hamiltonian(psi, k, 0.0, axis, hc, hb)
            for _ in range(200):
                v = rng.normal(size=3)
                v /= np.linalg.norm(v)
                h = control_hamiltonian(psi, k, 0.0, tuple(v), hc, hb)
                assert h_opt - h >= -1e-12


class TestControlHamiltonian:
    def test_axis_irrelevant_at_u_half(self):
        hc, hb = single_edge_problem()
        rng = np.random.default_rng(6)
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        k = rng.normal(size=8) + 1j * rng.normal(size=8)
        a = control_hamiltonian(psi, k, 0.5, (1.0, 0.0, 0.0), hc, hb)
        b = control_hamiltonian(psi, k, 0.5, (0.0, 0.0, 1.0), hc, hb)
        assert a == pytest.approx(b)

    def test_zero_for_k_equal_psi(self):
        hc, hb = single_edge_problem()
        psi = uniform_state(4)
        for u in (0.0, 0.5, 1.0):
            assert abs(control_hamiltonian(psi, psi, u, (0.0, 1.0, 0.0), hc, hb)) < 1e-12

    def test_linearity_in_blend(self):
        hc, hb = single_edge_problem()
        rng = np.random.default_rng(7)
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        k = rng.normal(size=8) + 1j * rng.normal(size=8)
        axis = (0.0, 0.0, 1.0)
        u = 0.8
        y1, y2, y3 = blend_coefficients(u)
        parts = (
            y1 * sensitivity(psi, k, assemble_hamiltonian(1.0, axis, hc, hb))
            + y2 * sensitivity(psi, k, assemble_hamiltonian(0.5, axis, hc, hb))
            + y3 * sensitivity(psi, k, coin_full_observable(Z, 4))
        )
        assert control_hamiltonian(psi, k, u, axis, hc, hb) == pytest.approx(parts)


class TestSweep:
    def test_trivial_problem_reports_degenerate(self):
        hc = np.zeros(4)
        _, hb = single_edge_problem()
        sched = [ControlInterval(0.5, 0.5)]
        report = pmp_sweep(uniform_state(4), sched, 0.05, hc, hb)
        assert all(r["degenerate"] for r in report["rows"])
        assert report["objective"] == pytest.approx(0.0)

    def test_non_constant_axis_on_single_edge(self):
        hc, hb = single_edge_problem()
        sched = [
            ControlInterval(0.4, 1.0),
            ControlInterval(0.4, 0.0, (1.0, 0.0, 0.0)),
            ControlInterval(0.4, 0.5),
        ]
        report = pmp_sweep(uniform_state(4), sched, 0.01, hc, hb)
        axes = np.array([[r["nx"], r["ny"], r["nz"]] for r in report["rows"]])
        assert np.max(axes.std(axis=0)) > 1e-3
        assert report["overlap_drift"] < 1e-8

    def test_csv_round_trip(self):
        hc, hb = single_edge_problem()
        sched = [ControlInterval(0.3, 0.5), ControlInterval(0.3, 1.0)]
        report = pmp_sweep(uniform_state(4), sched, 0.05, hc, hb)
        text = sweep_rows_to_csv(report["rows"])
        lines = text.strip().splitlines()
        assert lines[0] == "t,phi_x,phi_y,phi_z,nx,ny,nz,h_u0,h_u05,h_u1,argmax_u"
        assert len(lines) == len(report["rows"]) + 1
        first = lines[1].split(",")
        assert float(first[0]) == report["rows"][0]["t"]
