"""Pontryagin analysis of the blended coin/Hamiltonian schedule:
time-dependent Hamiltonian assembly, exact piecewise integration of the
state and adjoint, sensitivity functionals, and the optimal coin axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DimensionMismatchError, ParameterError

AXIS_EPS = 1e-10
CONTROL_POSITION_CAP = 8

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_P0 = np.array([[1, 0], [0, 0]], dtype=complex)
_P1 = np.array([[0, 0], [0, 1]], dtype=complex)


@dataclass(frozen=True)
class ControlInterval:
    duration: float
    u: float  # one of 0, 1/2, 1
    axis: tuple = (1.0, 0.0, 0.0)  # used only when u = 0

    def __post_init__(self):
        if self.duration <= 0:
            raise ParameterError("interval duration must be positive")
        if self.u not in (0.0, 0.5, 1.0):
            raise ParameterError("control value must be one of 0, 1/2, 1")
        if self.u == 0.0 and abs(np.linalg.norm(self.axis) - 1.0) > 1e-10:
            raise ParameterError("axis must be a unit vector when u = 0")


@dataclass
class ControlTrajectory:
    times: np.ndarray
    psi: np.ndarray  # (n_grid, dim)
    k: np.ndarray  # adjoint, same shape (not normalized)
    objective: float


def blend_coefficients(u: float):
    """Polynomial blend (y1, y2, y3) selecting between the coin-1 problem
    term, the coin-0 mixer term, and the pure coin rotation."""
    if not 0.0 <= u <= 1.0:
        raise ParameterError("control value must lie in [0, 1]")
    y1 = 2 * u * u - u
    y2 = -4 * u * u + 4 * u
    y3 = 2 * u * u - 3 * u + 1
    return y1, y2, y3


def _check_capacity(pos_dim: int):
    if pos_dim > 1 << CONTROL_POSITION_CAP:
        raise CapacityError(
            f"dense control work capped at {CONTROL_POSITION_CAP} position qubits"
        )


def coin_full_observable(pauli_2x2: np.ndarray, pos_dim: int) -> np.ndarray:
    return np.kron(pauli_2x2, np.eye(pos_dim))


def assemble_hamiltonian(u: float, axis, hc_diag, hb_dense) -> np.ndarray:
    """Dense (coin + position) Hermitian for one blend point."""
    y1, y2, y3 = blend_coefficients(u)
    hc_diag = np.asarray(hc_diag, dtype=float)
    hb_dense = np.asarray(hb_dense, dtype=complex)
    pos_dim = len(hc_diag)
    _check_capacity(pos_dim)
    if hb_dense.shape != (pos_dim, pos_dim):
        raise DimensionMismatchError("mixer matrix does not match the diagonal")
    h = np.zeros((2 * pos_dim, 2 * pos_dim), dtype=complex)
    if y1 != 0.0:
        h += y1 * np.kron(_P1, np.diag(hc_diag))
    if y2 != 0.0:
        h += y2 * np.kron(_P0, hb_dense)
    if y3 != 0.0:
        nx, ny, nz = axis
        if abs(np.linalg.norm([nx, ny, nz]) - 1.0) > 1e-10:
            raise ParameterError("axis must be a unit vector when the coin term is active")
        h += y3 * coin_full_observable(nx * _X + ny * _Y + nz * _Z, pos_dim)
    return h


def _propagators(schedule, dt, hc_diag, hb_dense):
    """Per interval: eigendecomposition-based stepping (exact for the
    piecewise-constant schedule); dt only sets the sampling density."""
    plan = []
    for iv in schedule:
        h = assemble_hamiltonian(iv.u, iv.axis, hc_diag, hb_dense)
        vals, vecs = np.linalg.eigh(h)
        n_steps = max(1, round(iv.duration / dt))
        step = iv.duration / n_steps
        plan.append((vals, vecs, n_steps, step))
    return plan


def _evolve(vec, vals, vecs, t):
    return vecs @ (np.exp(-1j * vals * t) * (vecs.conj().T @ vec))


def integrate_schrodinger(psi0, schedule, dt, hc_diag, hb_dense) -> ControlTrajectory:
    """Forward grid trajectory; the adjoint field is filled in later by
    integrate_adjoint."""
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
        raise ParameterError("initial state must be normalized")
    plan = _propagators(schedule, dt, hc_diag, hb_dense)
    times = [0.0]
    states = [psi0]
    t = 0.0
    for vals, vecs, n_steps, step in plan:
        for _ in range(n_steps):
            states.append(_evolve(states[-1], vals, vecs, step))
            t += step
            times.append(t)
    hc_diag = np.asarray(hc_diag, dtype=float)
    final = states[-1]
    obj = float(
        np.real(np.dot(final.conj(), np.concatenate([hc_diag, hc_diag]) * final))
    )
    return ControlTrajectory(np.array(times), np.array(states), None, obj)


def integrate_adjoint(traj: ControlTrajectory, schedule, dt, hc_diag, hb_dense) -> ControlTrajectory:
    """Terminal condition (the observable applied to the final state), then
    backward integration under the same generator."""
    hc_full = np.concatenate([np.asarray(hc_diag, float)] * 2)
    k_final = hc_full * traj.psi[-1]
    plan = _propagators(schedule, dt, hc_diag, hb_dense)
    ks = [k_final]
    for vals, vecs, n_steps, step in reversed(plan):
        for _ in range(n_steps):
            ks.append(_evolve(ks[-1], vals, vecs, -step))
    ks.reverse()
    traj.k = np.array(ks)
    return traj


def sensitivity(psi, k, a: np.ndarray) -> float:
    """Phi_A = i<k|A|psi> + c.c. = -2 Im <k|A|psi>."""
    psi = np.asarray(psi, dtype=complex)
    k = np.asarray(k, dtype=complex)
    if a.shape != (len(psi), len(psi)) or len(k) != len(psi):
        raise DimensionMismatchError("sensitivity operands do not match")
    return float(-2.0 * np.imag(np.dot(k.conj(), a @ psi)))


def optimal_coin_axis(psi, k):
    """Unit 3-vector along the instantaneous sensitivity direction;
    None signals a degenerate (near-zero) sensitivity vector."""
    pos_dim = len(psi) // 2
    phi = np.array(
        [
            sensitivity(psi, k, coin_full_observable(p, pos_dim))
            for p in (_X, _Y, _Z)
        ]
    )
    nrm = np.linalg.norm(phi)
    if nrm <= AXIS_EPS:
        return None
    return tuple(phi / nrm)


def control_hamiltonian(psi, k, u, axis, hc_diag, hb_dense) -> float:
    """Scalar PMP Hamiltonian: blend-weighted sum of the three sensitivities."""
    y1, y2, y3 = blend_coefficients(u)
    hc_diag = np.asarray(hc_diag, dtype=float)
    pos_dim = len(hc_diag)
    total = 0.0
    if y1 != 0.0:
        total += y1 * sensitivity(psi, k, np.kron(_P1, np.diag(hc_diag)))
    if y2 != 0.0:
        total += y2 * sensitivity(psi, k, np.kron(_P0, np.asarray(hb_dense, complex)))
    if y3 != 0.0:
        nx, ny, nz = axis
        total += y3 * sensitivity(
            psi, k, coin_full_observable(nx * _X + ny * _Y + nz * _Z, pos_dim)
        )
    return total


def pmp_sweep(psi0, schedule, dt, hc_diag, hb_dense) -> dict:
    """Forward/backward pass plus per-grid-point optimal axis and the
    control-Hamiltonian value under each admissible control level.

    A degenerate sensitivity vector carries the previous grid point's axis
    forward (any unit axis is admissible there).
    """
    traj = integrate_schrodinger(psi0, schedule, dt, hc_diag, hb_dense)
    traj = integrate_adjoint(traj, schedule, dt, hc_diag, hb_dense)
    pos_dim = len(np.asarray(hc_diag))
    rows = []
    prev_axis = (1.0, 0.0, 0.0)
    overlaps = []
    for t, psi, k in zip(traj.times, traj.psi, traj.k):
        phi = [
            sensitivity(psi, k, coin_full_observable(p, pos_dim))
            for p in (_X, _Y, _Z)
        ]
        axis = optimal_coin_axis(psi, k)
        degenerate = axis is None
        if degenerate:
            axis = prev_axis
        prev_axis = axis
        h_by_u = {
            u: control_hamiltonian(psi, k, u, axis, hc_diag, hb_dense)
            for u in (0.0, 0.5, 1.0)
        }
        argmax_u = max(h_by_u, key=h_by_u.get)
        overlaps.append(complex(np.dot(k.conj(), psi)))
        rows.append(
            {
                "t": float(t),
                "phi_x": phi[0],
                "phi_y": phi[1],
                "phi_z": phi[2],
                "nx": axis[0],
                "ny": axis[1],
                "nz": axis[2],
                "degenerate": degenerate,
                "h_u0": h_by_u[0.0],
                "h_u05": h_by_u[0.5],
                "h_u1": h_by_u[1.0],
                "argmax_u": argmax_u,
            }
        )
    overlaps = np.array(overlaps)
    drift = float(np.max(np.abs(overlaps - overlaps[0]))) if len(overlaps) else 0.0
    return {
        "trajectory": traj,
        "rows": rows,
        "overlap_drift": drift,
        "objective": traj.objective,
    }


def sweep_rows_to_csv(rows) -> str:
    header = "t,phi_x,phi_y,phi_z,nx,ny,nz,h_u0,h_u05,h_u1,argmax_u"
    lines = [header]
    for r in rows:
        lines.append(
            ",".join(
                f"{r[c]:.17g}"
                for c in ("t", "phi_x", "phi_y", "phi_z", "nx", "ny", "nz", "h_u0", "h_u05", "h_u1")
            )
            + f",{r['argmax_u']:g}"
        )
    return "\n".join(lines) + "\n"
