"""Controlled rotations compiled from a transverse-Ising coupling.

The two-qubit generator is

    H = eps_e_x sigma_x^E + eps_e_z sigma_z^E
        + sum_p eps_s_p sigma_p^S + j sigma_z^E sigma_z^S

with eps_e_x >> j so the environment dynamics is effectively frozen and
only dresses the gate. In the E computational basis the coupling splits
into two single-qubit blocks acting on S (the eps_e_z shifts only move the
block energies and are dropped from the gate):

    h_k = eps_s_x sigma_x + eps_s_y sigma_y + (eps_s_z + (-1)^k j) sigma_z

for E in |r> (k = 0) and |l> (k = 1). Each block evolves with Rabi
frequency nu_k = sqrt(eps_s_x^2 + (eps_s_z + (-1)^k j)^2 + eps_s_y^2).
Choosing eps_s_x = 0, eps_s_z = j, eps_s_y = phi/tau and the resonance
nu_0 tau = n pi makes block 0 the identity (times (-1)^n) and block 1 the
y-rotation R(phi) at the gate time tau:

    j = sqrt((n pi)^2 - phi^2) / (2 tau)

``solve_rotation_params`` returns these coefficients and
``compile_controlled_rotation`` verifies both blocks against their
targets up to a per-block global phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gates import controlled_rotation, rotation
from .qstate import ID2, PAULI_X, PAULI_Y, PAULI_Z, distance_up_to_phase, expm_hermitian

# realizes the "environment frozen" regime at desk scale
EPS_E_X_OVER_J = 10.0


@dataclass(frozen=True)
class IsingParams:
    """Coefficients of the transverse-Ising generator (hbar = 1) plus gate time."""

    eps_e_x: float
    eps_e_z: float
    eps_s_x: float
    eps_s_y: float
    eps_s_z: float
    j: float
    tau: float

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError(f"IsingParams: tau must be positive, got {self.tau}")


@dataclass(frozen=True)
class CompiledGate:
    """Solver output: parameters, block propagators and verification residuals."""

    params: IsingParams
    n: int
    u0: np.ndarray
    u1: np.ndarray
    conditional: np.ndarray
    residual_u0: float
    residual_u1: float


def block_hamiltonians(p: IsingParams) -> tuple[np.ndarray, np.ndarray]:
    """S-space blocks (h0, h1) of the coupling for E in |r> and |l>."""
    def block(sign: float) -> np.ndarray:
        return (p.eps_s_x * PAULI_X + p.eps_s_y * PAULI_Y
                + (p.eps_s_z + sign * p.j) * PAULI_Z)
    return block(+1.0), block(-1.0)


def block_frequencies(p: IsingParams) -> tuple[float, float]:
    """Rabi frequencies (nu0, nu1) of the two blocks."""
    def nu(sign: float) -> float:
        return float(np.sqrt(p.eps_s_x**2 + (p.eps_s_z + sign * p.j)**2 + p.eps_s_y**2))
    return nu(+1.0), nu(-1.0)


def _rabi_propagator(coeffs: tuple[float, float, float], t: float) -> np.ndarray:
    """exp(-i (c . sigma) t) in closed form: cos(nu t) I - i sin(nu t) n.sigma."""
    cx, cy, cz = coeffs
    nu = float(np.sqrt(cx * cx + cy * cy + cz * cz))
    if nu == 0.0:
        return ID2.copy()
    n_dot_sigma = (cx * PAULI_X + cy * PAULI_Y + cz * PAULI_Z) / nu
    return np.cos(nu * t) * ID2 - 1j * np.sin(nu * t) * n_dot_sigma


def block_propagators(p: IsingParams, t: float) -> tuple[np.ndarray, np.ndarray]:
    """(U0, U1) = (exp(-i h0 t), exp(-i h1 t)) via the closed Rabi form."""
    u0 = _rabi_propagator((p.eps_s_x, p.eps_s_y, p.eps_s_z + p.j), t)
    u1 = _rabi_propagator((p.eps_s_x, p.eps_s_y, p.eps_s_z - p.j), t)
    return u0, u1


def solve_rotation_params(phi_target: float, n: int = 1, tau: float = 1.0) -> IsingParams:
    """Ising coefficients realizing a conditional R(phi_target) at time tau.

    Requires n pi > phi_target >= 0 for a real coupling strength; raises
    ValueError otherwise. Block 0 returns to (-1)^n I at tau, block 1
    performs R(phi_target).
    """
    if n < 1:
        raise ValueError(f"solve_rotation_params: resonance index n must be >= 1, got {n}")
    if tau <= 0:
        raise ValueError(f"solve_rotation_params: tau must be positive, got {tau}")
    if phi_target < 0:
        raise ValueError(f"solve_rotation_params: phi must be non-negative, got {phi_target}")
    if n * np.pi <= phi_target:
        raise ValueError(
            f"solve_rotation_params: no solution, need n*pi > phi "
            f"(got phi = {phi_target}, n*pi = {n * np.pi})")
    j = float(np.sqrt((n * np.pi)**2 - phi_target**2) / (2 * tau))
    return IsingParams(eps_e_x=EPS_E_X_OVER_J * j, eps_e_z=0.0,
                       eps_s_x=0.0, eps_s_y=phi_target / tau, eps_s_z=j,
                       j=j, tau=tau)


def conditional_gate_from_ising(p: IsingParams, t: float) -> np.ndarray:
    """|r><r|_E (x) U0 + |l><l|_E (x) U1, 4x4 in (E, S) order."""
    u0, u1 = block_propagators(p, t)
    g = np.zeros((4, 4), dtype=complex)
    g[:2, :2] = u0
    g[2:, 2:] = u1
    return g


def compile_controlled_rotation(phi_target: float, n: int = 1, tau: float = 1.0) -> CompiledGate:
    """Solve, build the conditional gate at tau, and verify both blocks.

    ``residual_u0``/``residual_u1`` are the phase-insensitive max-entry
    distances of the blocks from I and R(phi_target); only the relative
    phase between the two blocks is physical and it is visible in
    ``conditional`` (block 0 carries (-1)^n).
    """
    params = solve_rotation_params(phi_target, n, tau)
    u0, u1 = block_propagators(params, tau)
    return CompiledGate(
        params=params,
        n=n,
        u0=u0,
        u1=u1,
        conditional=conditional_gate_from_ising(params, tau),
        residual_u0=distance_up_to_phase(u0, ID2),
        residual_u1=distance_up_to_phase(u1, rotation(phi_target)),
    )


def hamiltonian_terms(p: IsingParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(h_s, h_e, h_se) on the (E, S) pair, for Trotter studies.

    h_s  = I_E (x) sum_p eps_s_p sigma_p
    h_e  = (eps_e_x sigma_x + eps_e_z sigma_z) (x) I_S
    h_se = j sigma_z (x) sigma_z
    """
    h_s = np.kron(ID2, p.eps_s_x * PAULI_X + p.eps_s_y * PAULI_Y + p.eps_s_z * PAULI_Z)
    h_e = np.kron(p.eps_e_x * PAULI_X + p.eps_e_z * PAULI_Z, ID2)
    h_se = p.j * np.kron(PAULI_Z, PAULI_Z)
    return h_s, h_e, h_se


def trotterized_total_propagator(h_s: np.ndarray, h_e: np.ndarray, h_se: np.ndarray,
                                 t: float, slices: int) -> np.ndarray:
    """First-order split propagator [e^{-i h_s dt} e^{-i h_e dt} e^{-i h_se dt}]^m.

    dt = t/slices; equals exp(-i (h_s + h_e + h_se) t) exactly when the
    three terms commute, and converges to it as O(1/slices) otherwise.
    """
    if slices < 1:
        raise ValueError(f"trotterized_total_propagator: slices must be >= 1, got {slices}")
    dt = t / slices
    step = expm_hermitian(h_s, dt) @ expm_hermitian(h_e, dt) @ expm_hermitian(h_se, dt)
    return np.linalg.matrix_power(step, slices)
