"""Dense complex linear algebra and quantum-state primitives for 1-3 qubits.

Subsystem ordering convention
-----------------------------
Three-qubit states order the subsystems as (A, S, E): ancilla, system,
environment. The basis index of |a s e> is 4a + 2s + e, with the encodings
A, S in {H -> 0, V -> 1} and E in {r -> 0, l -> 1}. Every tensor, trace and
transpose operation in this package respects this single fixed ordering;
subsystems are addressed by position (ANCILLA=0, SYSTEM=1, ENV=2).

All states are plain complex numpy arrays. Density matrices are square,
Hermitian, unit-trace and positive semidefinite within the module
tolerances; ``require_density_matrix`` enforces that contract.
"""

from __future__ import annotations

import numpy as np

ANCILLA, SYSTEM, ENV = 0, 1, 2

# structural invariants are checked at 1e-10, derived comparisons at 1e-9
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
UNITARY_TOL = 1e-10
EIG_FLOOR = -1e-9

ID2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
PHI_MINUS = np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2)
PSI_PLUS = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)
PSI_MINUS = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)

# columns: phi+, phi-, psi+, psi-
BELL_BASIS = np.column_stack([PHI_PLUS, PHI_MINUS, PSI_PLUS, PSI_MINUS])


class InvariantViolation(Exception):
    """A physical contract (Hermiticity, trace, positivity, unitarity) failed."""


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m.T)


def n_qubits(m: np.ndarray) -> int:
    """Number of qubits of a square operator or state vector."""
    dim = m.shape[0]
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(m - dagger(m))) <= tol)


def require_finite(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise InvariantViolation(f"{name}: entries must be finite")
    return m


def require_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL,
                      name: str = "matrix") -> np.ndarray:
    m = require_finite(m, name)
    dev = float(np.max(np.abs(m - dagger(m))))
    if dev > tol:
        raise InvariantViolation(f"{name}: not Hermitian (max deviation {dev:.3e} > {tol:.0e})")
    return m


def require_unitary(u: np.ndarray, tol: float = UNITARY_TOL,
                    name: str = "operator") -> np.ndarray:
    u = require_finite(u, name)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"{name}: expected a square matrix, got shape {u.shape}")
    dev = float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))))
    if dev > tol:
        raise InvariantViolation(f"{name}: not unitary (max |U^dag U - I| = {dev:.3e})")
    return u


def require_state_vector(psi: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    psi = require_finite(psi, "state vector")
    norm = float(np.sum(np.abs(psi) ** 2))
    if abs(norm - 1.0) > tol:
        raise InvariantViolation(f"state vector: norm^2 = {norm!r} deviates from 1 by > {tol:.0e}")
    return psi


def require_density_matrix(rho: np.ndarray, name: str = "state",
                           herm_tol: float = HERMITIAN_TOL,
                           trace_tol: float = TRACE_TOL,
                           eig_floor: float = EIG_FLOOR) -> np.ndarray:
    """Validate the density-matrix contract: Hermitian, unit trace, PSD."""
    rho = require_hermitian(rho, herm_tol, name)
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > trace_tol:
        raise InvariantViolation(f"{name}: trace = {tr!r} deviates from 1 by > {trace_tol:.0e}")
    w = np.linalg.eigvalsh((rho + dagger(rho)) / 2)
    if float(w.min()) < eig_floor:
        raise InvariantViolation(f"{name}: minimum eigenvalue {w.min():.3e} < {eig_floor:.0e}")
    return rho


def density(psi: np.ndarray) -> np.ndarray:
    """|psi><psi| from a normalized state vector."""
    psi = require_state_vector(np.asarray(psi, dtype=complex))
    return np.outer(psi, np.conj(psi))


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product in the fixed left-to-right subsystem order."""
    if not ops:
        raise ValueError("tensor: need at least one factor")
    out = require_finite(np.asarray(ops[0], dtype=complex))
    for op in ops[1:]:
        out = np.kron(out, require_finite(np.asarray(op, dtype=complex)))
    return out


def _subsystem_dims(rho: np.ndarray) -> list[int]:
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    return [2] * n_qubits(rho)


def partial_trace(rho: np.ndarray, keep) -> np.ndarray:
    """Reduced state on the kept subsystems (positions in the fixed order).

    Parameters
    ----------
    rho : ndarray
        Density matrix on n qubits, n inferred from the dimension.
    keep : int or iterable of int
        Subsystem positions to keep, e.g. ``(ANCILLA, SYSTEM)`` to trace
        out the environment. Must be a nonempty subset of ``range(n)``.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = _subsystem_dims(rho)
    n = len(dims)
    if isinstance(keep, (int, np.integer)):
        keep = (int(keep),)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("partial_trace: keep must be nonempty")
    for k in keep:
        if k < 0 or k >= n:
            raise ValueError(f"partial_trace: invalid subsystem {k} for {n} qubits")
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    for idx in sorted(traced, reverse=True):
        t = np.trace(t, axis1=idx, axis2=idx + len(dims))
        dims.pop(idx)
    d = int(np.prod(dims))
    return t.reshape(d, d)


def partial_transpose(rho: np.ndarray, subsystem: int) -> np.ndarray:
    """Transpose the indices of one subsystem only."""
    rho = np.asarray(rho, dtype=complex)
    dims = _subsystem_dims(rho)
    n = len(dims)
    if subsystem < 0 or subsystem >= n:
        raise ValueError(f"partial_transpose: invalid subsystem {subsystem} for {n} qubits")
    t = rho.reshape(dims + dims)
    t = np.swapaxes(t, subsystem, subsystem + n)
    d = int(np.prod(dims))
    return t.reshape(d, d)


def eig_hermitian(m: np.ndarray, tol: float = 1e-8):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues, eigenvectors) with real eigenvalues sorted in
    non-increasing order and eigenvectors as the matching columns.
    """
    m = require_hermitian(m, tol, "eig_hermitian input")
    w, v = np.linalg.eigh((m + dagger(m)) / 2)
    return w[::-1].copy(), v[:, ::-1].copy()


def expm_hermitian(h: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(-i h t) for Hermitian h, via eigendecomposition."""
    w, v = eig_hermitian(h)
    return (v * np.exp(-1j * w * t)) @ dagger(v)


def apply_unitary(rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    """U rho U^dag with a unitarity and dimension check."""
    rho = np.asarray(rho, dtype=complex)
    u = require_unitary(u)
    if u.shape[0] != rho.shape[0]:
        raise ValueError(f"apply_unitary: dim mismatch {u.shape[0]} vs {rho.shape[0]}")
    return u @ rho @ dagger(u)


def distance_up_to_phase(u: np.ndarray, v: np.ndarray) -> float:
    """Max-entry distance between u and v minimized over a global phase.

    The aligning phase is theta = -arg(Tr(v^dag u)), applied to u; the
    result is 0 exactly when u and v agree up to a global phase.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ValueError(f"distance_up_to_phase: shape mismatch {u.shape} vs {v.shape}")
    theta = -np.angle(np.trace(dagger(v) @ u))
    return float(np.max(np.abs(np.exp(1j * theta) * u - v)))
