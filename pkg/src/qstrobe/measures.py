"""Entanglement and information measures.

Concurrence follows the spin-flip construction: lambda_i are the square
roots of the eigenvalues of rho rho~ in non-increasing order, with
rho~ = (sigma_y x sigma_y) rho* (sigma_y x sigma_y), and

    C = max(0, lambda_1 - lambda_2 - lambda_3 - lambda_4).

``concurrence_hermitian`` evaluates the same quantity from the spectrum of
the Hermitian matrix R = sqrt(sqrt(rho) rho~ sqrt(rho)); the two routes
agree to numerical precision and the entanglement of formation is

    EOF = h((1 + sqrt(1 - C^2)) / 2),   h = binary entropy (base 2).

Entropies use base-2 logarithms throughout, so single-qubit entropies and
EOF both live in [0, 1].
"""

from __future__ import annotations

import numpy as np

from .qstate import (PAULI_Y, dagger, eig_hermitian, partial_transpose,
                     require_density_matrix, require_state_vector)

_YY = np.kron(PAULI_Y, PAULI_Y)

# |eigenvalues| of rho rho~ below this are roundoff around 0 and are
# floored to exactly 0 before the square root (which would otherwise
# amplify 1e-17 noise to 3e-9 in the lambdas); genuinely negative real
# parts beyond it trigger the Hermitian fallback
_SPECTRUM_CLAMP = 1e-12


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """rho~ = (sigma_y x sigma_y) rho* (sigma_y x sigma_y)."""
    return _YY @ np.conj(rho) @ _YY


def _sqrtm_psd(m: np.ndarray) -> np.ndarray:
    w, v = eig_hermitian(m)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ dagger(v)


def _require_two_qubits(rho: np.ndarray, name: str) -> np.ndarray:
    rho = require_density_matrix(rho, name)
    if rho.shape != (4, 4):
        raise ValueError(f"{name}: expected a two-qubit (4x4) state, got {rho.shape}")
    return rho


def _lambda_sum(ev: np.ndarray) -> float:
    ev = np.where(ev < _SPECTRUM_CLAMP, 0.0, ev)
    lam = np.sort(np.sqrt(ev))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_hermitian(rho: np.ndarray) -> float:
    """Concurrence from the spectrum of R = sqrt(sqrt(rho) rho~ sqrt(rho)).

    The eigenvalues of R are the square roots of those of the positive
    matrix sqrt(rho) rho~ sqrt(rho).
    """
    rho = _require_two_qubits(rho, "concurrence")
    s = _sqrtm_psd(rho)
    w, _ = eig_hermitian(s @ spin_flip(rho) @ s)
    return _lambda_sum(np.clip(w, 0.0, None))


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit state, in [0, 1]."""
    rho = _require_two_qubits(rho, "concurrence")
    ev = np.real(np.linalg.eigvals(rho @ spin_flip(rho)))
    if float(ev.min()) < -_SPECTRUM_CLAMP:
        # rho rho~ spectrum drifted genuinely negative; use the Hermitian route
        return concurrence_hermitian(rho)
    return _lambda_sum(np.clip(ev, 0.0, None))


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2(1-x), with h(0) = h(1) = 0."""
    out = 0.0
    for v in (x, 1.0 - x):
        if v > 0.0:
            out -= v * np.log2(v)
    return float(out)


def eof(rho: np.ndarray) -> float:
    """Entanglement of formation of a two-qubit state, in [0, 1]."""
    c = concurrence(rho)
    return binary_entropy((1.0 + np.sqrt(max(0.0, 1.0 - c * c))) / 2.0)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """-Tr[rho log2 rho] in bits; eigenvalues in [-1e-9, 0) count as 0."""
    rho = require_density_matrix(rho, "entropy input")
    w, _ = eig_hermitian(rho)
    w = np.clip(w, 0.0, None)
    nz = w[w > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def negativity(rho: np.ndarray, subsystem: int) -> float:
    """Sum of |negative eigenvalues| of the partial transpose over one side."""
    rho = require_density_matrix(rho, "negativity input")
    w = np.linalg.eigvalsh(partial_transpose(rho, subsystem))
    return float(-np.sum(w[w < 0.0])) + 0.0


def is_ppt(rho: np.ndarray, subsystem: int) -> bool:
    """True iff the partial transpose has minimum eigenvalue >= -1e-9."""
    rho = require_density_matrix(rho, "is_ppt input")
    w = np.linalg.eigvalsh(partial_transpose(rho, subsystem))
    return bool(float(w.min()) >= -1e-9)


def fidelity(rho: np.ndarray, target: np.ndarray) -> float:
    """<target|rho|target> for a pure target state vector."""
    rho = require_density_matrix(rho, "fidelity input")
    target = require_state_vector(np.asarray(target, dtype=complex))
    if target.shape[0] != rho.shape[0]:
        raise ValueError(f"fidelity: dim mismatch {target.shape[0]} vs {rho.shape[0]}")
    return float(np.real(np.conj(target) @ rho @ target))


def purity(rho: np.ndarray) -> float:
    """Tr[rho^2]."""
    return float(np.real(np.trace(rho @ rho)))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """(1/2) ||a - b||_1 for Hermitian a, b."""
    w = np.linalg.eigvalsh(np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex))
    return float(0.5 * np.sum(np.abs(w)))
