"""Gate constructors for the stroboscopic system-environment circuit.

Two-qubit gates that couple the environment to the system are returned as
4x4 matrices in (E, S) ordering: the environment (control) qubit is the
high bit, basis index 2e + s. ``step_unitary`` embeds one full evolution
block into the global (A, S, E) ordering of :mod:`qstrobe.qstate`.

One step of the simulated dynamics is the block

    conditional gate  .  (beam splitter on E)

i.e. the environment mode mixing acts first, then the controlled gate.
The conditional gate actually driving the dynamics is ``ch_anticz``: a
sigma_z kick on S when E is in |r> and a Hadamard on S when E is in |l>.
Left-multiplying it by I_E (x) sigma_z gives the conditional y-rotation
``controlled_rotation(-pi/4)``; right-multiplying gives
``controlled_rotation(+pi/4)`` (the conditional sigma_x H form). The
angle of the left-multiplied equivalence is recorded in
``CH_ANTICZ_EQUIV_ANGLE``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import HADAMARD, ID2, PAULI_Y, PAULI_Z

# conditional block of (I_E x sigma_z) . ch_anticz() is R(this angle)
CH_ANTICZ_EQUIV_ANGLE = -np.pi / 4

_SWAP = np.array([[1, 0, 0, 0],
                  [0, 0, 1, 0],
                  [0, 1, 0, 0],
                  [0, 0, 0, 1]], dtype=complex)


def env_beam_splitter(phi: float) -> np.ndarray:
    """Environment beam splitter: |r> -> (|r> + e^{i phi}|l>)/sqrt2,
    |l> -> (|r> - e^{i phi}|l>)/sqrt2. Equals the Hadamard at phi = 0."""
    if not np.isfinite(phi):
        raise ValueError("env_beam_splitter: phi must be finite")
    s = 1 / np.sqrt(2)
    e = np.exp(1j * phi)
    return np.array([[s, s], [s * e, -s * e]], dtype=complex)


def env_beam_splitter_unbalanced(t_amp: float, r_amp: float, phi: float) -> np.ndarray:
    """Beam splitter with unequal transmission/reflection amplitudes.

    Columns are (t, r e^{i phi}) and (r, -t e^{i phi}); reduces to
    ``env_beam_splitter(phi)`` at t = r = 1/sqrt2.
    """
    if t_amp < 0 or r_amp < 0:
        raise ValueError("env_beam_splitter_unbalanced: amplitudes must be non-negative")
    if abs(t_amp**2 + r_amp**2 - 1.0) > 1e-12:
        raise ValueError("env_beam_splitter_unbalanced: t_amp^2 + r_amp^2 must equal 1")
    e = np.exp(1j * phi)
    return np.array([[t_amp, r_amp], [r_amp * e, -t_amp * e]], dtype=complex)


def rotation(phi: float) -> np.ndarray:
    """Single-qubit rotation cos(phi) I - i sin(phi) sigma_y (real-valued)."""
    return np.cos(phi) * ID2 - 1j * np.sin(phi) * PAULI_Y


def controlled_rotation(phi: float) -> np.ndarray:
    """|r><r|_E (x) I_S + |l><l|_E (x) R(phi), 4x4 in (E, S) order."""
    g = np.zeros((4, 4), dtype=complex)
    g[:2, :2] = ID2
    g[2:, 2:] = rotation(phi)
    return g


def ch_anticz() -> np.ndarray:
    """|r><r|_E (x) sigma_z^S + |l><l|_E (x) H^S, 4x4 in (E, S) order.

    The composition of a controlled Hadamard with an anti-controlled Z
    (Z fires when E is in |r>).
    """
    g = np.zeros((4, 4), dtype=complex)
    g[:2, :2] = PAULI_Z
    g[2:, 2:] = HADAMARD
    return g


def swap_pair(op: np.ndarray) -> np.ndarray:
    """Reverse the qubit order of a two-qubit operator, (E,S) <-> (S,E)."""
    if op.shape != (4, 4):
        raise ValueError(f"swap_pair: expected a 4x4 matrix, got {op.shape}")
    return _SWAP @ op @ _SWAP


@dataclass(frozen=True)
class PolarizationBS:
    """Beam splitter whose reflectivity depends on the S polarization.

    ``reflectivity_h``/``reflectivity_v`` are the intensity reflectivities
    seen by H- and V-polarized light; ``v_phase_offset`` is an extra
    environment phase picked up by the V component only (the glass-plate
    phases are not perfectly polarization independent).
    """

    reflectivity_h: float
    reflectivity_v: float
    v_phase_offset: float = 0.0

    def __post_init__(self):
        for name in ("reflectivity_h", "reflectivity_v"):
            r = getattr(self, name)
            if not 0.0 < r < 1.0:
                raise ValueError(f"PolarizationBS: {name} must lie in (0, 1), got {r}")

    def mode_mixer(self, phi: float, polarization: int) -> np.ndarray:
        """2x2 E-mode mixer seen by polarization 0 (H) or 1 (V)."""
        r = self.reflectivity_h if polarization == 0 else self.reflectivity_v
        shift = 0.0 if polarization == 0 else self.v_phase_offset
        return env_beam_splitter_unbalanced(np.sqrt(1 - r), np.sqrt(r), phi + shift)


def _bs_on_se(phi: float, bs_model: PolarizationBS | None) -> np.ndarray:
    """Beam splitter acting on E, as a 4x4 in (S, E) order."""
    if bs_model is None:
        return np.kron(ID2, env_beam_splitter(phi))
    out = np.zeros((4, 4), dtype=complex)
    out[:2, :2] = bs_model.mode_mixer(phi, 0)
    out[2:, 2:] = bs_model.mode_mixer(phi, 1)
    return out


def step_unitary_se(phi: float, bs_model: PolarizationBS | None = None) -> np.ndarray:
    """One evolution block on the (S, E) pair, 4x4 with S as the high bit.

    Applies the environment beam splitter (balanced, or conditioned on the
    S polarization for ``PolarizationBS``) followed by ``ch_anticz``.
    """
    return swap_pair(ch_anticz()) @ _bs_on_se(phi, bs_model)


def step_unitary(phi: float, bs_model: PolarizationBS | None = None) -> np.ndarray:
    """Full 8x8 step propagator in the global (A, S, E) ordering.

    The ancilla is untouched: I_A (x) step_unitary_se(phi, bs_model).
    """
    return np.kron(ID2, step_unitary_se(phi, bs_model))
