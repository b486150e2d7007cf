"""Stroboscopic system-environment evolution and per-step observables.

The three qubits are the ancilla A (polarization of the detected photon),
the system S (polarization of the evolving photon) and the environment E
(path of the evolving photon), ordered (A, S, E) as in
:mod:`qstrobe.qstate`. A and S start in a Bell state (exactly, or with the
measured spurious/phase-flip admixtures), E starts in the coherent
superposition alpha |r> + sqrt(1 - alpha^2) |l>.

Each step applies a beam splitter to E followed by the conditional
``ch_anticz`` gate on (E, S); the ancilla never evolves. In the
``coherent`` regime the three-qubit state evolves unitarily, so
environment memory can feed entanglement back to the S-A pair. In the
``reset`` regime the environment is replaced by the maximally mixed state
before every step, which erases all system-environment correlations and
forces a monotonic entanglement decay.

Records keep the evolved three-qubit state of each step (for the reset
regime: the state after the step's unitary, before the next reset) plus
the S-A and E marginals, so every reported observable can be recomputed
from the stored states.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import tomography
from .gates import PolarizationBS, step_unitary, step_unitary_se
from .measures import eof, is_ppt, negativity, purity, von_neumann_entropy
from .qstate import (ANCILLA, ENV, ID2, PHI_MINUS, PHI_PLUS, SYSTEM, dagger,
                     density, eig_hermitian, partial_trace, require_density_matrix, tensor)

_KET_HV = np.array([0, 1, 0, 0], dtype=complex)
_KET_VH = np.array([0, 0, 1, 0], dtype=complex)

# measured intensity reflectivities: BS1 R/T = 42/58 (H), 45/55 (V);
# BS2 R/T = 45/55 (H), 55/45 (V)
PAPER_BS1 = (0.42, 0.45)
PAPER_BS2 = (0.45, 0.55)


@dataclass(frozen=True)
class NoiseModel:
    """Experimental imperfections of the source and the beam splitters."""

    enabled: bool = False
    bs1_r_h: float = PAPER_BS1[0]
    bs1_r_v: float = PAPER_BS1[1]
    bs2_r_h: float = PAPER_BS2[0]
    bs2_r_v: float = PAPER_BS2[1]
    spurious_fraction: float = 0.05
    phase_flip_fraction: float = 0.015
    phase_pol_offset: float = 0.0

    def __post_init__(self):
        for name in ("bs1_r_h", "bs1_r_v", "bs2_r_h", "bs2_r_v"):
            r = getattr(self, name)
            if not 0.0 < r < 1.0:
                raise ValueError(f"NoiseModel: {name} must lie in (0, 1), got {r}")
        p, q = self.spurious_fraction, self.phase_flip_fraction
        if p < 0 or q < 0 or p + q >= 1.0:
            raise ValueError(f"NoiseModel: need p, q >= 0 and p + q < 1, got p={p}, q={q}")

    @classmethod
    def paper_defaults(cls) -> "NoiseModel":
        return cls(enabled=True)


@dataclass(frozen=True)
class SimConfig:
    """Full description of one simulated experiment."""

    steps: int = 5
    alpha: float = 1 / np.sqrt(2)
    phases: tuple = ()
    regime: str = "coherent"
    noise: NoiseModel = field(default_factory=NoiseModel)
    seed: int = 0
    record_tomography: bool = False

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError(f"SimConfig: steps must be >= 0, got {self.steps}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"SimConfig: alpha must lie in [0, 1], got {self.alpha}")
        if self.regime not in ("coherent", "reset"):
            raise ValueError(f"SimConfig: unknown regime {self.regime!r}")
        if self.phases and len(self.phases) < self.steps:
            raise ValueError(f"SimConfig: got {len(self.phases)} phases for {self.steps} steps")
        if self.seed < 0:
            raise ValueError(f"SimConfig: seed must be >= 0, got {self.seed}")

    def step_phases(self) -> tuple:
        """Per-step environment phases, zero-filled; extras are ignored."""
        if not self.phases:
            return (0.0,) * self.steps
        return tuple(float(p) for p in self.phases[:self.steps])


@dataclass
class StepRecord:
    """Observables and stored states for one step of the run."""

    step: int
    rho_ase: np.ndarray
    rho_sa: np.ndarray
    rho_e: np.ndarray
    eof_sa: float
    entropy_e: float
    negativity_se: float
    ppt_se: bool
    purity_ase: float
    reconstructed_sa: np.ndarray | None = None


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi representation of a qubit channel, trace-2 normalization.

    ``matrix`` is sum_ij |i><j| (x) Lambda(|i><j|); a trace-preserving map
    has trace 2 and a completely positive one is PSD. ``kraus_ops`` are
    derived from the eigendecomposition.
    """

    matrix: np.ndarray
    kraus_ops: tuple


def bell_pair(noise: NoiseModel | None = None) -> np.ndarray:
    """S-A polarization state: |phi+><phi+|, or the measured noisy mixture.

    With noise enabled: (1-p-q) |phi+><phi+| + p/2 (|HV><HV| + |VH><VH|)
    + q |phi-><phi-|, where p is the spurious fraction and q the
    phase-flip fraction.
    """
    ideal = density(PHI_PLUS)
    if noise is None or not noise.enabled:
        return ideal
    p, q = noise.spurious_fraction, noise.phase_flip_fraction
    return ((1.0 - p - q) * ideal
            + (p / 2.0) * (density(_KET_HV) + density(_KET_VH))
            + q * density(PHI_MINUS))


def env_qubit(alpha: float) -> np.ndarray:
    """Environment path state alpha |r> + sqrt(1 - alpha^2) |l>."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"env_qubit: alpha must lie in [0, 1], got {alpha}")
    return np.array([alpha, np.sqrt(1.0 - alpha * alpha)], dtype=complex)


def initial_state(cfg: SimConfig) -> np.ndarray:
    """Three-qubit start state rho_AS (x) |chi(alpha)><chi(alpha)|."""
    rho = tensor(bell_pair(cfg.noise), density(env_qubit(cfg.alpha)))
    return require_density_matrix(rho, "initial state")


def reset_environment(rho_sa: np.ndarray) -> np.ndarray:
    """Attach a maximally mixed environment: rho_SA (x) I/2."""
    rho_sa = require_density_matrix(rho_sa, "reset input")
    if rho_sa.shape != (4, 4):
        raise ValueError(f"reset_environment: expected a two-qubit state, got {rho_sa.shape}")
    return tensor(rho_sa, ID2 / 2)


def step_bs_model(noise: NoiseModel | None, step_index: int) -> PolarizationBS | None:
    """Beam-splitter model for a 1-based step: BS1 feeds step 1, BS2 the rest."""
    if noise is None or not noise.enabled:
        return None
    if step_index <= 1:
        r_h, r_v = noise.bs1_r_h, noise.bs1_r_v
    else:
        r_h, r_v = noise.bs2_r_h, noise.bs2_r_v
    return PolarizationBS(r_h, r_v, noise.phase_pol_offset)


def _record(step: int, rho_ase: np.ndarray, with_tomography: bool) -> StepRecord:
    rho_ase = require_density_matrix(rho_ase, f"step {step} state")
    rho_sa = partial_trace(rho_ase, (ANCILLA, SYSTEM))
    rho_e = partial_trace(rho_ase, ENV)
    rho_se = partial_trace(rho_ase, (SYSTEM, ENV))
    reconstructed = None
    if with_tomography:
        joint = tomography.simulate_counts(
            rho_ase, tomography.joint_projectors_for_sa(), total=10_000)
        sa_counts = tomography.marginalize_counts_for_sa(joint)
        estimate = tomography.reconstruct_linear(
            sa_counts, tomography.two_qubit_polarization_projectors())
        reconstructed = tomography.project_to_physical(estimate)
    return StepRecord(
        step=step,
        rho_ase=rho_ase,
        rho_sa=rho_sa,
        rho_e=rho_e,
        eof_sa=eof(rho_sa),
        entropy_e=von_neumann_entropy(rho_e),
        negativity_se=negativity(rho_se, 1),
        ppt_se=is_ppt(rho_se, 1),
        purity_ase=purity(rho_ase),
        reconstructed_sa=reconstructed,
    )


def run(cfg: SimConfig) -> list[StepRecord]:
    """Run the configured experiment; returns steps + 1 records (step 0 first).

    Deterministic for a given config. Coherent regime: the three-qubit
    state evolves as U rho U^dag per step. Reset regime: each step starts
    from rho_SA (x) I/2 and rho_SA is updated to the environment-traced
    result; the recorded state is the evolved one before the next reset.
    """
    phases = cfg.step_phases()
    rho = initial_state(cfg)
    records = [_record(0, rho, cfg.record_tomography)]
    for k in range(1, cfg.steps + 1):
        u = step_unitary(phases[k - 1], step_bs_model(cfg.noise, k))
        if cfg.regime == "coherent":
            rho = u @ rho @ dagger(u)
        else:
            rho_sa = partial_trace(rho, (ANCILLA, SYSTEM))
            rho = u @ reset_environment(rho_sa) @ dagger(u)
        records.append(_record(k, rho, cfg.record_tomography))
    return records


def _choi_of_map(channel) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) Lambda(|i><j|) from a map on 2x2 operators."""
    choi = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            basis_op = np.zeros((2, 2), dtype=complex)
            basis_op[i, j] = 1.0
            out = channel(basis_op)
            choi[2 * i:2 * i + 2, 2 * j:2 * j + 2] = out
    return choi


def kraus_from_choi(choi: np.ndarray, tol: float = 1e-12) -> tuple:
    """Kraus operators from the Choi eigendecomposition (weights > tol kept)."""
    w, v = eig_hermitian((choi + dagger(choi)) / 2)
    ops = []
    for lam, vec in zip(w, v.T):
        if lam > tol:
            # Choi index is 2*input + output, so columns of K vary the input
            ops.append(np.sqrt(lam) * vec.reshape(2, 2).T)
    return tuple(ops)


def effective_channel(cfg: SimConfig, step: int) -> ChoiMatrix:
    """Choi matrix of the map induced on S by the configured dynamics.

    Coherent regime: the cumulative map after ``step`` steps acting on a
    factorized input rho_S (x) |chi(alpha)><chi(alpha)| (``step`` may be 0,
    giving the identity channel). Reset regime: the single-step map at the
    1-based index ``step`` with the environment in its per-step marginal
    I/2. Both are completely positive and trace preserving.
    """
    phases = cfg.step_phases()
    if step < 0 or step > cfg.steps:
        raise ValueError(f"effective_channel: step {step} outside run of {cfg.steps} steps")

    if cfg.regime == "coherent":
        unitaries = [step_unitary_se(phases[k - 1], step_bs_model(cfg.noise, k))
                     for k in range(1, step + 1)]
        rho_env = density(env_qubit(cfg.alpha))

        def channel(op: np.ndarray) -> np.ndarray:
            joint = tensor(op, rho_env)
            for u in unitaries:
                joint = u @ joint @ dagger(u)
            return partial_trace(joint, 0)
    else:
        if step < 1:
            raise ValueError("effective_channel: reset regime needs a step index >= 1")
        u = step_unitary_se(phases[step - 1], step_bs_model(cfg.noise, step))

        def channel(op: np.ndarray) -> np.ndarray:
            joint = u @ tensor(op, ID2 / 2) @ dagger(u)
            return partial_trace(joint, 0)

    choi = _choi_of_map(channel)
    return ChoiMatrix(matrix=choi, kraus_ops=kraus_from_choi(choi))


def ideal_config(steps: int = 5, regime: str = "coherent", **kwargs) -> SimConfig:
    """The reference configuration: alpha = 1/sqrt2, all phases 0, no noise."""
    return SimConfig(steps=steps, regime=regime, **kwargs)


def paper_noise_config(steps: int = 5, regime: str = "coherent", **kwargs) -> SimConfig:
    """Reference configuration with the measured imperfections enabled."""
    return SimConfig(steps=steps, regime=regime, noise=NoiseModel.paper_defaults(), **kwargs)
