"""Simulated projective state tomography and linear-inversion reconstruction.

The measurement pipeline mirrors the optical experiment: product
projections are counted, path (E) or polarization (S-A) outcomes are
summed to marginalize the joint counts, and the state is recovered by
linear inversion over an informationally complete projector set, followed
by a projection back onto the physical state space when shot noise pushes
the estimate off it.

Single-qubit projector sets use the minimal four states |0>, |1>,
(|0>+|1>)/sqrt2 and (|0>-i|1>)/sqrt2, labelled (H, V, D, L) for
polarization qubits and (r, l, d, c) for the path qubit.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .qstate import BELL_BASIS, dagger, eig_hermitian, require_density_matrix, tensor

POLARIZATION_LABELS = ("H", "V", "D", "L")
PATH_LABELS = ("r", "l", "d", "c")

_KET0 = np.array([1, 0], dtype=complex)
_KET1 = np.array([0, 1], dtype=complex)
_KETP = np.array([1, 1], dtype=complex) / np.sqrt(2)
_KETL = np.array([1, -1j], dtype=complex) / np.sqrt(2)
_KETM = np.array([1, -1], dtype=complex) / np.sqrt(2)
_KETR = np.array([1, 1j], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class ProjectorSet:
    """Labelled rank-one projectors given by normalized state vectors."""

    labels: tuple
    states: tuple

    def __post_init__(self):
        if len(self.labels) != len(self.states):
            raise ValueError("ProjectorSet: labels and states must pair up")
        for s in self.states:
            if abs(np.linalg.norm(s) - 1.0) > 1e-12:
                raise ValueError("ProjectorSet: projector states must be normalized")

    @property
    def dim(self) -> int:
        return int(self.states[0].shape[0])

    def __len__(self) -> int:
        return len(self.labels)

    def items(self):
        return zip(self.labels, self.states)


@dataclass(frozen=True)
class CountTable:
    """Per-projector counts with the per-projector total they were drawn at."""

    labels: tuple
    counts: np.ndarray
    total: int
    seed: int | None = None

    def __post_init__(self):
        if len(self.labels) != len(self.counts):
            raise ValueError("CountTable: labels and counts must pair up")
        if self.total <= 0:
            raise ValueError("CountTable: total must be positive")
        if np.any(np.asarray(self.counts) < 0):
            raise ValueError("CountTable: counts must be non-negative")

    def as_dict(self) -> dict:
        return dict(zip(self.labels, self.counts))


def qubit_projectors(labels: tuple = POLARIZATION_LABELS) -> ProjectorSet:
    """Minimal informationally complete single-qubit set (4 projectors)."""
    if len(labels) != 4:
        raise ValueError("qubit_projectors: need exactly 4 labels")
    return ProjectorSet(tuple(labels), (_KET0, _KET1, _KETP, _KETL))


def pauli6_projectors(labels: tuple = ("H", "V", "D", "A", "L", "R")) -> ProjectorSet:
    """All six Pauli eigenstates (overcomplete single-qubit set)."""
    if len(labels) != 6:
        raise ValueError("pauli6_projectors: need exactly 6 labels")
    return ProjectorSet(tuple(labels), (_KET0, _KET1, _KETP, _KETM, _KETL, _KETR))


def _as_parts(label) -> tuple:
    return label if isinstance(label, tuple) else (label,)


def product_projectors(*sets: ProjectorSet) -> ProjectorSet:
    """All products of the given single- or multi-qubit sets.

    Labels are flattened tuples of the component labels.
    """
    if not sets:
        raise ValueError("product_projectors: need at least one set")
    labels, states = [], []
    for combo in product(*(list(s.items()) for s in sets)):
        lab = tuple(part for l, _ in combo for part in _as_parts(l))
        labels.append(lab)
        states.append(tensor(*(v for _, v in combo)).ravel())
    return ProjectorSet(tuple(labels), tuple(states))


def two_qubit_polarization_projectors() -> ProjectorSet:
    """The 16 polarization product projectors for S-A tomography."""
    q = qubit_projectors()
    return product_projectors(q, q)


def path_projectors() -> ProjectorSet:
    return qubit_projectors(PATH_LABELS)


def joint_projectors_for_env(e_set: ProjectorSet | None = None) -> ProjectorSet:
    """(A, S, E) projections for environment tomography.

    The polarization qubits are projected onto the computational products
    HH, HV, VH, VV while each E projector of ``e_set`` is measured.
    """
    e_set = e_set or path_projectors()
    comp = ProjectorSet(("H", "V"), (_KET0, _KET1))
    return product_projectors(comp, comp, e_set)


def joint_projectors_for_sa(sa_set: ProjectorSet | None = None) -> ProjectorSet:
    """(A, S, E) projections for S-A tomography: E is projected onto r and l."""
    sa_set = sa_set or two_qubit_polarization_projectors()
    path_comp = ProjectorSet(("r", "l"), (_KET0, _KET1))
    return product_projectors(sa_set, path_comp)


def simulate_counts(rho: np.ndarray, ps: ProjectorSet, total: int,
                    noise: str = "none", seed: int | None = None) -> CountTable:
    """Expected (or Poisson-sampled) counts total * <P|rho|P> per projector."""
    rho = require_density_matrix(rho, "tomography input")
    if ps.dim != rho.shape[0]:
        raise ValueError(f"simulate_counts: projector dim {ps.dim} vs state dim {rho.shape[0]}")
    if total <= 0:
        raise ValueError("simulate_counts: total must be positive")
    probs = np.array([np.real(np.conj(v) @ rho @ v) for v in ps.states])
    expected = total * np.clip(probs, 0.0, None)
    if noise == "none":
        return CountTable(ps.labels, expected, total)
    if noise == "poisson":
        if seed is None:
            raise ValueError("simulate_counts: poisson noise requires a seed")
        rng = np.random.default_rng(seed)
        return CountTable(ps.labels, rng.poisson(expected).astype(float), total, seed)
    raise ValueError(f"simulate_counts: unknown noise mode {noise!r}")


def measurement_matrix(ps: ProjectorSet) -> np.ndarray:
    """Rows map a row-major flattened rho to Tr(P rho), one row per projector."""
    rows = []
    for v in ps.states:
        p = np.outer(v, np.conj(v))
        rows.append(p.T.ravel())
    return np.array(rows)


def reconstruct_linear(counts: CountTable, ps: ProjectorSet) -> np.ndarray:
    """Linear-inversion estimate: Hermitian, unit trace, possibly non-PSD.

    Solves Tr(P_i rho) = counts_i / total in the least-squares sense over
    an informationally complete projector set.
    """
    if len(counts.labels) != len(ps.labels):
        raise ValueError("reconstruct_linear: counts and projectors must pair up")
    values = np.asarray(counts.counts, dtype=float)
    if tuple(counts.labels) != tuple(ps.labels):
        by_label = dict(zip(counts.labels, values))
        if set(by_label) != set(ps.labels):
            raise ValueError("reconstruct_linear: count labels do not match the projector set")
        values = np.array([by_label[lab] for lab in ps.labels])
    d = ps.dim
    a = measurement_matrix(ps)
    if np.linalg.matrix_rank(a, tol=1e-10) < d * d:
        raise ValueError("reconstruct_linear: projector set is not informationally complete")
    probs = values / counts.total
    x, *_ = np.linalg.lstsq(a, probs.astype(complex), rcond=None)
    rho = x.reshape(d, d)
    rho = (rho + dagger(rho)) / 2
    tr = float(np.real(np.trace(rho)))
    if abs(tr) < 1e-9:
        raise ValueError("reconstruct_linear: reconstructed trace is numerically zero")
    return rho / tr


def project_to_physical(m: np.ndarray) -> np.ndarray:
    """Nearest density matrix (2-norm, fixed trace) to a Hermitian estimate.

    Eigenvalues are sorted, negative ones truncated to zero and the
    deficit redistributed uniformly over the surviving ones.
    """
    m = np.asarray(m, dtype=complex)
    m = (m + dagger(m)) / 2
    tr = float(np.real(np.trace(m)))
    if abs(tr) < 1e-9:
        raise ValueError("project_to_physical: input trace is numerically zero")
    w, v = eig_hermitian(m / tr)
    d = len(w)
    out = np.zeros(d)
    for k in range(d, 0, -1):
        shift = (1.0 - float(np.sum(w[:k]))) / k
        if w[k - 1] + shift > 0.0:
            out[:k] = w[:k] + shift
            break
    rho = (v * out) @ dagger(v)
    return (rho + dagger(rho)) / 2


def _group_sum(counts: CountTable, key_fn, cover_fn, expected_cover: set,
               what: str) -> tuple[tuple, np.ndarray]:
    groups: dict = {}
    covers: dict = {}
    for lab, c in zip(counts.labels, counts.counts):
        k = key_fn(lab)
        groups[k] = groups.get(k, 0.0) + float(c)
        covers.setdefault(k, set()).add(cover_fn(lab))
    for k, seen in covers.items():
        if seen != expected_cover:
            missing = sorted(expected_cover - seen)
            raise ValueError(f"marginalize: incomplete {what} coverage for {k}: missing {missing}")
    labels = tuple(groups.keys())
    return labels, np.array([groups[k] for k in labels])


def marginalize_counts_for_env(counts: CountTable) -> CountTable:
    """E counts from joint (A, S, E) counts: sum the four polarization outcomes.

    Joint labels must be (a, s, e) triples with (a, s) covering the full
    computational set {H, V}^2 for every E projector.
    """
    cover = {(a, s) for a in ("H", "V") for s in ("H", "V")}
    labels, sums = _group_sum(counts, key_fn=lambda lab: lab[2],
                              cover_fn=lambda lab: (lab[0], lab[1]),
                              expected_cover=cover, what="polarization")
    return CountTable(labels, sums, counts.total, counts.seed)


def marginalize_counts_for_sa(counts: CountTable) -> CountTable:
    """S-A counts from joint counts with E projected onto r and l."""
    cover = {"r", "l"}
    labels, sums = _group_sum(counts, key_fn=lambda lab: (lab[0], lab[1]),
                              cover_fn=lambda lab: lab[2],
                              expected_cover=cover, what="path")
    return CountTable(labels, sums, counts.total, counts.seed)


def to_bell_basis(rho: np.ndarray) -> np.ndarray:
    """Two-qubit state expressed in the (phi+, phi-, psi+, psi-) basis."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"to_bell_basis: expected a 4x4 matrix, got {rho.shape}")
    return dagger(BELL_BASIS) @ rho @ BELL_BASIS


def bell_offdiagonal_weight(rho: np.ndarray) -> float:
    """Sum of |off-diagonal| entries of the Bell-basis representation."""
    rb = to_bell_basis(rho)
    return float(np.sum(np.abs(rb)) - np.sum(np.abs(np.diag(rb))))
