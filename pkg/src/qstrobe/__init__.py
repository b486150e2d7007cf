"""Exact few-qubit simulator of stroboscopic open-system dynamics.

A system qubit S, entangled with a shielded ancilla A, collides
step by step with a single-qubit environment E through a conditional
gate compiled from a transverse-Ising coupling. Coherent environment
evolution feeds entanglement back to the S-A pair (revivals witnessing
non-Markovianity); resetting E to the maximally mixed state before each
step makes the decay monotonic. The package also provides the
entanglement measures, the Ising gate compiler and a simulated
tomography pipeline for the full measurement chain.
"""

from .dynamics import (ChoiMatrix, NoiseModel, SimConfig, StepRecord,
                       effective_channel, ideal_config, initial_state,
                       paper_noise_config, reset_environment, run)
from .gates import (PolarizationBS, ch_anticz, controlled_rotation,
                    env_beam_splitter, env_beam_splitter_unbalanced, rotation,
                    step_unitary)
from .ising import (CompiledGate, IsingParams, block_hamiltonians,
                    block_propagators, compile_controlled_rotation,
                    conditional_gate_from_ising, solve_rotation_params,
                    trotterized_total_propagator)
from .measures import (concurrence, concurrence_hermitian, eof, fidelity,
                       is_ppt, negativity, purity, trace_distance,
                       von_neumann_entropy)
from .qstate import (ANCILLA, ENV, SYSTEM, InvariantViolation, apply_unitary,
                     distance_up_to_phase, eig_hermitian, expm_hermitian,
                     partial_trace, partial_transpose, tensor)
from .tomography import (CountTable, ProjectorSet, project_to_physical,
                         reconstruct_linear, simulate_counts)

__version__ = "0.1.0"

__all__ = [
    "ANCILLA", "SYSTEM", "ENV",
    "InvariantViolation",
    "tensor", "partial_trace", "partial_transpose",
    "eig_hermitian", "expm_hermitian", "apply_unitary", "distance_up_to_phase",
    "env_beam_splitter", "env_beam_splitter_unbalanced", "rotation",
    "controlled_rotation", "ch_anticz", "step_unitary", "PolarizationBS",
    "IsingParams", "CompiledGate", "block_hamiltonians", "block_propagators",
    "solve_rotation_params", "compile_controlled_rotation",
    "conditional_gate_from_ising", "trotterized_total_propagator",
    "concurrence", "concurrence_hermitian", "eof", "von_neumann_entropy",
    "negativity", "is_ppt", "fidelity", "purity", "trace_distance",
    "NoiseModel", "SimConfig", "StepRecord", "ChoiMatrix",
    "initial_state", "run", "reset_environment", "effective_channel",
    "ideal_config", "paper_noise_config",
    "ProjectorSet", "CountTable", "simulate_counts", "reconstruct_linear",
    "project_to_physical",
    "__version__",
]
