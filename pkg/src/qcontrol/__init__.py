"""Simulating controlled unitaries: circuit-model limits and subspace constructions."""

__version__ = "0.1.0"

from .circuit import (
    BlackboxGate,
    CircuitSandwich,
    control_u,
    global_phase_equivalent,
    known_unitary_sandwich,
    reduced_channel_kraus,
    sandwich_operator,
)
from .constructions import (
    PermutationGate,
    PhotonState,
    blackbox_stage_matrix,
    classical_control,
    classical_control_quantum,
    extend,
    interferometer_apply,
    kitaev_control,
    kitaev_induced,
)
from .linalg import direct_sum, expi_hermitian, is_unitary, kron, standard_gates
from .nogo import (
    ObstructionPoint,
    adversarial_search,
    ancilla_ladder,
    control_phase_distinguishability,
    exact_realization_residual,
    minimize_obstruction,
    phase_covariance_check,
    phase_opt_process_fidelity,
    projected_obstruction_residual,
    vector_obstruction_residual,
)
from .optimize import MinimizerConfig, SearchReport, multistart_minimize, params_to_unitary
