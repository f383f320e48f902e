"""Error-correcting codes: Pauli algebra, repetition/Shor/Steane codes,
stabilizer machinery, reliability curves, and minimal surface-code cycles."""

from .pauli import (
    PauliString,
    Syndrome,
    pauli_commutes,
    apply_pauli,
)
from .codes import (
    CodeSpec,
    RunResult,
    bit_flip_code,
    phase_flip_code,
    shor_code,
    encode_state,
    run_code,
    classical_majority,
)
from .reliability import (
    ConcatenatedFailure,
    CorrelatedLeading,
    pfail_repetition,
    pfail_concatenated,
    correlated_pfail,
    sample_repetition_failure,
    sample_concatenated_failure,
)
from .stabilizer import (
    StabilizerGroup,
    Classification,
    partition_by_stabilizers,
    classify_operator,
    check_recoverability,
)
from .surface import (
    CycleResult,
    InjectedError,
    surface_cycle,
    surface_error_table,
    loop_equivalence,
    pauli_on_sites,
    SURFACE5_SITES,
    SURFACE5_STABILIZERS,
    ARRAY_SITES,
    ARRAY_STABILIZERS,
)
from .steane import (
    STEANE_GENERATORS,
    steane_zero,
    steane_one,
    steane_logical,
    cnot_error_propagation,
    ft_t_gate,
    prepare_t_ancilla,
    FtTResult,
)

__all__ = [
    "PauliString",
    "Syndrome",
    "pauli_commutes",
    "apply_pauli",
    "CodeSpec",
    "RunResult",
    "bit_flip_code",
    "phase_flip_code",
    "shor_code",
    "encode_state",
    "run_code",
    "classical_majority",
    "ConcatenatedFailure",
    "CorrelatedLeading",
    "pfail_repetition",
    "pfail_concatenated",
    "correlated_pfail",
    "sample_repetition_failure",
    "sample_concatenated_failure",
    "StabilizerGroup",
    "Classification",
    "partition_by_stabilizers",
    "classify_operator",
    "check_recoverability",
    "CycleResult",
    "InjectedError",
    "surface_cycle",
    "surface_error_table",
    "loop_equivalence",
    "pauli_on_sites",
    "SURFACE5_SITES",
    "SURFACE5_STABILIZERS",
    "ARRAY_SITES",
    "ARRAY_STABILIZERS",
    "STEANE_GENERATORS",
    "steane_zero",
    "steane_one",
    "steane_logical",
    "cnot_error_propagation",
    "ft_t_gate",
    "prepare_t_ancilla",
    "FtTResult",
]
