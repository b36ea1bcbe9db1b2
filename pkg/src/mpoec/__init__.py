"""Quantum circuit equivalence checking with matrix product operators."""

from __future__ import annotations

from .bench import (
    BenchSpec,
    generate_two_local,
    inject_error,
    inject_missing_gates,
    inject_permutation,
    inject_rotation_offset,
    rewrite_to_heron,
    run_scaling_study,
)
from .checker import EQUIVALENT, NON_EQUIVALENT, CheckConfig, CheckReport, check_equivalence
from .circuit import Circuit, dagger
from .dag import CircuitDag, build_dag, extract_temporal_zone
from .gates import CATALOG, Gate, GateMPO, decompose_gate_mpo, gate_matrix, tensorize
from .mpo import MPO, Side, apply_1qg, apply_long_range, apply_zone, identity_mpo, trace
from .oracle import DenseUnitary, dense_unitary, oracle_equivalent
from .qasm import QasmError, emit_qasm, load_qasm, parse_qasm
from .tensor import NumericError, SvdResult, contract, permute, reshape, svd_truncated

__version__ = "0.1.0"

__all__ = [
    "BenchSpec",
    "CATALOG",
    "CheckConfig",
    "CheckReport",
    "Circuit",
    "CircuitDag",
    "DenseUnitary",
    "EQUIVALENT",
    "Gate",
    "GateMPO",
    "MPO",
    "NON_EQUIVALENT",
    "NumericError",
    "QasmError",
    "Side",
    "SvdResult",
    "apply_1qg",
    "apply_long_range",
    "apply_zone",
    "build_dag",
    "check_equivalence",
    "contract",
    "dagger",
    "decompose_gate_mpo",
    "dense_unitary",
    "emit_qasm",
    "extract_temporal_zone",
    "gate_matrix",
    "generate_two_local",
    "identity_mpo",
    "inject_error",
    "inject_missing_gates",
    "inject_permutation",
    "inject_rotation_offset",
    "load_qasm",
    "oracle_equivalent",
    "parse_qasm",
    "permute",
    "reshape",
    "rewrite_to_heron",
    "run_scaling_study",
    "svd_truncated",
    "tensorize",
    "trace",
]
