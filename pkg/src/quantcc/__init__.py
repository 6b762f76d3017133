"""quantcc: a retargetable gate-level quantum circuit compiler.

Programs are kernels of gates bound to a hardware configuration; the
compiler decomposes, optimizes, maps, and schedules them, emitting
technology-independent cQASM and a latency-compensated timing trace.
An embedded state-vector simulator is the semantic oracle for every pass.
"""
from .decompose import (
    UniformlyControlledRotation,
    ZYZAngles,
    controlled_kernel,
    decompose_multi_controlled,
    decompose_toffoli,
    decompose_uniformly_controlled_rotation,
    qsd_cnot_count,
    qsd_decompose,
    qsd_rotation_count,
    zyz_decompose,
)
from .emit import emit_cqasm, emit_program_timing_trace, emit_timing_trace, parse_cqasm
from .ir import (
    Gate,
    GateKind,
    Kernel,
    Program,
    circuit_unitary,
    gate_unitary,
    inverse_gate,
)
from .mapping import Mapping, distance_matrix, initial_placement, route
from .optimize import (
    GateDependencyGraph,
    build_gdg,
    fuse_single_qubit_run,
    optimize_circuit,
    unitary_distance,
)
from .pipeline import CompileOptions, compile_program, compile_source
from .platform import Platform, Topology, load_platform, load_platform_file
from .schedule import (
    Schedule,
    schedule_alap,
    schedule_asap,
    schedule_resource_constrained,
    schedule_uniform_alap,
)
from .sim import (
    equivalent_up_to_permutation,
    equivalent_up_to_phase,
    simulate,
)

__version__ = "0.1.0"

__all__ = [
    "CompileOptions",
    "Gate",
    "GateDependencyGraph",
    "GateKind",
    "Kernel",
    "Mapping",
    "Platform",
    "Program",
    "Schedule",
    "Topology",
    "UniformlyControlledRotation",
    "ZYZAngles",
    "build_gdg",
    "circuit_unitary",
    "compile_program",
    "compile_source",
    "controlled_kernel",
    "decompose_multi_controlled",
    "decompose_toffoli",
    "decompose_uniformly_controlled_rotation",
    "distance_matrix",
    "emit_cqasm",
    "emit_program_timing_trace",
    "emit_timing_trace",
    "equivalent_up_to_permutation",
    "equivalent_up_to_phase",
    "fuse_single_qubit_run",
    "gate_unitary",
    "initial_placement",
    "inverse_gate",
    "load_platform",
    "load_platform_file",
    "optimize_circuit",
    "parse_cqasm",
    "qsd_cnot_count",
    "qsd_decompose",
    "qsd_rotation_count",
    "route",
    "schedule_alap",
    "schedule_asap",
    "schedule_resource_constrained",
    "schedule_uniform_alap",
    "simulate",
    "unitary_distance",
    "zyz_decompose",
]
