"""The compilation pipeline: decompose -> optimize -> map -> schedule -> emit.

Shared by the CLI and any host-language binding so both produce identical
artifacts for identical inputs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .decompose import decompose_toffoli, qsd_decompose
from .emit import emit_cqasm, emit_program_timing_trace, parse_cqasm
from .errors import InputError
from .examples import build_example
from .ir import Gate, Kernel, Program
from .mapping import Mapping, initial_placement, route
from .optimize import DEFAULT_EPSILON, DEFAULT_WINDOW, optimize_circuit
from .platform import Platform, Topology
from .schedule import (
    Schedule,
    schedule_alap,
    schedule_asap,
    schedule_resource_constrained,
    schedule_uniform_alap,
)

PASS_ORDER = ("decompose", "optimize", "map", "schedule")
SCHEDULE_MODES = ("asap", "alap", "uniform")


@dataclass
class CompileOptions:
    passes: tuple[str, ...] = PASS_ORDER
    schedule_mode: str = "asap"
    resource_constrained: bool = False
    epsilon: float = DEFAULT_EPSILON
    window: int = DEFAULT_WINDOW
    out_cqasm: str | None = None
    out_timing: str | None = None
    report_path: str | None = None
    timing_format: str = "tsv"

    def __post_init__(self):
        for p in self.passes:
            if p not in PASS_ORDER:
                raise ValueError(f"unknown pass {p!r}")
        if "schedule" in self.passes and self.schedule_mode not in SCHEDULE_MODES:
            raise ValueError(f"unknown schedule mode {self.schedule_mode!r}")


@dataclass
class PassReport:
    name: str
    gate_count: int
    two_qubit_count: int
    depth: int
    swaps_added: int = 0
    makespan: int | None = None


@dataclass
class CompileResult:
    program: Program
    schedules: list[Schedule | None] | None = None
    reports: list[PassReport] = field(default_factory=list)
    artifacts: dict[str, str] = field(default_factory=dict)
    placement_exact: bool | None = None
    initial_mapping: Mapping | None = None
    final_mapping: Mapping | None = None


def _measure(program: Program, name: str, swaps: int = 0,
             schedules=None) -> PassReport:
    gates = program.all_gates()
    depth = sum(
        schedule_asap(k.gates, program.platform).makespan for k in program.kernels
    )
    makespan = None
    if schedules is not None:
        makespan = sum(s.makespan for s in schedules if s is not None)
    return PassReport(
        name=name,
        gate_count=len(gates),
        two_qubit_count=sum(1 for g in gates if len(g.operands) == 2),
        depth=depth,
        swaps_added=swaps,
        makespan=makespan,
    )


def _rebuild(program: Program, kernel_gatelists: list[list[Gate]]) -> Program:
    out = Program(program.name, program.qubit_count, program.platform)
    for kernel, gates in zip(program.kernels, kernel_gatelists):
        k = Kernel(kernel.name, kernel.qubit_count, kernel.platform, kernel.iterations)
        k.directives = list(kernel.directives)
        for g in gates:
            k.add(g)
        out.kernels.append(k)
    return out


_MAX_DECOMPOSE_ROUNDS = 16


def _decompose_once(gates: list[Gate], platform: Platform | None) -> tuple[list[Gate], bool]:
    out: list[Gate] = []
    changed = False
    for g in gates:
        if platform is not None and platform.has_decomposition(g):
            out.extend(platform.apply_custom_decomposition(g))
            changed = True
        elif g.name == "toffoli":
            out.extend(decompose_toffoli(g))
            changed = True
        elif len(g.operands) > 2:
            matrix = platform.gate_matrix(g) if platform is not None else None
            if matrix is None:
                raise InputError(
                    f"cannot lower {g.text()}: no decomposition rule and no matrix"
                )
            out.extend(qsd_decompose(matrix, list(g.operands)))
            changed = True
        else:
            out.append(g)
    return out, changed


def run_decompose(program: Program) -> Program:
    """Lower every kernel to <=2-operand gates: platform rules, the Toffoli
    network, and matrix synthesis, iterated together to a fixpoint."""
    platform = program.platform
    new_lists = []
    for kernel in program.kernels:
        gates = list(kernel.gates)
        for _round in range(_MAX_DECOMPOSE_ROUNDS):
            gates, changed = _decompose_once(gates, platform)
            if not changed:
                break
        else:
            raise InputError(
                f"kernel {kernel.name!r}: gate decomposition did not reach a fixpoint"
            )
        new_lists.append(gates)
    return _rebuild(program, new_lists)


def run_optimize(program: Program, epsilon: float, window: int) -> Program:
    new_lists = [
        optimize_circuit(k.gates, epsilon, window, program.platform)
        for k in program.kernels
    ]
    return _rebuild(program, new_lists)


def run_map(program: Program) -> tuple[Program, int, "initial_placement", Mapping]:
    """Place once over the whole program, then route kernel by kernel,
    threading the evolving mapping through kernel boundaries."""
    platform = program.platform
    topology = platform.topology if platform is not None else Topology.complete(program.qubit_count)
    placement = initial_placement(program.all_gates(), topology)
    mapping: Mapping = placement.mapping
    swaps = 0
    width = max(program.qubit_count, topology.qubit_count)
    out = Program(program.name, width, platform)
    for kernel in program.kernels:
        result = route(kernel.gates, topology, mapping, platform)
        mapping = result.final_mapping
        swaps += result.swaps_added
        k = Kernel(kernel.name, width, platform, kernel.iterations)
        k.directives = list(kernel.directives)
        for g in result.gates:
            k.add(g)
        out.kernels.append(k)
    return out, swaps, placement, mapping


def run_schedule(program: Program, mode: str, resource_constrained: bool) -> list[Schedule]:
    platform = program.platform
    schedules = []
    for kernel in program.kernels:
        if resource_constrained:
            s = schedule_resource_constrained(kernel.gates, platform, mode)
        elif mode == "asap":
            s = schedule_asap(kernel.gates, platform)
        elif mode == "alap":
            s = schedule_alap(kernel.gates, platform)
        else:
            s = schedule_uniform_alap(kernel.gates, platform)
        schedules.append(s)
    return schedules


def load_program_file(path: str, platform: Platform) -> Program:
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError:
        raise InputError(f"input file not found: {path}")
    parsed = parse_cqasm(text)
    program = Program(path, parsed.qubit_count, platform)
    for pk in parsed.kernels:
        kernel = Kernel(pk.name, parsed.qubit_count, platform, pk.iterations)
        kernel.directives = list(pk.directives)
        for g in pk.gates:
            kernel.add_gate(g.name, g.operands, g.angle)
        program.add_kernel(kernel)
    return program


def compile_program(program: Program, options: CompileOptions) -> CompileResult:
    """Run the selected passes in fixed order and write requested artifacts."""
    result = CompileResult(program=program)
    result.reports.append(_measure(program, "input"))

    if "decompose" in options.passes:
        program = run_decompose(program)
        result.reports.append(_measure(program, "decompose"))
    if "optimize" in options.passes:
        program = run_optimize(program, options.epsilon, options.window)
        result.reports.append(_measure(program, "optimize"))
    if "map" in options.passes:
        program, swaps, placement, final_mapping = run_map(program)
        result.placement_exact = placement.exact
        result.initial_mapping = placement.mapping
        result.final_mapping = final_mapping
        result.reports.append(_measure(program, "map", swaps=swaps))
    schedules = None
    if "schedule" in options.passes:
        schedules = run_schedule(program, options.schedule_mode, options.resource_constrained)
        result.reports.append(_measure(program, "schedule", schedules=schedules))

    result.program = program
    result.schedules = schedules

    cqasm_text = emit_cqasm(program, schedules)
    result.artifacts["cqasm"] = cqasm_text
    if options.out_cqasm:
        with open(options.out_cqasm, "w", encoding="utf-8", newline="\n") as f:
            f.write(cqasm_text)
    if options.out_timing:
        if schedules is None:
            raise InputError("timing trace requires the schedule pass")
        trace = emit_program_timing_trace(
            program, schedules, program.platform, options.timing_format
        )
        result.artifacts["timing"] = trace
        with open(options.out_timing, "w", encoding="utf-8", newline="\n") as f:
            f.write(trace)
    if options.report_path:
        from .report import write_report
        write_report(result, options.report_path)
    return result


def compile_source(platform: Platform, options: CompileOptions,
                   input_path: str | None = None, example: str | None = None) -> CompileResult:
    if (input_path is None) == (example is None):
        raise InputError("exactly one of input path or example name is required")
    if example is not None:
        try:
            program = build_example(example, platform)
        except KeyError as exc:
            raise InputError(str(exc))
    else:
        program = load_program_file(input_path, platform)
    return compile_program(program, options)
