"""cQASM serialization and the latency-compensated timing trace.

Grammar subset (byte-exact emission, LF endings):

* ``#`` line comments, ``version 1.0``, ``qubits N``
* sub-circuit headers ``.name`` or ``.name(k)``
* gate lines ``name q[i]``, ``name q[i],q[j]``, ``name q[i], angle``
* SIMD ranges ``name q[i:j]`` (inclusive)
* bundles ``{ a | b | c }`` for gates starting in the same cycle
* bare ``display`` lines pass through

A minimal parser for the same subset lives here so emitted text
round-trips and so the CLI can read programs in this format.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import InputError
from .ir import Gate, Kernel, PARAMETRIC_GATES, Program, STANDARD_GATES
from .schedule import Schedule

_INDENT = "    "


def _gate_statement(gate: Gate) -> str:
    ops = ",".join(f"q[{o}]" for o in gate.operands)
    if gate.angle is not None:
        return f"{gate.name} {ops}, {gate.angle!r}"
    return f"{gate.name} {ops}"


def _collapse_ranges(gates: list[Gate]) -> list[str]:
    """Collapse consecutive same-gate runs on contiguous ascending qubits
    into 'name q[a:b]' SIMD statements."""
    lines: list[str] = []
    i = 0
    while i < len(gates):
        g = gates[i]
        j = i
        if len(g.operands) == 1 and g.angle is None:
            while (
                j + 1 < len(gates)
                and gates[j + 1].name == g.name
                and len(gates[j + 1].operands) == 1
                and gates[j + 1].angle is None
                and gates[j + 1].operands[0] == gates[j].operands[0] + 1
            ):
                j += 1
        if j > i:
            lines.append(f"{g.name} q[{g.operands[0]}:{gates[j].operands[0]}]")
        else:
            lines.append(_gate_statement(g))
        i = j + 1
    return lines


def _emit_kernel_plain(kernel: Kernel) -> list[str]:
    directives: dict[int, list[str]] = {}
    for pos, text in kernel.directives:
        directives.setdefault(pos, []).append(text)
    lines: list[str] = []
    pending = list(kernel.gates)
    # emit directives interleaved at their recorded gate positions
    segment_start = 0
    for cut in sorted(set(directives) | {len(pending)}):
        lines.extend(_collapse_ranges(pending[segment_start:cut]))
        lines.extend(directives.get(cut, ()))
        segment_start = cut
    return lines


def _emit_kernel_scheduled(kernel: Kernel, schedule: Schedule) -> list[str]:
    lines = []
    for _cycle, entries in schedule.bundles.items():
        stmts = [_gate_statement(e.gate) for e in entries]
        if len(stmts) == 1:
            lines.append(stmts[0])
        else:
            lines.append("{ " + " | ".join(stmts) + " }")
    for _pos, text in kernel.directives:
        lines.append(text)
    return lines


def emit_cqasm(program: Program, schedules: list[Schedule | None] | None = None) -> str:
    """Serialize a program; kernels with a schedule emit cycle bundles,
    the rest emit program order with SIMD range collapsing."""
    out = ["version 1.0", "", f"qubits {program.qubit_count}"]
    for i, kernel in enumerate(program.kernels):
        header = f".{kernel.name}"
        if kernel.iterations > 1:
            header += f"({kernel.iterations})"
        out.append("")
        out.append(header)
        schedule = schedules[i] if schedules is not None else None
        body = (
            _emit_kernel_scheduled(kernel, schedule)
            if schedule is not None
            else _emit_kernel_plain(kernel)
        )
        out.extend(_INDENT + line for line in body)
    return "\n".join(out) + "\n"


# --- parsing ----------------------------------------------------------------

_RANGE_RE = re.compile(r"^q\[(\d+):(\d+)\]$")
_INDEX_RE = re.compile(r"^q\[(\d+)\]$")
_HEADER_RE = re.compile(r"^\.([A-Za-z_][\w]*)(?:\((\d+)\))?$")


@dataclass
class ParsedKernel:
    name: str
    iterations: int = 1
    gates: list[Gate] = field(default_factory=list)
    directives: list[tuple[int, str]] = field(default_factory=list)


@dataclass
class ParsedProgram:
    qubit_count: int
    kernels: list[ParsedKernel] = field(default_factory=list)

    def all_gates(self) -> list[Gate]:
        return [g for k in self.kernels for g in k.gates]


def _parse_statement(stmt: str, lineno: int) -> list[Gate]:
    stmt = stmt.strip()
    parts = stmt.split(None, 1)
    name = parts[0].lower()
    if len(parts) == 1:
        raise InputError(f"line {lineno}: gate {name!r} has no operands")
    tokens = [t.strip() for t in parts[1].split(",")]
    operands: list[int] = []
    angle = None
    ranged: tuple[int, int] | None = None
    for i, tok in enumerate(tokens):
        m = _INDEX_RE.match(tok)
        if m:
            operands.append(int(m.group(1)))
            continue
        m = _RANGE_RE.match(tok)
        if m:
            ranged = (int(m.group(1)), int(m.group(2)))
            continue
        if i == len(tokens) - 1:
            try:
                angle = float(tok)
                continue
            except ValueError:
                pass
        raise InputError(f"line {lineno}: cannot parse operand {tok!r}")
    if ranged is not None:
        if operands or angle is not None:
            raise InputError(f"line {lineno}: range form takes a single q[a:b] operand")
        a, b = ranged
        if b < a:
            raise InputError(f"line {lineno}: empty range q[{a}:{b}]")
        return [Gate(name, (q,)) for q in range(a, b + 1)]
    if name in STANDARD_GATES and name in PARAMETRIC_GATES and angle is None:
        raise InputError(f"line {lineno}: {name} requires an angle")
    try:
        return [Gate(name, tuple(operands), angle)]
    except Exception as exc:
        raise InputError(f"line {lineno}: {exc}")


def parse_cqasm(text: str) -> ParsedProgram:
    """Parse the emission subset back into kernels of gates."""
    qubit_count = None
    version_seen = False
    kernels: list[ParsedKernel] = []
    current: ParsedKernel | None = None

    def kernel() -> ParsedKernel:
        nonlocal current
        if current is None:
            current = ParsedKernel(name="main")
            kernels.append(current)
        return current

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("version"):
            if line.split() != ["version", "1.0"]:
                raise InputError(f"line {lineno}: unsupported version line {line!r}")
            version_seen = True
            continue
        if line.startswith("qubits"):
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise InputError(f"line {lineno}: malformed qubits declaration")
            qubit_count = int(parts[1])
            continue
        m = _HEADER_RE.match(line)
        if m:
            current = ParsedKernel(name=m.group(1), iterations=int(m.group(2) or 1))
            kernels.append(current)
            continue
        if line == "display":
            k = kernel()
            k.directives.append((len(k.gates), "display"))
            continue
        if line.startswith("{"):
            if not line.endswith("}"):
                raise InputError(f"line {lineno}: unterminated bundle")
            body = line[1:-1]
            for stmt in body.split("|"):
                kernel().gates.extend(_parse_statement(stmt, lineno))
            continue
        kernel().gates.extend(_parse_statement(line, lineno))

    if not version_seen:
        raise InputError("missing 'version 1.0' line")
    if qubit_count is None:
        raise InputError("missing 'qubits N' declaration")
    parsed = ParsedProgram(qubit_count=qubit_count, kernels=kernels)
    for g in parsed.all_gates():
        if any(o >= qubit_count for o in g.operands):
            raise InputError(f"gate {g.text()} exceeds declared qubit count {qubit_count}")
    return parsed


# --- timing trace ------------------------------------------------------------

_TRACE_HEADER = "kernel\tgate_index\tgate\ttype\tcycle\tnominal_ns\tcompensated_ns\tduration_ns"


def _trace_records(schedule: Schedule, platform, kernel_name: str, offset_ns: int = 0):
    records = []
    for e in schedule.entries:
        instr = platform.find_instruction(e.gate) if platform is not None else None
        latency = 0 if instr is None else instr.latency_ns
        duration = (
            e.duration * platform.cycle_time_ns if instr is None else instr.duration_ns
        )
        gtype = "none" if instr is None else instr.type
        nominal = offset_ns + e.start * platform.cycle_time_ns
        records.append({
            "kernel": kernel_name,
            "gate_index": e.index,
            "gate": e.gate.text(),
            "type": gtype,
            "cycle": e.start,
            "nominal_ns": nominal,
            "compensated_ns": nominal - latency,
            "duration_ns": duration,
            "qubits": e.gate.operands,
        })
    return records


def _reorder_diagnostics(records) -> list[str]:
    """Latency compensation must not reorder operations on a qubit."""
    diags = []
    per_qubit: dict[int, list[dict]] = {}
    for r in records:
        for q in r["qubits"]:
            per_qubit.setdefault(q, []).append(r)
    for q, rs in sorted(per_qubit.items()):
        nominal_order = sorted(rs, key=lambda r: (r["nominal_ns"], r["gate_index"]))
        comp = [r["compensated_ns"] for r in nominal_order]
        if any(b < a for a, b in zip(comp, comp[1:])):
            diags.append(
                f"latency compensation reorders operations on qubit {q}"
            )
    return diags


def _render_trace(records, fmt: str) -> str:
    shift = min((r["compensated_ns"] for r in records), default=0)
    shift = -shift if shift < 0 else 0
    for r in records:
        r["compensated_ns"] += shift
    records = sorted(records, key=lambda r: (r["compensated_ns"], r["gate_index"]))
    diags = _reorder_diagnostics(records)
    if fmt == "json":
        payload = [
            {k: v for k, v in r.items() if k != "qubits"} for r in records
        ]
        return json.dumps({"records": payload, "diagnostics": diags}, indent=2) + "\n"
    lines = [_TRACE_HEADER]
    for r in records:
        lines.append(
            f"{r['kernel']}\t{r['gate_index']}\t{r['gate']}\t{r['type']}\t"
            f"{r['cycle']}\t{r['nominal_ns']}\t{r['compensated_ns']}\t{r['duration_ns']}"
        )
    for d in diags:
        lines.append(f"# diagnostic: {d}")
    return "\n".join(lines) + "\n"


def emit_timing_trace(schedule: Schedule, platform, kernel_name: str = "main",
                      fmt: str = "tsv") -> str:
    """Timing trace of one schedule: nominal start = cycle * cycle_time,
    compensated = nominal - latency, shifted up if anything went negative.
    Ordered by compensated start, ties by record index."""
    return _render_trace(_trace_records(schedule, platform, kernel_name), fmt)


def emit_program_timing_trace(program: Program, schedules, platform, fmt: str = "tsv") -> str:
    """Concatenated trace across kernels; each kernel's nominal timeline
    starts where the previous one ended."""
    records = []
    offset = 0
    for kernel, schedule in zip(program.kernels, schedules):
        if schedule is None:
            continue
        records.extend(_trace_records(schedule, platform, kernel.name, offset))
        offset += schedule.makespan * platform.cycle_time_ns
    return _render_trace(records, fmt)
