"""Hardware configuration: loading, validation, and gate resolution.

The configuration document is UTF-8 JSON with required top-level keys
``eqasm_compiler``, ``hardware_settings`` (``qubit_number``, ``cycle_time``)
and ``instructions``; ``gate_decomposition``, ``resources`` and
``topology`` are optional.  Instruction matrices are flat row-major lists
of ``[re, im]`` pairs.  Unknown keys inside instruction entries are carried
through untouched in ``backend_opaque``.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DecompositionCycle,
    ParseError,
    SchemaError,
    UnboundOperand,
    UnknownInstruction,
    ValidationError,
)
from .ir import Gate, STANDARD_GATES

_INSTR_TYPES = ("mw", "flux", "readout", "none")

# keys consumed by the schema; everything else is backend_opaque
_KNOWN_INSTR_KEYS = {
    "duration", "latency", "qubits", "matrix", "disable_optimization",
    "type", "uses",
}

_OPERAND_TOKEN = re.compile(r"^q(\d+)$")


@dataclass(frozen=True)
class InstructionDef:
    key: str
    duration_ns: int
    latency_ns: int = 0
    qubits: tuple[str, ...] = ()
    matrix: np.ndarray | None = None
    disable_optimization: bool = False
    type: str = "none"
    uses: tuple[tuple[str, int], ...] = ()
    backend_opaque: dict = field(default_factory=dict)

    def duration_cycles(self, cycle_time_ns: int) -> int:
        return max(1, math.ceil(self.duration_ns / cycle_time_ns))


@dataclass(frozen=True)
class ResourceModel:
    counts: dict[str, int] = field(default_factory=dict)

    def capacity(self, name: str) -> int:
        return self.counts.get(name, 0)

    def __bool__(self):
        return bool(self.counts)


@dataclass(frozen=True)
class Topology:
    qubit_count: int
    edges: frozenset[tuple[int, int]]

    def adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def neighbors(self, q: int) -> list[int]:
        out = [b for (a, b) in self.edges if a == q] + [a for (a, b) in self.edges if b == q]
        return sorted(out)

    @staticmethod
    def complete(n: int) -> "Topology":
        return Topology(n, frozenset((a, b) for a in range(n) for b in range(a + 1, n)))

    @staticmethod
    def line(n: int) -> "Topology":
        return Topology(n, frozenset((i, i + 1) for i in range(n - 1)))

    @staticmethod
    def ring(n: int) -> "Topology":
        edges = {(i, i + 1) for i in range(n - 1)}
        if n > 2:
            edges.add((0, n - 1))
        return Topology(n, frozenset(edges))

    @staticmethod
    def grid(rows: int, cols: int) -> "Topology":
        edges = set()
        for r in range(rows):
            for c in range(cols):
                q = r * cols + c
                if c + 1 < cols:
                    edges.add((q, q + 1))
                if r + 1 < rows:
                    edges.add((q, q + cols))
        return Topology(rows * cols, frozenset(edges))


@dataclass(frozen=True)
class DecompositionRule:
    key: str
    name: str
    formals: tuple[int, ...]  # operand numbers appearing in the key, in order
    templates: tuple[tuple[str, tuple[int, ...], float | None], ...]


def _parse_gate_text(text: str, where: str):
    """Parse 'name q0,q1[, angle]' into (name, operand numbers, angle)."""
    text = text.strip()
    if " " not in text:
        raise SchemaError(f"{where}: cannot parse gate text {text!r}")
    name, rest = text.split(None, 1)
    tokens = [t.strip() for t in rest.split(",")]
    operands = []
    angle = None
    for i, tok in enumerate(tokens):
        m = _OPERAND_TOKEN.match(tok)
        if m:
            operands.append(int(m.group(1)))
        elif i == len(tokens) - 1:
            try:
                angle = float(tok)
            except ValueError:
                raise SchemaError(f"{where}: bad operand token {tok!r} in {text!r}")
        else:
            raise SchemaError(f"{where}: bad operand token {tok!r} in {text!r}")
    return name.lower(), tuple(operands), angle


def _parse_matrix(raw, where: str) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise SchemaError(f"{where}: matrix must be a non-empty list of [re, im] pairs")
    entries = []
    for pair in raw:
        if (not isinstance(pair, list)) or len(pair) != 2:
            raise SchemaError(f"{where}: matrix entries must be [re, im] pairs")
        entries.append(complex(pair[0], pair[1]))
    dim = math.isqrt(len(entries))
    if dim * dim != len(entries) or dim & (dim - 1):
        raise SchemaError(
            f"{where}: matrix length {len(entries)} is not a square power-of-two dimension"
        )
    return np.array(entries, dtype=complex).reshape(dim, dim)


class Platform:
    """Parsed, validated hardware configuration."""

    def __init__(self, name, eqasm_compiler, qubit_number, cycle_time_ns, buffers,
                 instructions, rules, resources, topology, extra_settings):
        self.name = name
        self.eqasm_compiler = eqasm_compiler
        self.qubit_number = qubit_number
        self.cycle_time_ns = cycle_time_ns
        self.buffers: dict[str, int] = buffers
        self.instructions: dict[str, InstructionDef] = instructions
        self.rules: dict[str, DecompositionRule] = rules
        self.resources: ResourceModel = resources
        self.topology: Topology = topology
        self._extra_settings = extra_settings
        self._instr_base_names = {k.split()[0] for k in instructions}
        self._rules_by_name: dict[tuple[str, int], list[DecompositionRule]] = {}
        for rule in rules.values():
            self._rules_by_name.setdefault((rule.name, len(rule.formals)), []).append(rule)
        for lst in self._rules_by_name.values():
            lst.sort(key=lambda r: r.key)

    # --- resolution -----------------------------------------------------

    def knows_gate(self, name: str) -> bool:
        return name in self._instr_base_names or any(
            name == rname for (rname, _a) in self._rules_by_name
        )

    def specialized_key(self, gate: Gate) -> str:
        return f"{gate.name} {','.join(f'q{o}' for o in gate.operands)}"

    def lookup_instruction(self, gate: Gate) -> InstructionDef:
        """Specialized key ('rx180 q1') first, then the generic name."""
        spec = self.specialized_key(gate)
        if spec in self.instructions:
            return self.instructions[spec]
        if gate.name in self.instructions:
            return self.instructions[gate.name]
        raise UnknownInstruction(f"no instruction entry for {spec!r}")

    def find_instruction(self, gate: Gate) -> InstructionDef | None:
        try:
            return self.lookup_instruction(gate)
        except UnknownInstruction:
            return None

    def gate_matrix(self, gate: Gate) -> np.ndarray | None:
        d = self.find_instruction(gate)
        return None if d is None else d.matrix

    def gate_duration_cycles(self, gate: Gate) -> int:
        d = self.find_instruction(gate)
        if d is None:
            return 1
        return d.duration_cycles(self.cycle_time_ns)

    def gate_latency_ns(self, gate: Gate) -> int:
        d = self.find_instruction(gate)
        return 0 if d is None else d.latency_ns

    def gate_type(self, gate: Gate) -> str:
        d = self.find_instruction(gate)
        return "none" if d is None else d.type

    def gate_uses(self, gate: Gate) -> tuple[tuple[str, int], ...]:
        d = self.find_instruction(gate)
        return () if d is None else d.uses

    def gate_disable_optimization(self, gate: Gate) -> bool:
        d = self.find_instruction(gate)
        return False if d is None else d.disable_optimization

    def buffer_ns(self, type_a: str, type_b: str) -> int:
        return self.buffers.get(f"{type_a}_{type_b}_buffer", 0)

    def buffer_cycles(self, type_a: str, type_b: str) -> int:
        ns = self.buffer_ns(type_a, type_b)
        return math.ceil(ns / self.cycle_time_ns) if ns > 0 else 0

    # --- custom decomposition -------------------------------------------

    def _match_rule(self, gate: Gate) -> DecompositionRule | None:
        candidates = self._rules_by_name.get((gate.name, len(gate.operands)))
        if not candidates:
            return None
        spec = self.specialized_key(gate)
        for rule in candidates:
            if rule.key == spec:
                return rule
        return candidates[0]

    def has_decomposition(self, gate: Gate) -> bool:
        return self._match_rule(gate) is not None

    def apply_custom_decomposition(self, gate: Gate) -> list[Gate]:
        """Expand a composite gate through gate_decomposition to fixpoint.

        Rule keys declare positional operand placeholders: the rule
        'cnot q0,q1' rewrites any 2-operand cnot, binding q0 and q1 to the
        actual operands in order.  An exact specialized key wins over
        pattern candidates.  Self- or mutually-recursive rule sets raise
        DecompositionCycle.
        """
        return self._expand(gate, ())

    def _expand(self, gate: Gate, stack: tuple[str, ...]) -> list[Gate]:
        rule = self._match_rule(gate)
        if rule is None:
            return [gate]
        if rule.key in stack:
            raise DecompositionCycle(
                f"decomposition rule {rule.key!r} expands to itself (chain: {' -> '.join(stack + (rule.key,))})"
            )
        binding = dict(zip(rule.formals, gate.operands))
        out: list[Gate] = []
        for name, formals, angle in rule.templates:
            try:
                actual = tuple(binding[f] for f in formals)
            except KeyError as exc:
                raise UnboundOperand(
                    f"rule {rule.key!r} references operand q{exc.args[0]} not bound by its key"
                )
            out.extend(self._expand(Gate(name, actual, angle), stack + (rule.key,)))
        return out

    # --- serialization ---------------------------------------------------

    def to_document(self) -> dict:
        """Reconstruct the recognized configuration fields (round-trip aid)."""
        hw = {"qubit_number": self.qubit_number, "cycle_time": self.cycle_time_ns}
        hw.update(self.buffers)
        hw.update(self._extra_settings)
        instrs = {}
        for key, d in self.instructions.items():
            entry: dict = {"duration": d.duration_ns, "latency": d.latency_ns,
                           "qubits": list(d.qubits)}
            if d.matrix is not None:
                entry["matrix"] = [
                    [float(v.real), float(v.imag)] for v in d.matrix.ravel()
                ]
            entry["disable_optimization"] = d.disable_optimization
            entry["type"] = d.type
            if d.uses:
                entry["uses"] = [{"resource": r, "units": u} for r, u in d.uses]
            entry.update(d.backend_opaque)
            instrs[key] = entry
        doc = {
            "eqasm_compiler": self.eqasm_compiler,
            "hardware_settings": hw,
            "instructions": instrs,
        }
        if self.rules:
            doc["gate_decomposition"] = {
                rule.key: [
                    (f"{n} {','.join(f'q{o}' for o in ops)}" if a is None
                     else f"{n} {','.join(f'q{o}' for o in ops)}, {a!r}")
                    for n, ops, a in rule.templates
                ]
                for rule in self.rules.values()
            }
        if self.resources:
            doc["resources"] = {n: {"count": c} for n, c in self.resources.counts.items()}
        doc["topology"] = {
            "qubit_count": self.topology.qubit_count,
            "edges": sorted([list(e) for e in self.topology.edges]),
        }
        return doc


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise SchemaError(f"{where}: missing required field {key!r}")
    return mapping[key]


def _require_int(mapping: dict, key: str, where: str, minimum: int | None = None) -> int:
    value = _require(mapping, key, where)
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}.{key}: expected integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise SchemaError(f"{where}.{key}: must be >= {minimum}, got {value}")
    return value


def load_platform(document: str, name: str = "platform") -> Platform:
    """Parse and validate a configuration document (JSON text)."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed configuration: {exc.msg} at line {exc.lineno} column {exc.colno}")
    if not isinstance(doc, dict):
        raise SchemaError("configuration root must be an object")

    eqasm_compiler = _require(doc, "eqasm_compiler", "config")
    if not isinstance(eqasm_compiler, str):
        raise SchemaError("config.eqasm_compiler: expected string")
    hw = _require(doc, "hardware_settings", "config")
    if not isinstance(hw, dict):
        raise SchemaError("config.hardware_settings: expected object")
    qubit_number = _require_int(hw, "qubit_number", "hardware_settings", minimum=1)
    cycle_time = _require_int(hw, "cycle_time", "hardware_settings", minimum=1)
    buffers = {}
    extra_settings = {}
    for key, value in hw.items():
        if key in ("qubit_number", "cycle_time"):
            continue
        if key.endswith("_buffer"):
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise SchemaError(f"hardware_settings.{key}: expected non-negative integer")
            buffers[key] = value
        else:
            extra_settings[key] = value

    raw_instrs = _require(doc, "instructions", "config")
    if not isinstance(raw_instrs, dict):
        raise SchemaError("config.instructions: expected object")
    instructions: dict[str, InstructionDef] = {}
    for key, raw in raw_instrs.items():
        where = f"instructions[{key!r}]"
        if not isinstance(raw, dict):
            raise SchemaError(f"{where}: expected object")
        duration = _require_int(raw, "duration", where, minimum=1)
        latency = raw.get("latency", 0)
        if isinstance(latency, bool) or not isinstance(latency, int):
            raise SchemaError(f"{where}.latency: expected integer")
        qubits = raw.get("qubits", [])
        if not isinstance(qubits, list) or not all(isinstance(q, str) for q in qubits):
            raise SchemaError(f"{where}.qubits: expected list of qubit labels")
        matrix = _parse_matrix(raw["matrix"], where) if "matrix" in raw else None
        disable = raw.get("disable_optimization", False)
        if not isinstance(disable, bool):
            raise SchemaError(f"{where}.disable_optimization: expected boolean")
        itype = raw.get("type", "none")
        if itype not in _INSTR_TYPES:
            raise SchemaError(f"{where}.type: expected one of {_INSTR_TYPES}, got {itype!r}")
        uses = []
        for u in raw.get("uses", []):
            if not isinstance(u, dict) or "resource" not in u:
                raise SchemaError(f"{where}.uses: entries need a 'resource' field")
            units = u.get("units", 1)
            if isinstance(units, bool) or not isinstance(units, int) or units < 1:
                raise SchemaError(f"{where}.uses: units must be a positive integer")
            uses.append((u["resource"], units))
        opaque = {k: v for k, v in raw.items() if k not in _KNOWN_INSTR_KEYS}
        instructions[key] = InstructionDef(
            key=key, duration_ns=duration, latency_ns=latency, qubits=tuple(qubits),
            matrix=matrix, disable_optimization=disable, type=itype,
            uses=tuple(uses), backend_opaque=opaque,
        )

    rules: dict[str, DecompositionRule] = {}
    raw_rules = doc.get("gate_decomposition", {})
    if not isinstance(raw_rules, dict):
        raise SchemaError("config.gate_decomposition: expected object")
    for key, rhs in raw_rules.items():
        rname, formals, _ = _parse_gate_text(key, f"gate_decomposition[{key!r}]")
        if not isinstance(rhs, list):
            raise SchemaError(f"gate_decomposition[{key!r}]: expected list of gate texts")
        templates = tuple(
            _parse_gate_text(t, f"gate_decomposition[{key!r}]") for t in rhs
        )
        rules[key] = DecompositionRule(key=key, name=rname, formals=formals, templates=templates)

    instr_base_names = {k.split()[0] for k in instructions}
    rule_names = {r.name for r in rules.values()}
    for rule in rules.values():
        for tname, _ops, _a in rule.templates:
            if (tname not in STANDARD_GATES and tname not in instr_base_names
                    and tname not in rule_names):
                raise ValidationError(
                    f"gate_decomposition[{rule.key!r}] references undefined gate {tname!r}"
                )

    raw_res = doc.get("resources", {})
    if not isinstance(raw_res, dict):
        raise SchemaError("config.resources: expected object")
    counts = {}
    for rname, body in raw_res.items():
        if not isinstance(body, dict):
            raise SchemaError(f"resources[{rname!r}]: expected object")
        counts[rname] = _require_int(body, "count", f"resources[{rname!r}]", minimum=1)
    resources = ResourceModel(counts=counts)
    for d in instructions.values():
        for res_name, _units in d.uses:
            if res_name not in counts:
                raise ValidationError(
                    f"instruction {d.key!r} uses undefined resource {res_name!r}"
                )

    raw_topo = doc.get("topology", {})
    if not isinstance(raw_topo, dict):
        raise SchemaError("config.topology: expected object")
    if raw_topo:
        tq = _require_int(raw_topo, "qubit_count", "topology", minimum=1)
        edges = set()
        for e in raw_topo.get("edges", []):
            if not isinstance(e, list) or len(e) != 2:
                raise SchemaError("topology.edges: entries must be [a, b] pairs")
            a, b = e
            if a == b:
                raise ValidationError(f"topology edge [{a}, {b}] is a self-edge")
            if not (0 <= a < tq and 0 <= b < tq):
                raise ValidationError(f"topology edge [{a}, {b}] out of range for {tq} qubits")
            edges.add((min(a, b), max(a, b)))
        topology = Topology(tq, frozenset(edges))
    else:
        # empty section (as in minimal configs): no connectivity constraints
        topology = Topology.complete(qubit_number)

    return Platform(
        name=name, eqasm_compiler=eqasm_compiler, qubit_number=qubit_number,
        cycle_time_ns=cycle_time, buffers=buffers, instructions=instructions,
        rules=rules, resources=resources, topology=topology,
        extra_settings=extra_settings,
    )


def load_platform_file(path: str, name: str | None = None) -> Platform:
    from .errors import ConfigNotFound
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError:
        raise ConfigNotFound(f"configuration file not found: {path}")
    return load_platform(text, name or path)
