"""Fluent builder bindings over the quantcc compiler.

Mirrors the host-language scripting interface: construct a platform from a
configuration file, collect kernels of gate calls into a program, and
compile it through the same pipeline the CLI drives:

    import qbuilder as ql

    transmon = ql.quantum_platform('transmon', 'hardware_config.json')
    prog = ql.program('bell_pair', 2, transmon)
    k = ql.kernel('epr')
    k.hadamard(0)
    k.cnot(0, 1)
    prog.add_kernel(k)
    artifacts = prog.compile(optimize=True, schedule='ALAP')

``compile`` returns the paths of the produced cQASM and timing-trace
files.  All compiler errors surface as quantcc exceptions.
"""
from __future__ import annotations

import os

from quantcc import (
    CompileOptions,
    Kernel as _Kernel,
    Program as _Program,
    compile_program,
    controlled_kernel as _controlled_kernel,
    load_platform_file,
)

__all__ = ["quantum_platform", "program", "kernel", "set_output_dir"]

_DEFAULT_OUTPUT_DIR = "output"


def set_output_dir(path: str) -> None:
    """Default directory for artifacts written by ``program.compile``."""
    global _DEFAULT_OUTPUT_DIR
    _DEFAULT_OUTPUT_DIR = path


def quantum_platform(name: str, config_file: str):
    """Load a hardware configuration file into a platform handle."""
    return load_platform_file(config_file, name)


class kernel:
    """Ordered block of gate calls; qubit bounds are checked when the
    kernel joins a program."""

    def __init__(self, name: str):
        self.name = name
        self.iterations = 1
        self._ops: list[tuple[str, tuple[int, ...], float | None]] = []

    def _add(self, name, operands, angle=None):
        self._ops.append((name, tuple(operands), angle))
        return self

    def identity(self, q):
        return self._add("i", (q,))

    def hadamard(self, q):
        return self._add("h", (q,))

    def x(self, q):
        return self._add("x", (q,))

    def y(self, q):
        return self._add("y", (q,))

    def z(self, q):
        return self._add("z", (q,))

    def rx(self, q, angle):
        return self._add("rx", (q,), float(angle))

    def ry(self, q, angle):
        return self._add("ry", (q,), float(angle))

    def rz(self, q, angle):
        return self._add("rz", (q,), float(angle))

    def x90(self, q):
        return self._add("x90", (q,))

    def y90(self, q):
        return self._add("y90", (q,))

    def mx90(self, q):
        return self._add("mx90", (q,))

    def my90(self, q):
        return self._add("my90", (q,))

    def s(self, q):
        return self._add("s", (q,))

    def sdag(self, q):
        return self._add("sdag", (q,))

    def t(self, q):
        return self._add("t", (q,))

    def tdag(self, q):
        return self._add("tdag", (q,))

    def cnot(self, control, target):
        return self._add("cnot", (control, target))

    def toffoli(self, c1, c2, target):
        return self._add("toffoli", (c1, c2, target))

    def cz(self, a, b):
        return self._add("cz", (a, b))

    def swap(self, a, b):
        return self._add("swap", (a, b))

    def measure(self, q):
        return self._add("measure", (q,))

    def prepz(self, q):
        return self._add("prepz", (q,))

    def gate(self, name, operands, angle=None):
        """Custom or platform-defined gate by name."""
        return self._add(name.lower(), tuple(operands), angle)

    def controlled(self, other: "kernel", controls, ancillas):
        """Append the controlled version of another kernel's gates."""
        used = [q for (_n, ops, _a) in other._ops for q in ops]
        width = max(used + list(controls) + list(ancillas), default=0) + 1
        src = _Kernel(other.name, width)
        for name, operands, angle in other._ops:
            src.add_gate(name, operands, angle)
        controlled = _controlled_kernel(src, list(controls), list(ancillas))
        for g in controlled.gates:
            self._add(g.name, g.operands, g.angle)
        return self


class program:
    """Container of kernels bound to a platform."""

    def __init__(self, name: str, qubit_count: int, platform):
        self.name = name
        self.qubit_count = qubit_count
        self.platform = platform
        self._kernels: list[kernel] = []

    def add_kernel(self, k: kernel) -> "program":
        self._kernels.append(k)
        return self

    # alias matching the terser host-language spelling
    add = add_kernel

    def _build(self) -> _Program:
        prog = _Program(self.name, self.qubit_count, self.platform)
        for k in self._kernels:
            built = _Kernel(k.name, self.qubit_count, self.platform, k.iterations)
            for name, operands, angle in k._ops:
                built.add_gate(name, operands, angle)
            prog.add_kernel(built)
        return prog

    def compile(self, optimize: bool = False, schedule: str = "ASAP",
                output_dir: str | None = None) -> dict[str, str]:
        """Run the standard pipeline; returns artifact paths.

        ``schedule`` is one of ASAP/ALAP/UNIFORM, case-insensitive.
        """
        mode = schedule.lower()
        if mode not in ("asap", "alap", "uniform"):
            raise ValueError(
                f"unknown schedule {schedule!r}: expected ASAP, ALAP or UNIFORM"
            )
        passes = ("decompose", "optimize", "map", "schedule") if optimize else (
            "decompose", "map", "schedule"
        )
        out_dir = output_dir or _DEFAULT_OUTPUT_DIR
        os.makedirs(out_dir, exist_ok=True)
        cqasm_path = os.path.join(out_dir, f"{self.name}.cq")
        timing_path = os.path.join(out_dir, f"{self.name}_timing.tsv")
        options = CompileOptions(
            passes=passes,
            schedule_mode=mode,
            out_cqasm=cqasm_path,
            out_timing=timing_path,
        )
        compile_program(self._build(), options)
        return {"cqasm": cqasm_path, "timing": timing_path}
