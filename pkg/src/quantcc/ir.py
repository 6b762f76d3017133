"""Core circuit IR: gates, kernels, programs, and exact unitary semantics.

Conventions used throughout the compiler:

* Qubit 0 is the *most significant* bit of a basis-state index, so the
  basis of a 2-qubit register reads |q0 q1>.
* For a multi-qubit gate the first operand is the most significant bit of
  the gate's own matrix; for ``cnot`` that makes operand 0 the control.
* ``ry(theta)`` is ``[[cos t/2, sin t/2], [-sin t/2, cos t/2]]`` and
  ``rz(theta)`` is ``diag(exp(-i t/2), exp(i t/2))``.  All decomposition
  math relies on these exact sign placements.
* Global phase is tracked nowhere; every equivalence check downstream is
  phase-invariant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import (
    DuplicateOperand,
    MissingAngle,
    NoMatrixAvailable,
    OperandRange,
    TooManyQubits,
    UnexpectedAngle,
    UnknownGate,
    WrongArity,
)

ORACLE_MAX_QUBITS = 12


class GateKind(str, Enum):
    STANDARD = "standard"
    CUSTOM = "custom"
    SWAP_LIKE = "swap-like"


# name -> operand count for the standard gate set
STANDARD_GATES: dict[str, int] = {
    "i": 1,
    "h": 1,
    "x": 1,
    "y": 1,
    "z": 1,
    "rx": 1,
    "ry": 1,
    "rz": 1,
    "x90": 1,
    "y90": 1,
    "mx90": 1,
    "my90": 1,
    "s": 1,
    "sdag": 1,
    "t": 1,
    "tdag": 1,
    "cnot": 2,
    "toffoli": 3,
    "cz": 2,
    "swap": 2,
    "measure": 1,
    "prepz": 1,
}

PARAMETRIC_GATES = frozenset({"rx", "ry", "rz"})

# gates with no unitary action; they partition optimization runs
NON_UNITARY_GATES = frozenset({"measure", "prepz"})


@dataclass(frozen=True)
class Gate:
    """A single gate instance: name, qubit operands, optional angle."""

    name: str
    operands: tuple[int, ...]
    angle: float | None = None
    duration_cycles: int | None = None
    kind: GateKind = field(default=GateKind.STANDARD)

    def __post_init__(self):
        object.__setattr__(self, "operands", tuple(self.operands))
        if self.name == "swap":
            object.__setattr__(self, "kind", GateKind.SWAP_LIKE)
        elif self.name not in STANDARD_GATES:
            object.__setattr__(self, "kind", GateKind.CUSTOM)
        if any(o < 0 for o in self.operands):
            raise OperandRange(f"negative qubit operand in {self.name}: {self.operands}")
        if len(set(self.operands)) != len(self.operands):
            raise DuplicateOperand(f"{self.name} operands must be distinct, got {self.operands}")
        if self.name in STANDARD_GATES:
            if self.name in PARAMETRIC_GATES and self.angle is None:
                raise MissingAngle(f"{self.name} requires an angle")
            if self.name not in PARAMETRIC_GATES and self.angle is not None:
                raise UnexpectedAngle(f"{self.name} takes no angle")

    @property
    def arity(self) -> int:
        return len(self.operands)

    def text(self) -> str:
        """Config-style text form, e.g. 'cnot q0,q1'."""
        ops = ",".join(f"q{o}" for o in self.operands)
        if self.angle is not None:
            return f"{self.name} {ops}, {self.angle!r}"
        return f"{self.name} {ops}"


_SQ2 = 1.0 / math.sqrt(2.0)

_FIXED_MATRICES: dict[str, np.ndarray] = {
    "i": np.eye(2, dtype=complex),
    "h": np.array([[1, 1], [1, -1]], dtype=complex) * _SQ2,
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "sdag": np.array([[1, 0], [0, -1j]], dtype=complex),
    "t": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    "tdag": np.array([[1, 0], [0, np.exp(-1j * math.pi / 4)]], dtype=complex),
    "cnot": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
    "cz": np.diag([1, 1, 1, -1]).astype(complex),
    "swap": np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
}

_TOFFOLI = np.eye(8, dtype=complex)
_TOFFOLI[[6, 7], :] = _TOFFOLI[[7, 6], :]
_FIXED_MATRICES["toffoli"] = _TOFFOLI


def rx_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, s], [-s, c]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=complex
    )


_ROTATIONS = {"rx": rx_matrix, "ry": ry_matrix, "rz": rz_matrix}

_FIXED_ANGLE = {
    "x90": ("rx", math.pi / 2),
    "mx90": ("rx", -math.pi / 2),
    "y90": ("ry", math.pi / 2),
    "my90": ("ry", -math.pi / 2),
}


def gate_unitary(gate: Gate, platform=None) -> np.ndarray:
    """Return the 2^k x 2^k unitary of a k-operand gate.

    Standard gates resolve from the built-in table; other names fall back
    to the platform instruction matrix.  Raises NoMatrixAvailable for
    measure/prepz and for custom gates without a matrix.
    """
    if gate.name in NON_UNITARY_GATES:
        raise NoMatrixAvailable(f"{gate.name} has no unitary matrix")
    if gate.name in _FIXED_MATRICES:
        return _FIXED_MATRICES[gate.name].copy()
    if gate.name in _ROTATIONS:
        return _ROTATIONS[gate.name](gate.angle)
    if gate.name in _FIXED_ANGLE:
        rot, theta = _FIXED_ANGLE[gate.name]
        return _ROTATIONS[rot](theta)
    if platform is not None:
        m = platform.gate_matrix(gate)
        if m is not None:
            return m.copy()
    raise NoMatrixAvailable(f"no matrix available for gate {gate.name!r}")


def embed_unitary(matrix: np.ndarray, operands: tuple[int, ...], n: int) -> np.ndarray:
    """Embed a k-qubit gate matrix into the full 2^n space.

    operands[0] is the most significant bit of the gate's local index.
    """
    k = len(operands)
    if matrix.shape != (1 << k, 1 << k):
        raise WrongArity(
            f"matrix of shape {matrix.shape} does not match {k} operands"
        )
    dim = 1 << n
    idx = np.arange(dim)
    loc = np.zeros(dim, dtype=np.intp)
    for j, q in enumerate(operands):
        loc |= ((idx >> (n - 1 - q)) & 1) << (k - 1 - j)
    rem = np.zeros(dim, dtype=np.intp)
    shift = 0
    opset = set(operands)
    for q in range(n - 1, -1, -1):
        if q not in opset:
            rem |= ((idx >> (n - 1 - q)) & 1) << shift
            shift += 1
    full = np.where(
        rem[:, None] == rem[None, :], matrix[loc[:, None], loc[None, :]], 0.0
    )
    return full.astype(complex)


def circuit_unitary(gates, n: int, platform=None) -> np.ndarray:
    """Dense unitary of a gate list in program order (later gates on the left).

    This is the matrix-product oracle path; the state-vector simulator in
    ``sim`` computes the same action by a different route.
    """
    if n > ORACLE_MAX_QUBITS:
        raise TooManyQubits(f"circuit_unitary limited to {ORACLE_MAX_QUBITS} qubits, got {n}")
    u = np.eye(1 << n, dtype=complex)
    for gate in gates:
        if any(o >= n for o in gate.operands):
            raise OperandRange(f"{gate.name} operand out of range for n={n}")
        m = gate_unitary(gate, platform)
        u = embed_unitary(m, gate.operands, n) @ u
    return u


_SELF_INVERSE = frozenset(
    {"i", "h", "x", "y", "z", "cnot", "toffoli", "cz", "swap"}
)
_ADJOINT_PAIRS = {"s": "sdag", "sdag": "s", "t": "tdag", "tdag": "t",
                  "x90": "mx90", "mx90": "x90", "y90": "my90", "my90": "y90"}


def inverse_gate(gate: Gate) -> Gate:
    """Inverse of a standard gate (rotations negate their angle)."""
    if gate.name in _SELF_INVERSE:
        return gate
    if gate.name in _ADJOINT_PAIRS:
        return replace(gate, name=_ADJOINT_PAIRS[gate.name])
    if gate.name in PARAMETRIC_GATES:
        return replace(gate, angle=-gate.angle)
    raise UnknownGate(f"no inverse known for {gate.name!r}")


class Kernel:
    """Named ordered block of gates; the unit of program composition."""

    def __init__(self, name: str, qubit_count: int, platform=None, iterations: int = 1):
        if qubit_count < 1:
            raise OperandRange("kernel qubit_count must be positive")
        self.name = name
        self.qubit_count = qubit_count
        self.platform = platform
        self.iterations = iterations
        self.gates: list[Gate] = []
        # (gate_index, text) markers such as 'display', preserved in emission
        self.directives: list[tuple[int, str]] = []

    def add_gate(self, name: str, operands, angle: float | None = None) -> "Kernel":
        """Append a gate, validating name, operands and angle."""
        name = name.lower()
        operands = tuple(operands)
        known = name in STANDARD_GATES
        if not known and self.platform is not None:
            known = self.platform.knows_gate(name)
        if not known:
            raise UnknownGate(f"gate {name!r} is neither standard nor platform-defined")
        if name in STANDARD_GATES and len(operands) != STANDARD_GATES[name]:
            raise WrongArity(
                f"{name} expects {STANDARD_GATES[name]} operands, got {len(operands)}"
            )
        if any(o < 0 or o >= self.qubit_count for o in operands):
            raise OperandRange(
                f"{name} operands {operands} outside kernel range 0..{self.qubit_count - 1}"
            )
        self.gates.append(Gate(name, operands, angle))
        return self

    def add(self, gate: Gate) -> "Kernel":
        if any(o >= self.qubit_count for o in gate.operands):
            raise OperandRange(
                f"{gate.name} operands {gate.operands} outside kernel range"
            )
        self.gates.append(gate)
        return self

    def add_directive(self, text: str) -> "Kernel":
        self.directives.append((len(self.gates), text))
        return self

    def used_qubits(self) -> set[int]:
        return {o for g in self.gates for o in g.operands}

    def __iter__(self):
        return iter(self.gates)

    def __len__(self):
        return len(self.gates)

    def __repr__(self):
        return f"Kernel({self.name!r}, {self.qubit_count} qubits, {len(self.gates)} gates)"


class Program:
    """Ordered kernel list bound to a platform."""

    def __init__(self, name: str, qubit_count: int, platform):
        if qubit_count < 1:
            raise OperandRange("program qubit_count must be positive")
        self.name = name
        self.qubit_count = qubit_count
        self.platform = platform
        self.kernels: list[Kernel] = []

    def add_kernel(self, kernel: Kernel) -> "Program":
        if kernel.qubit_count > self.qubit_count:
            raise OperandRange(
                f"kernel {kernel.name!r} uses {kernel.qubit_count} qubits, "
                f"program has {self.qubit_count}"
            )
        for g in kernel.gates:
            if g.name not in STANDARD_GATES and self.platform is not None:
                if not self.platform.knows_gate(g.name):
                    raise UnknownGate(
                        f"kernel {kernel.name!r} uses unknown gate {g.name!r}"
                    )
        self.kernels.append(kernel)
        return self

    def new_kernel(self, name: str, iterations: int = 1) -> Kernel:
        k = Kernel(name, self.qubit_count, self.platform, iterations)
        self.kernels.append(k)
        return k

    def all_gates(self) -> list[Gate]:
        return [g for k in self.kernels for g in k.gates]

    def __repr__(self):
        return f"Program({self.name!r}, {self.qubit_count} qubits, {len(self.kernels)} kernels)"
