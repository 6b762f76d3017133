"""Compiler error hierarchy.

Every error carries a stable ``code`` of the form ``<module>.<kebab-name>``
so the CLI can report failures with a machine-checkable category.
"""
from __future__ import annotations


class CompilerError(Exception):
    """Base class for all compiler errors."""

    code = "quantcc.error"


# ir
class UnknownGate(CompilerError):
    code = "ir.unknown-gate"


class OperandRange(CompilerError):
    code = "ir.operand-range"


class DuplicateOperand(CompilerError):
    code = "ir.duplicate-operand"


class MissingAngle(CompilerError):
    code = "ir.missing-angle"


class UnexpectedAngle(CompilerError):
    code = "ir.unexpected-angle"


class NoMatrixAvailable(CompilerError):
    code = "ir.no-matrix-available"


class TooManyQubits(CompilerError):
    code = "ir.too-many-qubits"


# platform
class ParseError(CompilerError):
    code = "platform.parse-error"


class SchemaError(CompilerError):
    code = "platform.schema-error"


class ValidationError(CompilerError):
    code = "platform.validation-error"


class UnknownInstruction(CompilerError):
    code = "platform.unknown-instruction"


class DecompositionCycle(CompilerError):
    code = "platform.decomposition-cycle"


class UnboundOperand(CompilerError):
    code = "platform.unbound-operand"


class ConfigNotFound(CompilerError):
    code = "platform.config-not-found"


# decompose
class WrongArity(CompilerError):
    code = "decompose.wrong-arity"


class InsufficientAncillas(CompilerError):
    code = "decompose.insufficient-ancillas"


class QubitClash(CompilerError):
    code = "decompose.qubit-clash"


class UnsupportedGate(CompilerError):
    code = "decompose.unsupported-gate"


class NotUnitary(CompilerError):
    code = "decompose.not-unitary"


class BadAngleCount(CompilerError):
    code = "decompose.bad-angle-count"


class NotPowerOfTwo(CompilerError):
    code = "decompose.not-power-of-two"


class TooLarge(CompilerError):
    code = "decompose.too-large"


# optimize
class DimMismatch(CompilerError):
    code = "optimize.dim-mismatch"


# schedule
class UnschedulableGate(CompilerError):
    code = "schedule.unschedulable-gate"


# map
class DisconnectedTopology(CompilerError):
    code = "map.disconnected-topology"


class TooManyVirtualQubits(CompilerError):
    code = "map.too-many-virtual-qubits"


# sim
class NonUnitaryGate(CompilerError):
    code = "sim.non-unitary-gate"


class BadPermutation(CompilerError):
    code = "sim.bad-permutation"


# cli / input
class InputError(CompilerError):
    code = "cli.input-error"
