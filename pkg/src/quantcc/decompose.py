"""Lowering to the elementary gate set.

Covers the three lowering families:

* Toffoli and multi-controlled gates onto {h, t, tdag, cnot} via the
  6-CNOT network and an AND-ladder over clean ancillas;
* controlled versions of whole kernels (single-qubit gates through the
  ABC construction derived from ZYZ angles);
* arbitrary unitaries onto {ry, rz, cnot} via Quantum Shannon
  Decomposition, recursing through cosine-sine factorizations and
  multiplexed rotations until single-qubit ZYZ.

Without simplification the Shannon decomposition of an n-qubit unitary
emits exactly 3/2*4^n - 3/2*2^n rotations and 3/4*4^n - 3/2*2^n CNOTs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cossin, schur

from .errors import (
    BadAngleCount,
    DimMismatch,
    InsufficientAncillas,
    NotPowerOfTwo,
    NotUnitary,
    QubitClash,
    TooLarge,
    UnsupportedGate,
    WrongArity,
)
from .ir import (
    Gate,
    Kernel,
    NON_UNITARY_GATES,
    gate_unitary,
    ry_matrix,
    rz_matrix,
)

QSD_MAX_QUBITS = 8

_ZERO_ANGLE = 1e-12


@dataclass(frozen=True)
class ZYZAngles:
    """U = exp(i*alpha) * Rz(beta) * Ry(gamma) * Rz(delta)."""

    alpha: float
    beta: float
    gamma: float
    delta: float


@dataclass(frozen=True)
class UniformlyControlledRotation:
    """Multiplexed rotation: angles[i] hits the target when the controls
    (controls[0] most significant) are in basis state |i>."""

    axis: str  # 'y' or 'z'
    angles: tuple[float, ...]
    controls: tuple[int, ...]
    target: int


def _check_unitary(u: np.ndarray, atol: float) -> None:
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NotUnitary(f"expected a square matrix, got shape {u.shape}")
    d = u.shape[0]
    if np.max(np.abs(u.conj().T @ u - np.eye(d))) > atol:
        raise NotUnitary("matrix deviates from unitarity beyond tolerance")


def zyz_decompose(u: np.ndarray) -> ZYZAngles:
    """Euler angles of a 2x2 unitary under this compiler's rotation signs.

    gamma is canonical in [0, pi]; when the y-rotation degenerates the
    whole z-rotation lands in beta (delta = 0), so outputs are
    deterministic for golden tests.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise NotUnitary(f"zyz_decompose expects a 2x2 matrix, got {u.shape}")
    _check_unitary(u, 1e-10)
    alpha = 0.5 * np.angle(np.linalg.det(u))
    v = u * np.exp(-1j * alpha)
    x, y = v[0, 0], v[0, 1]
    gamma = 2.0 * np.arctan2(abs(y), abs(x))
    if abs(y) < _ZERO_ANGLE:
        beta, delta = -2.0 * np.angle(x), 0.0
    elif abs(x) < _ZERO_ANGLE:
        beta, delta = -2.0 * np.angle(y), 0.0
    else:
        beta = -np.angle(x) - np.angle(y)
        delta = -np.angle(x) + np.angle(y)
    return ZYZAngles(alpha=float(alpha), beta=float(beta), gamma=float(gamma), delta=float(delta))


def zyz_reconstruct(angles: ZYZAngles) -> np.ndarray:
    return (
        np.exp(1j * angles.alpha)
        * rz_matrix(angles.beta)
        @ ry_matrix(angles.gamma)
        @ rz_matrix(angles.delta)
    )


def zyz_gates(u: np.ndarray, qubit: int, keep_zero: bool = True) -> list[Gate]:
    """Program-order rotation sequence rz(delta), ry(gamma), rz(beta)."""
    a = zyz_decompose(u)
    gates = [
        Gate("rz", (qubit,), a.delta),
        Gate("ry", (qubit,), a.gamma),
        Gate("rz", (qubit,), a.beta),
    ]
    if keep_zero:
        return gates
    return [g for g in gates if abs(g.angle) > _ZERO_ANGLE]


def decompose_toffoli(gate: Gate) -> list[Gate]:
    """Standard 6-CNOT, 7-T, 2-H Toffoli network."""
    if gate.name != "toffoli" or len(gate.operands) != 3:
        raise WrongArity(f"decompose_toffoli expects a 3-operand toffoli, got {gate.text()}")
    a, b, c = gate.operands
    return [
        Gate("h", (c,)),
        Gate("cnot", (b, c)),
        Gate("tdag", (c,)),
        Gate("cnot", (a, c)),
        Gate("t", (c,)),
        Gate("cnot", (b, c)),
        Gate("tdag", (c,)),
        Gate("cnot", (a, c)),
        Gate("t", (b,)),
        Gate("t", (c,)),
        Gate("cnot", (a, b)),
        Gate("h", (c,)),
        Gate("t", (a,)),
        Gate("tdag", (b,)),
        Gate("cnot", (a, b)),
    ]


def _controlled_single_qubit(control: int, gate: Gate, platform=None) -> list[Gate]:
    """Controlled version of a 1-qubit gate via the ABC construction.

    With U = e^{ia} Rz(b) Ry(g) Rz(d), the gates below satisfy
    A X B X C = e^{-ia} U and A B C = I; the residual controlled phase
    diag(1, e^{ia}) is an rz(a) on the control up to global phase.
    """
    target = gate.operands[0]
    angles = zyz_decompose(gate_unitary(gate, platform))
    a, b, g, d = angles.alpha, angles.beta, angles.gamma, angles.delta
    out = []
    if abs((d - b) / 2) > _ZERO_ANGLE:
        out.append(Gate("rz", (target,), (d - b) / 2))
    out.append(Gate("cnot", (control, target)))
    if abs((d + b) / 2) > _ZERO_ANGLE:
        out.append(Gate("rz", (target,), -(d + b) / 2))
    if abs(g / 2) > _ZERO_ANGLE:
        out.append(Gate("ry", (target,), -g / 2))
    out.append(Gate("cnot", (control, target)))
    if abs(g / 2) > _ZERO_ANGLE:
        out.append(Gate("ry", (target,), g / 2))
    if abs(b) > _ZERO_ANGLE:
        out.append(Gate("rz", (target,), b))
    if abs(a) > _ZERO_ANGLE:
        out.append(Gate("rz", (control,), a))
    return out


def _controlled_gate(control: int, gate: Gate, ancillas: tuple[int, ...], platform=None) -> list[Gate]:
    """One extra control on an arbitrary kernel gate."""
    if gate.name in NON_UNITARY_GATES:
        raise UnsupportedGate(f"cannot control {gate.name!r}")
    if control in gate.operands:
        raise QubitClash(f"control {control} collides with {gate.text()}")
    if gate.name == "i":
        return []
    if gate.name == "x":
        return [Gate("cnot", (control, gate.operands[0]))]
    if gate.name == "z":
        return [Gate("cz", (control, gate.operands[0]))]
    if gate.name == "cnot":
        return [Gate("toffoli", (control,) + gate.operands)]
    if gate.name == "cz":
        a, b = gate.operands
        return [Gate("h", (b,)), Gate("toffoli", (control, a, b)), Gate("h", (b,))]
    if gate.name == "swap":
        a, b = gate.operands
        return [Gate("cnot", (b, a)), Gate("toffoli", (control, a, b)), Gate("cnot", (b, a))]
    if gate.name == "toffoli":
        return decompose_multi_controlled(
            Gate("x", (gate.operands[2],)),
            [control, gate.operands[0], gate.operands[1]],
            list(ancillas),
        )
    if len(gate.operands) == 1:
        return _controlled_single_qubit(control, gate, platform)
    raise UnsupportedGate(f"no controlled construction for {gate.text()}")


def _and_ladder(controls, ancillas) -> tuple[list[Gate], int]:
    """Toffoli ladder computing AND(controls) into the last used ancilla.

    Ancillas must start in |0>; the caller uncomputes by reversing.
    """
    gates = [Gate("toffoli", (controls[0], controls[1], ancillas[0]))]
    for i, ctl in enumerate(controls[2:]):
        gates.append(Gate("toffoli", (ctl, ancillas[i], ancillas[i + 1])))
    return gates, ancillas[len(controls) - 2]


def decompose_multi_controlled(target_gate: Gate, controls, ancillas) -> list[Gate]:
    """Gate controlled by several qubits, lowered to <=3-operand gates.

    Uses the AND-ladder scheme: compute the conjunction of the controls
    into the last ancilla, apply the singly-controlled target, uncompute.
    Ancillas are assumed clean (|0>) and are restored.
    """
    controls = list(controls)
    ancillas = list(ancillas)
    everything = controls + ancillas + list(target_gate.operands)
    if len(set(everything)) != len(everything):
        raise QubitClash(
            f"controls {controls}, ancillas {ancillas} and target {target_gate.text()} overlap"
        )
    if not controls:
        return [target_gate]
    if len(controls) == 1:
        return _controlled_gate(controls[0], target_gate, tuple(ancillas))
    if len(controls) == 2 and target_gate.name == "x":
        return [Gate("toffoli", (controls[0], controls[1], target_gate.operands[0]))]
    if len(ancillas) < len(controls) - 1:
        raise InsufficientAncillas(
            f"{len(controls)} controls need {len(controls) - 1} ancillas, got {len(ancillas)}"
        )
    ladder, and_qubit = _and_ladder(controls, ancillas)
    # mid-ladder ancillas hold intermediate conjunctions, so nested
    # constructions get no ancillas rather than dirty ones
    body = _controlled_gate(and_qubit, target_gate, ())
    return ladder + body + list(reversed(ladder))


def controlled_kernel(kernel: Kernel, controls, ancillas, name: str | None = None) -> Kernel:
    """Controlled version of every gate in a kernel.

    With several controls the conjunction is computed once into an ancilla,
    every gate is controlled by it, and the ladder is uncomputed at the end.
    """
    controls = list(controls)
    ancillas = list(ancillas)
    used = kernel.used_qubits()
    clash = used & (set(controls) | set(ancillas))
    if clash:
        raise QubitClash(f"controls/ancillas {sorted(clash)} already used by kernel {kernel.name!r}")
    if len(set(controls + ancillas)) != len(controls) + len(ancillas):
        raise QubitClash("controls and ancillas overlap")

    qubit_count = max(
        [kernel.qubit_count] + [q + 1 for q in controls + ancillas]
    )
    out = Kernel(name or f"c_{kernel.name}", qubit_count, kernel.platform, kernel.iterations)
    if not kernel.gates:
        return out

    if len(controls) == 1:
        for g in kernel.gates:
            for cg in _controlled_gate(controls[0], g, tuple(ancillas), kernel.platform):
                out.add(cg)
        return out

    if len(ancillas) < len(controls) - 1:
        raise InsufficientAncillas(
            f"{len(controls)} controls need {len(controls) - 1} ancillas, got {len(ancillas)}"
        )
    ladder, and_qubit = _and_ladder(controls, ancillas)
    for g in ladder:
        out.add(g)
    for g in kernel.gates:
        # ladder ancillas are in use, so nested constructions get none
        for cg in _controlled_gate(and_qubit, g, (), kernel.platform):
            out.add(cg)
    for g in reversed(ladder):
        out.add(g)
    return out


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def decompose_uniformly_controlled_rotation(ucr: UniformlyControlledRotation) -> list[Gate]:
    """Lower a multiplexed rotation to 2^k rotations interleaved with 2^k
    CNOTs whose controls walk the reflected binary code.

    The rotation angles solve theta = M phi with
    M[i][j] = (-1)^popcount(i & gray(j)), using M^-1 = M^T / 2^k.
    """
    if ucr.axis not in ("y", "z"):
        raise BadAngleCount(f"axis must be 'y' or 'z', got {ucr.axis!r}")
    k = len(ucr.controls)
    if len(ucr.angles) != (1 << k):
        raise BadAngleCount(
            f"{k} controls need {1 << k} angles, got {len(ucr.angles)}"
        )
    rot = "ry" if ucr.axis == "y" else "rz"
    if k == 0:
        return [Gate(rot, (ucr.target,), ucr.angles[0])]
    m = 1 << k
    gates: list[Gate] = []
    for j in range(m):
        phi = 0.0
        gj = _gray(j)
        for i, theta in enumerate(ucr.angles):
            phi += -theta if bin(i & gj).count("1") & 1 else theta
        phi /= m
        gates.append(Gate(rot, (ucr.target,), phi))
        # control for the gray transition j -> j+1 (the last wraps to the MSB)
        p = min(((j + 1) & -(j + 1)).bit_length() - 1, k - 1)
        gates.append(Gate("cnot", (ucr.controls[k - 1 - p], ucr.target)))
    return gates


def _demultiplex(a: np.ndarray, b: np.ndarray, qubits, simplify: bool) -> list[Gate]:
    """Factor block-diag(a, b) on qubits[0] into V, Rz-multiplexor, W.

    a b^dag = V D^2 V^dag via a complex Schur form (diagonal for the
    unitary input), then W = D^dag V^dag a.
    """
    m = a @ b.conj().T
    t, v = schur(m, output="complex")
    d = np.exp(0.5j * np.angle(np.diag(t)))
    w = np.diag(d).conj().T @ v.conj().T @ a
    out = _qsd(w, qubits[1:], simplify)
    thetas = tuple(-2.0 * np.angle(d))
    out += _ucr_gates("z", thetas, qubits, simplify)
    out += _qsd(v, qubits[1:], simplify)
    return out


def _ucr_gates(axis: str, thetas: tuple[float, ...], qubits, simplify: bool) -> list[Gate]:
    ucr = UniformlyControlledRotation(
        axis=axis, angles=thetas, controls=tuple(qubits[1:]), target=qubits[0]
    )
    gates = decompose_uniformly_controlled_rotation(ucr)
    if simplify and all(abs(t) <= _ZERO_ANGLE for t in thetas):
        return []
    return gates


def _qsd(u: np.ndarray, qubits, simplify: bool) -> list[Gate]:
    n = len(qubits)
    if n == 1:
        if simplify and np.max(np.abs(u / u[0, 0] - np.eye(2))) < _ZERO_ANGLE:
            return []
        return zyz_gates(u, qubits[0], keep_zero=not simplify)
    half = 1 << (n - 1)
    (u1, u2), theta, (v1h, v2h) = cossin(u, p=half, q=half, separate=True)
    out = _demultiplex(v1h, v2h, qubits, simplify)
    out += _ucr_gates("y", tuple(-2.0 * theta), qubits, simplify)
    out += _demultiplex(u1, u2, qubits, simplify)
    return out


def qsd_decompose(u: np.ndarray, qubits, simplify: bool = False) -> list[Gate]:
    """Quantum Shannon Decomposition of a 2^n x 2^n unitary over {ry, rz, cnot}.

    Each level factors the unitary into four blocks on one fewer qubit plus
    three multiplexed rotations (Rz, Ry, Rz across the cosine-sine split),
    bottoming out in ZYZ.  With simplify=False (the default) the emitted
    gate counts match the closed-form totals exactly; simplify=True drops
    identity leaves and all-zero rotation layers.
    """
    u = np.asarray(u, dtype=complex)
    qubits = list(qubits)
    if u.ndim != 2 or u.shape[0] != u.shape[1] or (u.shape[0] & (u.shape[0] - 1)):
        raise NotPowerOfTwo(f"expected a 2^n x 2^n matrix, got shape {u.shape}")
    n = u.shape[0].bit_length() - 1
    if n != len(qubits):
        raise DimMismatch(
            f"matrix spans {n} qubits but {len(qubits)} qubit labels were given"
        )
    if n > QSD_MAX_QUBITS:
        raise TooLarge(f"qsd_decompose limited to {QSD_MAX_QUBITS} qubits, got {n}")
    _check_unitary(u, 1e-9)
    return _qsd(u, qubits, simplify)


def qsd_rotation_count(n: int) -> int:
    return 3 * 4**n // 2 - 3 * 2**n // 2


def qsd_cnot_count(n: int) -> int:
    return 3 * 4**n // 4 - 3 * 2**n // 2
