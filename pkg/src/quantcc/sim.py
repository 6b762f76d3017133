"""Dense state-vector simulator: the semantic oracle for every pass.

Gates are applied by stride iteration over the amplitude array, which is a
different computational path from ``ir.circuit_unitary`` (dense matrix
products); the two cross-check each other in the test suite.
"""
from __future__ import annotations

import numpy as np

from .errors import BadPermutation, NonUnitaryGate, OperandRange, TooManyQubits
from .ir import NON_UNITARY_GATES, circuit_unitary, gate_unitary

SIM_MAX_QUBITS = 14
EQUIV_MAX_QUBITS = 10

_UNITARY_ATOL = 1e-10


def zero_state(n: int) -> np.ndarray:
    state = np.zeros(1 << n, dtype=complex)
    state[0] = 1.0
    return state


def _gate_indices(operands: tuple[int, ...], n: int) -> np.ndarray:
    """Index matrix of shape (2^(n-k), 2^k): rows enumerate the non-operand
    bits, columns the operand bits (operands[0] most significant)."""
    k = len(operands)
    pos = [n - 1 - q for q in operands]
    rest = [p for p in range(n) if p not in pos]
    base = np.zeros(1 << len(rest), dtype=np.intp)
    for j, p in enumerate(rest):
        base |= ((np.arange(1 << len(rest)) >> j) & 1) << p
    offs = np.zeros(1 << k, dtype=np.intp)
    for j, p in enumerate(pos):
        offs |= ((np.arange(1 << k) >> (k - 1 - j)) & 1) << p
    return base[:, None] | offs[None, :]


def apply_gate(state: np.ndarray, matrix: np.ndarray, operands: tuple[int, ...], n: int) -> np.ndarray:
    idx = _gate_indices(operands, n)
    state = state.copy()
    state[idx] = state[idx] @ matrix.T
    return state


def simulate(gates, n: int, initial: np.ndarray | None = None, platform=None) -> np.ndarray:
    """Apply each gate's unitary in program order, starting from |0...0>.

    Rejects measure/prepz and non-unitary matrices: the oracle is strictly
    unitary and deterministic.
    """
    if n > SIM_MAX_QUBITS:
        raise TooManyQubits(f"simulate limited to {SIM_MAX_QUBITS} qubits, got {n}")
    if initial is None:
        state = zero_state(n)
    else:
        state = np.asarray(initial, dtype=complex).copy()
        if state.shape != (1 << n,):
            raise OperandRange(f"initial state has wrong length for n={n}")
    for gate in gates:
        if gate.name in NON_UNITARY_GATES:
            raise NonUnitaryGate(f"{gate.name} cannot be simulated by the oracle")
        if any(o >= n for o in gate.operands):
            raise OperandRange(f"{gate.name} operand out of range for n={n}")
        m = gate_unitary(gate, platform)
        d = m.shape[0]
        if np.max(np.abs(m.conj().T @ m - np.eye(d))) > _UNITARY_ATOL:
            raise NonUnitaryGate(f"matrix of {gate.name!r} is not unitary")
        state = apply_gate(state, m, gate.operands, n)
    return state


def infidelity(u: np.ndarray, v: np.ndarray) -> float:
    """Phase-invariant deviation 1 - |tr(U^dag V)| / dim, clamped at 0.

    This is the squared trace distance of ``optimize.unitary_distance``;
    it is the quantity compared against tolerances because it has no
    sqrt-of-roundoff noise floor.
    """
    dim = u.shape[0]
    return max(0.0, 1.0 - abs(np.vdot(u, v)) / dim)


def state_overlap_deficit(a: np.ndarray, b: np.ndarray) -> float:
    """1 - |<a|b>| for normalized states."""
    return max(0.0, 1.0 - abs(np.vdot(a, b)))


def equivalent_up_to_phase(gates_a, gates_b, n: int, eps: float, platform=None) -> bool:
    """True iff the two circuits implement the same unitary up to a global
    phase, within an infidelity budget of eps."""
    if n > EQUIV_MAX_QUBITS:
        raise TooManyQubits(f"equivalence check limited to {EQUIV_MAX_QUBITS} qubits")
    ua = circuit_unitary(gates_a, n, platform)
    ub = circuit_unitary(gates_b, n, platform)
    return infidelity(ua, ub) <= eps


def permutation_matrix(perm, n: int) -> np.ndarray:
    """Basis permutation that relabels qubit q to perm[q]."""
    perm = list(perm)
    if sorted(perm) != list(range(n)):
        raise BadPermutation(f"{perm} is not a permutation of 0..{n - 1}")
    dim = 1 << n
    src = np.arange(dim)
    dst = np.zeros(dim, dtype=np.intp)
    for q in range(n):
        dst |= ((src >> (n - 1 - q)) & 1) << (n - 1 - perm[q])
    p = np.zeros((dim, dim), dtype=complex)
    p[dst, src] = 1.0
    return p


def equivalent_up_to_permutation(gates_a, gates_b, n: int, perm, eps: float, platform=None) -> bool:
    """True iff relabeling circuit_b's output qubit q to perm[q] yields a
    circuit phase-equivalent to circuit_a.

    This is the router contract: a routed circuit equals the original
    followed by the net wire permutation its SWAPs produced, so comparing
    P.U_routed against U_original with P built from the final mapping's
    physical-to-virtual view certifies routing.
    """
    if n > EQUIV_MAX_QUBITS:
        raise TooManyQubits(f"equivalence check limited to {EQUIV_MAX_QUBITS} qubits")
    p = permutation_matrix(perm, n)
    ua = circuit_unitary(gates_a, n, platform)
    ub = circuit_unitary(gates_b, n, platform)
    return infidelity(ua, p @ ub) <= eps
