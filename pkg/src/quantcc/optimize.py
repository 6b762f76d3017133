"""Gate dependency graph and sliding-window fusion of single-qubit runs.

A run is a maximal chain of fusable single-qubit gates that are adjacent
in the per-qubit dependency chain (not necessarily textually adjacent).
Runs fuse by matrix product: identities vanish, everything else
re-synthesizes through ZYZ into at most three rotations, accepted only
when strictly shorter and within the caller's error budget.

Tolerance semantics: ``epsilon`` bounds the *infidelity*
``1 - |tr(U^dag V)|/dim`` (the square of ``unitary_distance``); the
unsquared form floors at sqrt(machine epsilon) ~ 1e-8 and could never
meet budgets like 1e-9.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimMismatch, NoMatrixAvailable
from .ir import Gate, NON_UNITARY_GATES, gate_unitary
from .decompose import zyz_gates

SOURCE = -1

DEFAULT_EPSILON = 1e-9
DEFAULT_WINDOW = 8
_MAX_SWEEPS = 10


@dataclass(frozen=True)
class GDGEdge:
    src: int
    dst: int
    qubit: int
    kind: str = "order"


@dataclass
class GateDependencyGraph:
    """DAG over gate indices; SOURCE = -1 and SINK = len(gates)."""

    gates: list[Gate]
    edges: list[GDGEdge] = field(default_factory=list)
    chains: dict[int, list[int]] = field(default_factory=dict)

    @property
    def sink(self) -> int:
        return len(self.gates)

    def successors(self, node: int) -> list[GDGEdge]:
        return [e for e in self.edges if e.src == node]

    def predecessors(self, node: int) -> list[GDGEdge]:
        return [e for e in self.edges if e.dst == node]

    def adjacency(self) -> tuple[dict[int, list[GDGEdge]], dict[int, list[GDGEdge]]]:
        succ: dict[int, list[GDGEdge]] = {}
        pred: dict[int, list[GDGEdge]] = {}
        for e in self.edges:
            succ.setdefault(e.src, []).append(e)
            pred.setdefault(e.dst, []).append(e)
        return succ, pred


def build_gdg(gates) -> GateDependencyGraph:
    """Edge (a, b) iff a precedes b, they share a qubit, and nothing on
    that qubit sits between them; SOURCE feeds every chain head and every
    chain tail reaches SINK."""
    gates = list(gates)
    gdg = GateDependencyGraph(gates=gates)
    chains: dict[int, list[int]] = {}
    for i, g in enumerate(gates):
        for q in g.operands:
            chains.setdefault(q, []).append(i)
    gdg.chains = chains
    sink = len(gates)
    for q, chain in sorted(chains.items()):
        gdg.edges.append(GDGEdge(SOURCE, chain[0], q))
        for a, b in zip(chain, chain[1:]):
            gdg.edges.append(GDGEdge(a, b, q))
        gdg.edges.append(GDGEdge(chain[-1], sink, q))
    if not gates:
        gdg.edges.append(GDGEdge(SOURCE, sink, -1))
    return gdg


def unitary_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Phase-invariant metric sqrt(max(0, 1 - |tr(U^dag V)|/dim))."""
    if u.shape != v.shape:
        raise DimMismatch(f"shape mismatch {u.shape} vs {v.shape}")
    dim = u.shape[0]
    return float(np.sqrt(max(0.0, 1.0 - abs(np.vdot(u, v)) / dim)))


def _infidelity(u: np.ndarray, v: np.ndarray) -> float:
    dim = u.shape[0]
    return max(0.0, 1.0 - abs(np.vdot(u, v)) / dim)


def _normalize_angle(theta: float) -> float:
    """Fold into (-pi, pi]; a 2*pi turn is a global phase and drops out."""
    theta = float(np.mod(theta + np.pi, 2 * np.pi) - np.pi)
    return np.pi if theta == -np.pi else theta


def fuse_single_qubit_run(run, epsilon: float, platform=None) -> list[Gate] | None:
    """Fuse a same-qubit gate run; None when no strictly shorter and
    sufficiently close replacement exists."""
    run = list(run)
    if not run:
        return None
    qubit = run[0].operands[0]
    product = np.eye(2, dtype=complex)
    for g in run:
        product = gate_unitary(g, platform) @ product
    if _infidelity(product, np.eye(2)) <= epsilon:
        return []
    candidate = zyz_gates(product, qubit, keep_zero=False)
    candidate = [
        Gate(g.name, g.operands, _normalize_angle(g.angle)) for g in candidate
    ]
    candidate = [g for g in candidate if abs(g.angle) > 1e-12]
    if len(candidate) >= len(run):
        return None
    rebuilt = np.eye(2, dtype=complex)
    for g in candidate:
        rebuilt = gate_unitary(g) @ rebuilt
    if _infidelity(rebuilt, product) <= epsilon:
        return candidate
    return None


def _fusable(gate: Gate, platform=None) -> bool:
    if len(gate.operands) != 1 or gate.name in NON_UNITARY_GATES:
        return False
    if platform is not None and platform.gate_disable_optimization(gate):
        return False
    try:
        m = gate_unitary(gate, platform)
    except NoMatrixAvailable:
        return False
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(2))) < 1e-9)


def _fusable_runs(gates, platform=None) -> list[list[int]]:
    """Maximal per-qubit chains of fusable gates (indices into gates)."""
    runs: list[list[int]] = []
    chains = build_gdg(gates).chains
    for q in sorted(chains):
        current: list[int] = []
        for i in chains[q]:
            if _fusable(gates[i], platform):
                current.append(i)
            else:
                if len(current) >= 2:
                    runs.append(current)
                current = []
        if len(current) >= 2:
            runs.append(current)
    return runs


def optimize_circuit(gates, epsilon: float = DEFAULT_EPSILON,
                     window: int = DEFAULT_WINDOW, platform=None) -> list[Gate]:
    """Slide a window over every fusable run until fixpoint (<=10 sweeps).

    Replacement gates are placed at the position of the first gate of the
    fused chunk; since no other gate on that qubit lies inside the chunk's
    span this preserves all dependencies.  Gate count never increases.
    """
    gates = list(gates)
    if window < 2:
        return gates
    for _sweep in range(_MAX_SWEEPS):
        edits = []  # (first_pos, removed positions, replacement gates)
        for run in _fusable_runs(gates, platform):
            pos = 0
            while pos + 2 <= len(run):
                chunk = run[pos:pos + window]
                replacement = fuse_single_qubit_run(
                    [gates[i] for i in chunk], epsilon, platform
                )
                if replacement is not None and len(replacement) < len(chunk):
                    edits.append((chunk[0], set(chunk), replacement))
                    pos += len(chunk)
                else:
                    pos += 1
        if not edits:
            break
        removed = {}
        for first, chunk, replacement in edits:
            for i in chunk:
                removed[i] = None
            removed[first] = replacement
        rebuilt: list[Gate] = []
        for i, g in enumerate(gates):
            if i in removed:
                if removed[i] is not None:
                    rebuilt.extend(removed[i])
            else:
                rebuilt.append(g)
        gates = rebuilt
    return gates
