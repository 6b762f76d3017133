"""Initial placement and SWAP-insertion routing on a constrained topology.

Placement minimizes the summed excess hop distance of all two-qubit
interactions: exhaustively when the permutation space is small enough,
by a deterministic greedy otherwise (the result reports which regime ran).

The router walks gates in ASAP order, threading the virtual-to-physical
mapping through inserted SWAPs.  For a non-adjacent pair it enumerates
every shortest path and every split point along it, scoring candidates by
the resulting ASAP depth with ties broken by SWAP count, then path, then
split point.  Routed operands are physical indices.
"""
from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass

from .errors import DisconnectedTopology, TooManyVirtualQubits, WrongArity
from .ir import Gate
from .platform import Topology
from .schedule import gate_duration_cycles, schedule_asap


@dataclass(frozen=True)
class Mapping:
    """Bijection between virtual and physical qubits."""

    v2p: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.v2p) != list(range(len(self.v2p))):
            raise TooManyVirtualQubits(f"v2p {self.v2p} is not a bijection")

    @property
    def p2v(self) -> tuple[int, ...]:
        inv = [0] * len(self.v2p)
        for v, p in enumerate(self.v2p):
            inv[p] = v
        return tuple(inv)

    def swapped(self, pa: int, pb: int) -> "Mapping":
        """Mapping after a physical SWAP of pa and pb."""
        p2v = list(self.p2v)
        p2v[pa], p2v[pb] = p2v[pb], p2v[pa]
        v2p = [0] * len(p2v)
        for p, v in enumerate(p2v):
            v2p[v] = p
        return Mapping(tuple(v2p))

    @staticmethod
    def identity(n: int) -> "Mapping":
        return Mapping(tuple(range(n)))


def distance_matrix(topology: Topology) -> list[list[int]]:
    """All-pairs shortest hop counts (BFS per node)."""
    n = topology.qubit_count
    dist = [[-1] * n for _ in range(n)]
    for s in range(n):
        dist[s][s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in topology.neighbors(u):
                if dist[s][v] < 0:
                    dist[s][v] = dist[s][u] + 1
                    queue.append(v)
    for s in range(n):
        if any(d < 0 for d in dist[s]):
            raise DisconnectedTopology(f"qubit {s} cannot reach the whole topology")
    return dist


@dataclass(frozen=True)
class PlacementResult:
    mapping: Mapping
    cost: int
    exact: bool


def _interaction_pairs(gates) -> Counter:
    pairs: Counter = Counter()
    for g in gates:
        if len(g.operands) == 2:
            a, b = g.operands
            pairs[(min(a, b), max(a, b))] += 1
    return pairs


def _placement_cost(v2p, pairs, dist) -> int:
    return sum(w * (dist[v2p[a]][v2p[b]] - 1) for (a, b), w in pairs.items())


def _pad_mapping(partial: dict[int, int], n_phys: int) -> Mapping:
    """Extend a partial virtual->physical assignment to a bijection on the
    physical count; unused physicals get fresh padding virtuals."""
    used_phys = set(partial.values())
    free = [p for p in range(n_phys) if p not in used_phys]
    v2p = []
    for v in range(n_phys):
        if v in partial:
            v2p.append(partial[v])
        else:
            v2p.append(free.pop(0))
    return Mapping(tuple(v2p))


def initial_placement(gates, topology: Topology, budget: int = 100_000) -> PlacementResult:
    """Minimize sum over two-qubit gates of (distance - 1).

    Exhaustive permutation search when the assignment space is within
    ``budget``; otherwise a greedy pass placing the busiest interacting
    pairs on the highest-degree adjacent physical qubits.
    """
    gates = list(gates)
    n_phys = topology.qubit_count
    n_virtual = max((o for g in gates for o in g.operands), default=-1) + 1
    if n_virtual > n_phys:
        raise TooManyVirtualQubits(
            f"circuit uses {n_virtual} virtual qubits, topology has {n_phys}"
        )
    dist = distance_matrix(topology)
    pairs = _interaction_pairs(gates)
    if not pairs:
        return PlacementResult(Mapping.identity(n_phys), 0, True)

    space = 1
    for i in range(n_virtual):
        space *= n_phys - i
        if space > budget:
            break
    if n_virtual <= 8 and space <= budget:
        best = None
        best_cost = None
        for perm in itertools.permutations(range(n_phys), n_virtual):
            cost = _placement_cost(perm, pairs, dist)
            if best_cost is None or cost < best_cost:
                best, best_cost = perm, cost
                if cost == 0:
                    break
        mapping = _pad_mapping(dict(enumerate(best)), n_phys)
        return PlacementResult(mapping, best_cost, True)

    # greedy: busiest pairs onto adjacent physicals with the highest degree
    degree = [len(topology.neighbors(p)) for p in range(n_phys)]
    partial: dict[int, int] = {}
    taken: set[int] = set()

    def best_free_edge():
        cands = [
            (a, b) for (a, b) in sorted(topology.edges)
            if a not in taken and b not in taken
        ]
        if not cands:
            return None
        return max(cands, key=lambda e: (degree[e[0]] + degree[e[1]], -e[0], -e[1]))

    for (a, b), _w in sorted(pairs.items(), key=lambda kv: (-kv[1], kv[0])):
        pa, pb = partial.get(a), partial.get(b)
        if pa is not None and pb is not None:
            continue
        if pa is None and pb is None:
            edge = best_free_edge()
            if edge is None:
                continue
            partial[a], partial[b] = edge
            taken.update(edge)
        else:
            placed_phys = pa if pa is not None else pb
            other = b if pa is not None else a
            frees = [p for p in topology.neighbors(placed_phys) if p not in taken]
            if not frees:
                frees = [p for p in range(n_phys) if p not in taken]
            choice = max(frees, key=lambda p: (degree[p], -p))
            partial[other] = choice
            taken.add(choice)
    for v in range(n_virtual):
        if v not in partial:
            free = [p for p in range(n_phys) if p not in taken]
            partial[v] = free[0]
            taken.add(partial[v])
    mapping = _pad_mapping(partial, n_phys)
    return PlacementResult(mapping, _placement_cost(mapping.v2p, pairs, dist), False)


def _shortest_paths(topology: Topology, dist, src: int, dst: int) -> list[tuple[int, ...]]:
    """All shortest paths src -> dst, lexicographically ordered."""
    paths = []

    def extend(path):
        u = path[-1]
        if u == dst:
            paths.append(tuple(path))
            return
        for v in topology.neighbors(u):
            if dist[v][dst] == dist[u][dst] - 1:
                extend(path + [v])

    extend([src])
    return sorted(paths)


def _realize_swap(pa: int, pb: int, platform) -> list[Gate]:
    """Physical SWAP as the platform spells it: a native swap instruction,
    else 3 CNOTs, each run through the platform decomposition rules."""
    swap = Gate("swap", (pa, pb))
    if platform is None:
        return [swap]
    if platform.find_instruction(swap) is not None:
        return [swap]
    expansion = [Gate("cnot", (pa, pb)), Gate("cnot", (pb, pa)), Gate("cnot", (pa, pb))]
    realized = []
    for g in expansion:
        realized.extend(platform.apply_custom_decomposition(g))
    return realized


@dataclass
class RouteResult:
    gates: list[Gate]
    final_mapping: Mapping
    initial_mapping: Mapping
    swaps_added: int = 0
    depth_before: int = 0
    depth_after: int = 0


class _DepthTracker:
    """Greedy ASAP depth of an append-only physical circuit."""

    def __init__(self, n_phys: int, platform):
        self.busy = [0] * n_phys
        self.platform = platform

    def add(self, gate: Gate) -> None:
        start = max(self.busy[o] for o in gate.operands)
        end = start + gate_duration_cycles(gate, self.platform)
        for o in gate.operands:
            self.busy[o] = end

    def depth(self) -> int:
        return max(self.busy, default=0)

    def clone(self) -> "_DepthTracker":
        c = _DepthTracker(0, self.platform)
        c.busy = list(self.busy)
        return c


def route(gates, topology: Topology, initial: Mapping, platform=None) -> RouteResult:
    """Insert SWAPs so every two-qubit gate acts on adjacent physicals.

    The output satisfies simulate(routed) = P . simulate(input) where P
    relabels physical wire p to virtual p2v_final[p] (checked by
    ``sim.equivalent_up_to_permutation``).
    """
    gates = list(gates)
    dist = distance_matrix(topology)
    if any(len(g.operands) > 2 for g in gates):
        raise WrongArity("route expects gates of at most 2 operands (run decompose first)")

    asap = schedule_asap(gates, platform)
    order = sorted(range(len(gates)), key=lambda i: (asap.entries[i].start, i))

    mapping = initial
    tracker = _DepthTracker(topology.qubit_count, platform)
    out: list[Gate] = []
    swaps_added = 0

    def emit(gate: Gate) -> None:
        out.append(gate)
        tracker.add(gate)

    for idx in order:
        gate = gates[idx]
        phys = tuple(mapping.v2p[v] for v in gate.operands)
        if len(phys) < 2 or topology.adjacent(*phys):
            emit(Gate(gate.name, phys, gate.angle))
            continue
        pa, pb = phys
        best = None
        for path in _shortest_paths(topology, dist, pa, pb):
            n_swaps = len(path) - 2
            for split in range(len(path) - 1):
                swaps = [(path[i], path[i + 1]) for i in range(split)]
                swaps += [
                    (path[i], path[i - 1]) for i in range(len(path) - 1, split + 1, -1)
                ]
                trial = tracker.clone()
                realized: list[Gate] = []
                for sa, sb in swaps:
                    for g in _realize_swap(sa, sb, platform):
                        trial.add(g)
                        realized.append(g)
                final_gate = Gate(gate.name, (path[split], path[split + 1]), gate.angle)
                trial.add(final_gate)
                key = (trial.depth(), n_swaps, path, split)
                if best is None or key < best[0]:
                    best = (key, swaps, realized, final_gate)
        _key, swaps, realized, final_gate = best
        for sa, sb in swaps:
            mapping = mapping.swapped(sa, sb)
        for g in realized:
            emit(g)
        emit(final_gate)
        swaps_added += len(swaps)

    depth_before = asap.makespan
    depth_after = schedule_asap(out, platform).makespan
    return RouteResult(
        gates=out, final_mapping=mapping, initial_mapping=initial,
        swaps_added=swaps_added, depth_before=depth_before, depth_after=depth_after,
    )
