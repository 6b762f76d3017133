"""Cycle assignment: ASAP, ALAP, Uniform ALAP, and resource-constrained
variants.

Start cycles come from longest paths over the gate dependency graph.  The
edge weight from gate a to gate b on a shared qubit is a's duration plus
any configured inter-type buffer (in cycles).  Gates without a platform
entry take one cycle and claim no resources, so technology-independent
circuits still schedule.

Resource-constrained schedules are VLIW-like: claims are held for a
gate's whole duration and the result never violates a resource count at
any cycle, so hardware can fire gates exactly at their start cycles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import UnschedulableGate
from .ir import Gate
from .optimize import SOURCE, build_gdg


@dataclass(frozen=True)
class ScheduleEntry:
    gate: Gate
    index: int  # original program position
    start: int
    duration: int

    @property
    def end(self) -> int:
        return self.start + self.duration


@dataclass
class Schedule:
    entries: list[ScheduleEntry] = field(default_factory=list)

    @property
    def makespan(self) -> int:
        return max((e.end for e in self.entries), default=0)

    @property
    def bundles(self) -> dict[int, list[ScheduleEntry]]:
        out: dict[int, list[ScheduleEntry]] = {}
        for e in self.entries:
            out.setdefault(e.start, []).append(e)
        return {c: sorted(v, key=lambda e: e.index) for c, v in sorted(out.items())}

    def starts(self) -> list[int]:
        return [e.start for e in self.entries]


def gate_duration_cycles(gate: Gate, platform=None) -> int:
    if platform is None:
        return 1
    return platform.gate_duration_cycles(gate)


def _weights(gates, platform):
    """durations plus forward dependency edges (src, dst, weight)."""
    durations = [gate_duration_cycles(g, platform) for g in gates]
    types = [platform.gate_type(g) if platform is not None else "none" for g in gates]
    edges = []
    for e in build_gdg(gates).edges:
        if e.src == SOURCE or e.dst == len(gates):
            continue
        w = durations[e.src]
        if platform is not None:
            w += platform.buffer_cycles(types[e.src], types[e.dst])
        edges.append((e.src, e.dst, w))
    return durations, edges


def _make_schedule(gates, starts, durations) -> Schedule:
    entries = [
        ScheduleEntry(replace(g, duration_cycles=durations[i]), i, starts[i], durations[i])
        for i, g in enumerate(gates)
    ]
    return Schedule(entries=entries)


def schedule_asap(gates, platform=None) -> Schedule:
    """Minimal start cycles: longest-path values from the dependency source."""
    gates = list(gates)
    durations, edges = _weights(gates, platform)
    starts = [0] * len(gates)
    # program order is topological, so relaxing edges by ascending head
    # sees only final tail values
    for src, dst, w in sorted(edges, key=lambda e: e[1]):
        starts[dst] = max(starts[dst], starts[src] + w)
    return _make_schedule(gates, starts, durations)


def schedule_alap(gates, platform=None) -> Schedule:
    """Maximal start cycles at the ASAP makespan (backward longest path)."""
    gates = list(gates)
    durations, edges = _weights(gates, platform)
    horizon = schedule_asap(gates, platform).makespan
    starts = [horizon - durations[i] for i in range(len(gates))]
    for src, dst, w in sorted(edges, key=lambda e: e[0], reverse=True):
        starts[src] = min(starts[src], starts[dst] - w)
    return _make_schedule(gates, starts, durations)


def _uniform_backward(gates, starts, durations, edges, makespan,
                      move_ok=lambda gate_idx, frm, to: True) -> list[int]:
    """Backward pass moving gates later while destination cycles stay
    below the uniform target ceil(N / makespan)."""
    if not gates or makespan == 0:
        return starts
    target = math.ceil(len(gates) / makespan)
    succ: dict[int, list[tuple[int, int]]] = {}
    for src, dst, w in edges:
        succ.setdefault(src, []).append((dst, w))
    counts: dict[int, int] = {}
    for s in starts:
        counts[s] = counts.get(s, 0) + 1
    for i in range(len(gates) - 1, -1, -1):
        latest = makespan - durations[i]
        for dst, w in succ.get(i, ()):
            latest = min(latest, starts[dst] - w)
        for c in range(latest, starts[i], -1):
            if counts.get(c, 0) < target and move_ok(i, starts[i], c):
                counts[starts[i]] -= 1
                counts[c] = counts.get(c, 0) + 1
                starts[i] = c
                break
    return starts


def schedule_uniform_alap(gates, platform=None) -> Schedule:
    """ASAP start, then a backward pass balancing gates per cycle while
    keeping the ASAP makespan."""
    gates = list(gates)
    durations, edges = _weights(gates, platform)
    asap = schedule_asap(gates, platform)
    starts = _uniform_backward(gates, asap.starts(), durations, edges, asap.makespan)
    return _make_schedule(gates, starts, durations)


class _ResourceTable:
    def __init__(self, model):
        self.model = model
        self.usage: dict[tuple[int, str], int] = {}

    def fits(self, claims, start: int, duration: int) -> bool:
        for resource, units in claims:
            cap = self.model.capacity(resource)
            for c in range(start, start + duration):
                if self.usage.get((c, resource), 0) + units > cap:
                    return False
        return True

    def hold(self, claims, start: int, duration: int) -> None:
        for resource, units in claims:
            for c in range(start, start + duration):
                self.usage[(c, resource)] = self.usage.get((c, resource), 0) + units

    def release(self, claims, start: int, duration: int) -> None:
        for resource, units in claims:
            for c in range(start, start + duration):
                self.usage[(c, resource)] -= units


def _list_schedule(n: int, durations, edges, claims, model, order) -> list[int]:
    """Forward list scheduling; ready gates tried in ``order`` each cycle."""
    preds: dict[int, list[tuple[int, int]]] = {}
    succ: dict[int, list[tuple[int, int]]] = {}
    for src, dst, w in edges:
        preds.setdefault(dst, []).append((src, w))
        succ.setdefault(src, []).append((dst, w))
    table = _ResourceTable(model)
    starts = [None] * n
    unplaced = set(range(n))
    cycle = 0
    guard = sum(durations) + sum(w for _s, _d, w in edges) + n + 1
    while unplaced:
        for i in order:
            if i not in unplaced:
                continue
            ps = preds.get(i, ())
            if any(starts[s] is None for s, _w in ps):
                continue
            est = max((starts[s] + w for s, w in ps), default=0)
            if est > cycle:
                continue
            if not table.fits(claims[i], cycle, durations[i]):
                continue
            table.hold(claims[i], cycle, durations[i])
            starts[i] = cycle
            unplaced.remove(i)
        cycle += 1
        if cycle > guard:
            raise UnschedulableGate("list scheduler failed to converge")
    return starts


def schedule_resource_constrained(gates, platform, direction: str = "asap") -> Schedule:
    """List scheduling under the platform resource model.

    ``direction='alap'`` schedules the reversed dependency graph and
    mirrors the result, so gates land as late as the resources allow.
    ``direction='uniform'`` runs the balanced backward pass on top of the
    ASAP result with resource-feasibility checks on every move.
    """
    gates = list(gates)
    n = len(gates)
    durations, edges = _weights(gates, platform)
    claims = [list(platform.gate_uses(g)) for g in gates]
    for g, cl in zip(gates, claims):
        for resource, units in cl:
            if units > platform.resources.capacity(resource):
                raise UnschedulableGate(
                    f"{g.text()} claims {units} of {resource!r} "
                    f"(capacity {platform.resources.capacity(resource)})"
                )
    if direction == "asap":
        starts = _list_schedule(n, durations, edges, claims, platform.resources, range(n))
        return _make_schedule(gates, starts, durations)
    if direction == "alap":
        # reversed time: forward edge (a, b, dur_a + buf) becomes (b, a, dur_b + buf)
        redges = [(dst, src, durations[dst] + (w - durations[src])) for src, dst, w in edges]
        rstarts = _list_schedule(n, durations, redges, claims, platform.resources,
                                 range(n - 1, -1, -1))
        horizon = max((rstarts[i] + durations[i] for i in range(n)), default=0)
        starts = [horizon - rstarts[i] - durations[i] for i in range(n)]
        return _make_schedule(gates, starts, durations)
    if direction == "uniform":
        starts = _list_schedule(n, durations, edges, claims, platform.resources, range(n))
        makespan = max((starts[i] + durations[i] for i in range(n)), default=0)
        table = _ResourceTable(platform.resources)
        for i in range(n):
            table.hold(claims[i], starts[i], durations[i])

        def move_ok(i, frm, to):
            table.release(claims[i], frm, durations[i])
            ok = table.fits(claims[i], to, durations[i])
            table.hold(claims[i], to if ok else frm, durations[i])
            return ok

        starts = _uniform_backward(gates, starts, durations, edges, makespan, move_ok)
        return _make_schedule(gates, starts, durations)
    raise ValueError(f"unknown direction {direction!r}")


def audit_resources(schedule: Schedule, platform) -> list[str]:
    """Exhaustive per-cycle audit; returns violation descriptions."""
    usage: dict[tuple[int, str], int] = {}
    for e in schedule.entries:
        for resource, units in platform.gate_uses(e.gate):
            for c in range(e.start, e.end):
                usage[(c, resource)] = usage.get((c, resource), 0) + units
    violations = []
    for (c, resource), used in sorted(usage.items()):
        if used > platform.resources.capacity(resource):
            violations.append(
                f"cycle {c}: {resource} used {used} > {platform.resources.capacity(resource)}"
            )
    return violations
