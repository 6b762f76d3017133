"""Per-pass compilation report: delimited text plus rendered figures.

The report path gets a TSV table of pass metrics; two matplotlib figures
land next to it (gate counts per pass, and gates per cycle of the final
schedule when one exists).
"""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_HEADER = "pass\tgates\ttwo_qubit_gates\tdepth\tswaps_added\tmakespan"


def report_rows(result) -> list[str]:
    rows = [_HEADER]
    for r in result.reports:
        makespan = "" if r.makespan is None else str(r.makespan)
        rows.append(
            f"{r.name}\t{r.gate_count}\t{r.two_qubit_count}\t{r.depth}\t{r.swaps_added}\t{makespan}"
        )
    return rows


def write_report(result, path: str) -> list[str]:
    """Write the TSV report and its figures; returns all written paths."""
    written = [path]
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(report_rows(result)) + "\n")
    stem, _ext = os.path.splitext(path)
    written.append(_plot_gate_counts(result, f"{stem}_gate_counts.png"))
    occupancy = _plot_cycle_occupancy(result, f"{stem}_cycle_occupancy.png")
    if occupancy:
        written.append(occupancy)
    return written


def _plot_gate_counts(result, path: str) -> str:
    names = [r.name for r in result.reports]
    gates = [r.gate_count for r in result.reports]
    two_q = [r.two_qubit_count for r in result.reports]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    xs = range(len(names))
    ax.bar([x - 0.2 for x in xs], gates, width=0.4, label="gates")
    ax.bar([x + 0.2 for x in xs], two_q, width=0.4, label="two-qubit")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names)
    ax.set_ylabel("count")
    ax.set_title("gate counts per pass")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _plot_cycle_occupancy(result, path: str) -> str | None:
    if not result.schedules:
        return None
    counts: dict[int, int] = {}
    offset = 0
    for schedule in result.schedules:
        if schedule is None:
            continue
        for cycle, entries in schedule.bundles.items():
            counts[offset + cycle] = counts.get(offset + cycle, 0) + len(entries)
        offset += schedule.makespan
    if not counts:
        return None
    cycles = list(range(max(counts) + 1))
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar(cycles, [counts.get(c, 0) for c in cycles], width=0.9)
    ax.set_xlabel("cycle")
    ax.set_ylabel("gates starting")
    ax.set_title("schedule occupancy")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
