"""Shared fixtures: the reference two-qubit transmon configuration, random
unitaries/circuits, and the phase-aligned comparison helper."""
from __future__ import annotations

import json

import numpy as np
import pytest

from quantcc import Gate, load_platform

# Two-qubit transmon configuration: rx180 per qubit with distinct latencies
# and backends, prepz with optimization disabled, plus the composite-gate
# rewrite rules (cnot via cz, etc.).  The instructions the rules reference
# are all defined so validation passes.
TRANSMON_CONFIG = {
    "eqasm_compiler": "qumis_compiler",
    "hardware_settings": {
        "qubit_number": 2,
        "cycle_time": 5,
        "mw_mw_buffer": 0,
        "mw_flux_buffer": 0,
    },
    "instructions": {
        "rx180 q1": {
            "duration": 40,
            "latency": 20,
            "qubits": ["q1"],
            "matrix": [[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
            "disable_optimization": False,
            "type": "mw",
            "qumis_instr": "pulse",
            "qumis_instr_kw": {"codeword": 1, "awg_nr": 2},
        },
        "rx180 q0": {
            "duration": 40,
            "latency": 10,
            "qubits": ["q0"],
            "matrix": [[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
            "disable_optimization": False,
            "type": "mw",
            "qumis_instr": "codeword_trigger",
            "qumis_instr_kw": {
                "codeword_ready_bit": 0,
                "codeword_ready_bit_duration": 5,
                "codeword_bits": [1, 2, 3, 4],
                "codeword": 1,
            },
        },
        "prepz q0": {
            "duration": 100,
            "latency": 0,
            "qubits": ["q0"],
            "matrix": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]],
            "disable_optimization": True,
            "type": "mw",
            "qumis_instr": "trigger_sequence",
            "qumis_instr_kw": {"trigger_channel": 4, "trigger_width": 0},
        },
        "ry90": {
            "duration": 40,
            "latency": 0,
            "qubits": [],
            "matrix": [
                [0.7071067811865476, 0.0],
                [0.7071067811865476, 0.0],
                [-0.7071067811865476, 0.0],
                [0.7071067811865476, 0.0],
            ],
            "type": "mw",
        },
        "ry180": {
            "duration": 40,
            "latency": 0,
            "qubits": [],
            "matrix": [[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [0.0, 0.0]],
            "type": "mw",
        },
        "cz": {"duration": 80, "latency": 0, "qubits": [], "type": "flux"},
        "measure": {"duration": 300, "latency": 0, "qubits": [], "type": "readout"},
        "prepz": {"duration": 100, "latency": 0, "qubits": [], "type": "mw"},
    },
    "gate_decomposition": {
        "x q0": ["rx180 q0"],
        "y q0": ["ry180 q0"],
        "z q0": ["ry180 q0", "rx180 q0"],
        "h q0": ["ry90 q0"],
        "cnot q0,q1": ["ry90 q1", "cz q0,q1", "ry90 q1"],
    },
    "resources": {},
    "topology": {},
}

# Minimal configuration: N qubits, unit cycle, no rewrite rules.  Durations
# are per-gate so scheduling examples have non-trivial cycle counts.
def plain_config(qubit_number=4, cycle_time=1, durations=None, **extra):
    instructions = {}
    for name, dur in (durations or {}).items():
        instructions[name] = {"duration": dur, "latency": 0, "qubits": [], "type": "mw"}
    doc = {
        "eqasm_compiler": "none",
        "hardware_settings": {"qubit_number": qubit_number, "cycle_time": cycle_time},
        "instructions": instructions,
    }
    for key, value in extra.items():
        if key.endswith("_buffer"):
            doc["hardware_settings"][key] = value
        else:
            doc[key] = value
    return doc


@pytest.fixture
def transmon():
    return load_platform(json.dumps(TRANSMON_CONFIG), "transmon")


@pytest.fixture
def plain4():
    return load_platform(json.dumps(plain_config(4)), "plain4")


def rand_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


ONE_QUBIT_POOL = ("h", "x", "y", "z", "s", "sdag", "t", "tdag", "rx", "ry", "rz")
TWO_QUBIT_POOL = ("cnot", "cz", "swap")


def rand_circuit(rng: np.random.Generator, n_qubits: int, n_gates: int,
                 two_qubit_prob: float = 0.35) -> list[Gate]:
    gates = []
    for _ in range(n_gates):
        if n_qubits >= 2 and rng.random() < two_qubit_prob:
            name = TWO_QUBIT_POOL[rng.integers(len(TWO_QUBIT_POOL))]
            a, b = rng.choice(n_qubits, size=2, replace=False)
            gates.append(Gate(name, (int(a), int(b))))
        else:
            name = ONE_QUBIT_POOL[rng.integers(len(ONE_QUBIT_POOL))]
            q = int(rng.integers(n_qubits))
            angle = float(rng.uniform(-np.pi, np.pi)) if name in ("rx", "ry", "rz") else None
            gates.append(Gate(name, (q,), angle))
    return gates


def phase_aligned_error(u: np.ndarray, v: np.ndarray) -> float:
    """max |U - c V| over entries, with |c|=1 chosen from the trace overlap."""
    tr = np.vdot(v.ravel(), u.ravel())  # tr(V^dag U)
    if abs(tr) < 1e-300:
        return float(np.max(np.abs(u - v)))
    c = tr / abs(tr)
    return float(np.max(np.abs(u - c * v)))
