"""Built-in example programs for the CLI and the golden tests."""
from __future__ import annotations

from .ir import Program


def build_bell(platform) -> Program:
    """Bell-pair preparation: init / epr / measure kernels on two qubits."""
    prog = Program("bell_pair", 2, platform)
    k1 = prog.new_kernel("init")
    k1.add_gate("prepz", [0])
    k1.add_gate("prepz", [1])
    k2 = prog.new_kernel("epr")
    k2.add_gate("h", [0])
    k2.add_gate("cnot", [0, 1])
    k3 = prog.new_kernel("measure")
    k3.add_gate("measure", [0])
    k3.add_gate("measure", [1])
    return prog


def build_grover_3q(platform) -> Program:
    """Grover search over a 4-bit pattern with an oracle qubit and a
    Toffoli AND-ladder over ancilla qubits 5..8; the core kernel repeats
    three times."""
    prog = Program("grover_3q", 9, platform)

    init = prog.new_kernel("init")
    init.add_gate("x", [4])
    for q in range(5):
        init.add_gate("h", [q])

    core = prog.new_kernel("grover", iterations=3)
    # oracle: searched pattern |0100>
    core.add_gate("x", [2])
    core.add_gate("toffoli", [0, 1, 5])
    core.add_gate("toffoli", [1, 5, 6])
    core.add_gate("toffoli", [2, 6, 7])
    core.add_gate("toffoli", [3, 7, 8])
    core.add_gate("cnot", [8, 4])
    core.add_gate("toffoli", [3, 7, 8])
    core.add_gate("toffoli", [2, 6, 7])
    core.add_gate("toffoli", [1, 5, 6])
    core.add_gate("toffoli", [0, 1, 5])
    core.add_gate("x", [2])
    # diffusion operator
    for q in range(4):
        core.add_gate("h", [q])
    for q in range(4):
        core.add_gate("x", [q])
    core.add_gate("h", [3])
    core.add_gate("toffoli", [0, 1, 5])
    core.add_gate("toffoli", [1, 5, 6])
    core.add_gate("toffoli", [2, 6, 7])
    core.add_gate("cnot", [7, 3])
    core.add_gate("toffoli", [2, 6, 7])
    core.add_gate("toffoli", [1, 5, 6])
    core.add_gate("toffoli", [0, 1, 5])
    core.add_gate("h", [3])
    for q in range(4):
        core.add_gate("x", [q])
    for q in range(4):
        core.add_gate("h", [q])

    fin = prog.new_kernel("measure")
    fin.add_gate("h", [4])
    fin.add_gate("measure", [4])
    return prog


EXAMPLES = {
    "bell": build_bell,
    "grover-3q": build_grover_3q,
}


def build_example(name: str, platform) -> Program:
    try:
        builder = EXAMPLES[name]
    except KeyError:
        raise KeyError(
            f"unknown example {name!r}; available: {', '.join(sorted(EXAMPLES))}"
        )
    return builder(platform)
