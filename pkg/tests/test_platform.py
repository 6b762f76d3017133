"""Configuration loading, lookup, and custom decomposition."""
import json

import numpy as np
import pytest

from conftest import TRANSMON_CONFIG, plain_config
from quantcc import Gate, load_platform
from quantcc.errors import (
    DecompositionCycle,
    ParseError,
    SchemaError,
    UnboundOperand,
    UnknownInstruction,
    ValidationError,
)


def load(doc, name="test"):
    return load_platform(json.dumps(doc), name)


class TestLoad:
    def test_reference_listing_loads(self, transmon):
        assert transmon.qubit_number == 2
        assert transmon.cycle_time_ns == 5
        d = transmon.instructions["rx180 q1"]
        assert d.duration_ns == 40
        assert d.latency_ns == 20
        assert d.qubits == ("q1",)
        assert np.array_equal(d.matrix, np.array([[0, 1], [1, 0]], dtype=complex))
        assert d.type == "mw"
        assert d.backend_opaque["qumis_instr"] == "pulse"
        assert d.backend_opaque["qumis_instr_kw"]["awg_nr"] == 2

    def test_missing_hardware_settings(self):
        with pytest.raises(SchemaError):
            load({"eqasm_compiler": "x", "instructions": {}})

    def test_missing_instructions(self):
        with pytest.raises(SchemaError):
            load({"eqasm_compiler": "x",
                  "hardware_settings": {"qubit_number": 1, "cycle_time": 1}})

    def test_malformed_json(self):
        with pytest.raises(ParseError):
            load_platform("{ not json", "bad")

    def test_bad_instruction_type(self):
        doc = plain_config(2, durations={"h": 1})
        doc["instructions"]["h"]["type"] = "laser"
        with pytest.raises(SchemaError):
            load(doc)

    def test_zero_duration_rejected(self):
        doc = plain_config(2, durations={"h": 1})
        doc["instructions"]["h"]["duration"] = 0
        with pytest.raises(SchemaError):
            load(doc)

    def test_negative_latency_accepted(self):
        doc = plain_config(2, durations={"h": 10})
        doc["instructions"]["h"]["latency"] = -5
        p = load(doc)
        assert p.instructions["h"].latency_ns == -5

    def test_topology_edges_validated(self):
        doc = plain_config(2)
        doc["topology"] = {"qubit_count": 2, "edges": [[0, 5]]}
        with pytest.raises(ValidationError):
            load(doc)
        doc["topology"] = {"qubit_count": 2, "edges": [[1, 1]]}
        with pytest.raises(ValidationError):
            load(doc)

    def test_empty_topology_is_fully_connected(self, transmon):
        assert transmon.topology.adjacent(0, 1)

    def test_undefined_resource_rejected(self):
        doc = plain_config(2, durations={"h": 1})
        doc["instructions"]["h"]["uses"] = [{"resource": "awg", "units": 1}]
        with pytest.raises(ValidationError):
            load(doc)
        doc["resources"] = {"awg": {"count": 1}}
        p = load(doc)
        assert p.gate_uses(Gate("h", (0,))) == (("awg", 1),)


class TestLookup:
    def test_specialized_keys_shadow_generic(self, transmon):
        d0 = transmon.lookup_instruction(Gate("rx180", (0,)))
        d1 = transmon.lookup_instruction(Gate("rx180", (1,)))
        assert d0.backend_opaque["qumis_instr"] == "codeword_trigger"
        assert d1.backend_opaque["qumis_instr"] == "pulse"
        assert d1.latency_ns == 20

    def test_generic_fallback(self, transmon):
        d = transmon.lookup_instruction(Gate("measure", (1,)))
        assert d.duration_ns == 300

    def test_unknown_instruction(self, transmon):
        with pytest.raises(UnknownInstruction):
            transmon.lookup_instruction(Gate("foo", (0,)))

    def test_ceil_division(self, transmon):
        # 40 ns at 5 ns/cycle
        d = transmon.lookup_instruction(Gate("rx180", (1,)))
        assert d.duration_cycles(5) == 8

    def test_ceil_division_bounds(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            duration = int(rng.integers(1, 500))
            cycle = int(rng.integers(1, 30))
            doc = plain_config(1, cycle_time=cycle, durations={"h": duration})
            p = load(doc)
            cycles = p.gate_duration_cycles(Gate("h", (0,)))
            assert cycles * cycle >= duration
            assert (cycles - 1) * cycle < duration


class TestDecompositionRules:
    def test_cnot_rule_verbatim(self, transmon):
        out = transmon.apply_custom_decomposition(Gate("cnot", (0, 1)))
        assert [g.text() for g in out] == ["ry90 q1", "cz q0,q1", "ry90 q1"]

    def test_z_rule(self, transmon):
        out = transmon.apply_custom_decomposition(Gate("z", (0,)))
        assert [g.text() for g in out] == ["ry180 q0", "rx180 q0"]

    def test_h_rule_resolves(self, transmon):
        out = transmon.apply_custom_decomposition(Gate("h", (0,)))
        assert [g.text() for g in out] == ["ry90 q0"]

    def test_positional_binding_on_other_operands(self, transmon):
        # the rule key 'cnot q0,q1' binds positionally: cnot(1,0) rewrites too
        out = transmon.apply_custom_decomposition(Gate("cnot", (1, 0)))
        assert [g.text() for g in out] == ["ry90 q0", "cz q1,q0", "ry90 q0"]

    def test_recursive_rules_reach_fixpoint(self):
        doc = plain_config(2, durations={"rx180": 10})
        doc["gate_decomposition"] = {
            "x q0": ["flip q0"],
            "flip q0": ["rx180 q0"],
        }
        p = load(doc)
        out = p.apply_custom_decomposition(Gate("x", (0,)))
        assert [g.text() for g in out] == ["rx180 q0"]

    def test_self_reference_cycle(self):
        doc = plain_config(2)
        doc["gate_decomposition"] = {"a q0": ["a q0"]}
        p = load(doc)
        with pytest.raises(DecompositionCycle):
            p.apply_custom_decomposition(Gate("a", (0,)))

    def test_mutual_cycle(self):
        doc = plain_config(2)
        doc["gate_decomposition"] = {"a q0": ["b q0"], "b q0": ["a q0"]}
        p = load(doc)
        with pytest.raises(DecompositionCycle):
            p.apply_custom_decomposition(Gate("a", (0,)))

    def test_unbound_operand(self):
        doc = plain_config(3, durations={"cz": 10})
        doc["gate_decomposition"] = {"h q0": ["cz q0,q1"]}
        p = load(doc)
        with pytest.raises(UnboundOperand):
            p.apply_custom_decomposition(Gate("h", (2,)))

    def test_undefined_rhs_rejected_at_load(self):
        doc = plain_config(2)
        doc["gate_decomposition"] = {"h q0": ["warble q0"]}
        with pytest.raises(ValidationError):
            load(doc)

    def test_angle_template(self):
        doc = plain_config(2)
        doc["gate_decomposition"] = {"halfturn q0": ["rx q0, 3.14159"]}
        p = load(doc)
        out = p.apply_custom_decomposition(Gate("halfturn", (0,)))
        assert out[0].name == "rx" and abs(out[0].angle - 3.14159) < 1e-12


class TestRoundTrip:
    def test_reference_fields_lossless(self, transmon):
        doc = transmon.to_document()
        src = TRANSMON_CONFIG
        assert doc["eqasm_compiler"] == src["eqasm_compiler"]
        hw = doc["hardware_settings"]
        assert hw["qubit_number"] == 2 and hw["cycle_time"] == 5
        assert hw["mw_mw_buffer"] == 0 and hw["mw_flux_buffer"] == 0
        for key, entry in src["instructions"].items():
            got = doc["instructions"][key]
            assert got["duration"] == entry["duration"]
            assert got["latency"] == entry.get("latency", 0)
            assert got["qubits"] == entry.get("qubits", [])
            if "matrix" in entry:
                assert got["matrix"] == entry["matrix"]
            assert got["disable_optimization"] == entry.get("disable_optimization", False)
            assert got["type"] == entry.get("type", "none")
            for opaque in ("qumis_instr", "qumis_instr_kw"):
                if opaque in entry:
                    assert got[opaque] == entry[opaque]
        assert doc["gate_decomposition"] == src["gate_decomposition"]

    def test_round_trip_reloads(self, transmon):
        again = load_platform(json.dumps(transmon.to_document()), "again")
        assert again.qubit_number == transmon.qubit_number
        assert set(again.instructions) == set(transmon.instructions)
        assert set(again.rules) == set(transmon.rules)
