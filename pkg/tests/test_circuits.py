import numpy as np
import pytest
from hypothesis import given, strategies as st

from coherence_nogo.channels import choi_distance, dephasing_channel
from coherence_nogo.circuits import (
    Circuit,
    ClassicallyControlledGate,
    ControlledGate,
    Gate,
    Measure,
    circuit_branch_maps,
    circuit_channel,
    circuit_unitary,
    classify_op,
    controlled_unitary,
    defer_measurements,
    format_circuit,
    gadget_choi_distance,
    gadget_library,
    hadamard_count,
    parse_circuit,
    simulate,
)
from coherence_nogo.circuits.gadgets import diagonal_uk, teleport_gate
from coherence_nogo.errors import (
    CircuitSyntaxError,
    InvalidTriggerSet,
    ShapeError,
    UnclassifiableGate,
    UnknownGadget,
)
from coherence_nogo.gates import CNOT, GATES, H, TOFFOLI, X, uk
from coherence_nogo.rand import haar_state, haar_unitary
from coherence_nogo.tensor import phase_equal

GADGETS = ["t_msi", "z_gadget", "s_gadget", "hadamard_gadget_a", "hadamard_gadget_b",
           "teleport_gate(H)", "teleport_gate(T)", "teleport_gate(X)"] + \
          [f"diagonal_uk({k})" for k in range(1, 5)]


def test_controlled_unitary_blocks():
    assert np.allclose(controlled_unitary(X, 1, {"1"}), CNOT)
    assert np.allclose(controlled_unitary(X, 2, {"11"}), TOFFOLI)
    m = controlled_unitary(H, 2, {"00", "10"})
    for x in range(4):
        block = m[2 * x:2 * x + 2, 2 * x:2 * x + 2]
        assert np.allclose(block, H if x in (0, 2) else np.eye(2))
    with pytest.raises(InvalidTriggerSet):
        controlled_unitary(X, 2, {"1"})
    with pytest.raises(InvalidTriggerSet):
        controlled_unitary(X, 1, set())


def test_ir_validation():
    with pytest.raises(ShapeError):
        Circuit(1, 0, (Gate("CNOT", CNOT, (0, 1)),))
    with pytest.raises(ShapeError):
        Circuit(2, 1, (ClassicallyControlledGate(Gate("X", X, (0,)), 0),))
    with pytest.raises(ShapeError):
        ControlledGate(Gate("X", X, (0,)), (0,), {"1"})


TEXT = """\
# teleport-style toy
qubits 3
cbits 2
gate H 0
gate CNOT 0 1        # entangle
measure 1 -> 0
gate X 2 if 0==1
cgate H 2 ctrl 0 1 when 01,10
gate U2:0,1,1,0 1
measure 0 -> 1
"""


def test_parse_and_format():
    c = parse_circuit(TEXT)
    assert c.n_qubits == 3 and c.n_bits == 2
    assert len(c.ops) == 7
    assert isinstance(c.ops[3], ClassicallyControlledGate)
    assert c.ops[4].trigger == frozenset({(0, 1), (1, 0)})
    again = parse_circuit(format_circuit(c))
    assert [type(op) for op in again.ops] == [type(op) for op in c.ops]
    # custom gates come back under a generic name; compare semantically
    for a, b in zip(c.ops, again.ops):
        if isinstance(a, Gate):
            assert np.allclose(a.matrix, b.matrix) and a.targets == b.targets


@pytest.mark.parametrize("text,line,col", [
    ("gate H 0\n", 1, 1),
    ("qubits 2\ngate FOO 0\n", 2, 6),
    ("qubits 2\ngate H 5\n", 2, 8),
    ("qubits 2\ncbits 1\ngate X 0 if 0==1\n", 3, 13),
    ("qubits 2\ncbits 1\nmeasure 0 -> 3\n", 3, 14),
    ("qubits 2\ncgate X 1 ctrl 0 when 11\n", 2, 23),
    ("qubits 2\ngate U2:1,1,1,1 0\n", 2, 6),
    ("qubits 2\nfrobnicate\n", 2, 1),
])
def test_parse_errors_carry_location(text, line, col):
    with pytest.raises(CircuitSyntaxError) as err:
        parse_circuit(text)
    assert (err.value.line, err.value.column) == (line, col)


def test_simulate_bell_measurement():
    c = Circuit(2, 2, (Gate("H", H, (0,)), Gate("CNOT", CNOT, (0, 1)),
                       Measure(0, 0), Measure(1, 1)))
    out = simulate(c, [1, 0, 0, 0])
    assert [b.outcome for b in out] == ["00", "11"]
    assert np.allclose([b.probability for b in out], [0.5, 0.5])
    assert np.allclose(out.branches[1].state, [0, 0, 0, 1])
    sample = simulate(c, [1, 0, 0, 0], mode="sample", seed=4)
    assert len(sample) == 1 and np.isclose(sample.branches[0].probability, 0.5)
    assert simulate(c, [1, 0, 0, 0], mode="sample", seed=4).branches[0].outcome == \
        sample.branches[0].outcome


@given(st.integers(0, 10**6))
def test_branch_probabilities_sum_to_one(seed):
    g = gadget_library("s_gadget")
    psi = haar_state(8, seed)
    total = sum(b.probability for b in simulate(g.circuit, psi))
    assert np.isclose(total, 1)


def test_classical_control_fires_only_on_value():
    c = Circuit(2, 1, (Gate("X", X, (1,)), Measure(1, 0),
                       ClassicallyControlledGate(Gate("X", X, (0,)), 0, 0)))
    (b,) = simulate(c, [1, 0, 0, 0]).branches
    assert b.outcome == "1" and np.allclose(b.state, [0, 1, 0, 0])


@pytest.mark.parametrize("name", GADGETS)
def test_gadgets_implement_target(name):
    g = gadget_library(name)
    assert gadget_choi_distance(g) <= 1e-9


@pytest.mark.parametrize("name", GADGETS)
def test_deferred_circuit_has_same_channel(name):
    g = gadget_library(name)
    d = defer_measurements(g.circuit)
    assert all(isinstance(op, Measure) for op in d.ops[len(d.ops) - len(d.measurements):])
    assert not any(isinstance(op, ClassicallyControlledGate) for op in d.ops)
    ch = circuit_channel(d, g.inputs, g.ancilla_pairs(), g.outputs)
    assert choi_distance(ch, g.channel()) < 1e-12
    # per-branch maps agree too
    a = g.branches()
    b = circuit_branch_maps(d, g.inputs, g.ancilla_pairs(), g.outputs)
    assert a.keys() == b.keys()
    for rec in a:
        assert np.allclose(a[rec].superoperator(), b[rec].superoperator())


def test_deferral_copies_only_retargeted_wires():
    assert defer_measurements(diagonal_uk(4).circuit).n_qubits == 5
    c = Circuit(1, 2, (Measure(0, 0), Gate("X", X, (0,)), Measure(0, 1)))
    d = defer_measurements(c)
    assert d.n_qubits == 2
    a = circuit_branch_maps(c, (0,))
    b = circuit_branch_maps(d, (0,), outputs=(0,))
    assert a.keys() == b.keys()
    for rec in a:
        assert np.allclose(a[rec].superoperator(), b[rec].superoperator())


def test_uk_gadget_targets():
    for k in range(1, 5):
        assert np.allclose(diagonal_uk(k).target, uk(k))
    assert np.allclose(uk(1), GATES["Z"]) and np.allclose(uk(3), GATES["T"])


def test_teleport_of_non_clifford_target():
    u = haar_unitary(2, seed=9)
    g = teleport_gate(u, "R")
    assert gadget_choi_distance(g) <= 1e-9


def test_hadamard_counts():
    assert hadamard_count(gadget_library("t_msi").circuit) == 0
    assert hadamard_count(gadget_library("hadamard_gadget_a").circuit) == 1
    assert hadamard_count(gadget_library("hadamard_gadget_b").circuit) == 1
    c = Circuit(2, 0, (Gate("H", H, (0,)), Gate("R", haar_unitary(2, 1), (1,)),
                       ControlledGate(Gate("H", H, (1,)), (0,), {"1"})))
    assert classify_op(c.ops[2]) == "hadamard"
    with pytest.raises(UnclassifiableGate) as err:
        hadamard_count(c)
    assert err.value.ops == [1]


def test_ancilla_override_breaks_msi():
    g = gadget_library("t_msi").with_ancilla("0")
    assert gadget_choi_distance(g) > 0.1
    # the CNOT onto |0> copies the input, so reading the copy dephases it
    assert choi_distance(g.channel(), dephasing_channel(2)) < 1e-12


def test_unknown_gadget():
    with pytest.raises(UnknownGadget):
        gadget_library("diagonal_uk(0)")
    with pytest.raises(UnknownGadget):
        gadget_library("teleport_gate(CNOT)")
