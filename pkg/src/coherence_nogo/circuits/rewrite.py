"""Deferred-measurement rewrite and gate classification."""
from ..coherence import classify_incoherent_unitary
from ..errors import UnclassifiableGate
from ..gates import CNOT, H
from ..tensor import phase_equal
from .ir import (
    Circuit,
    ClassicallyControlledGate,
    ControlledGate,
    Gate,
    Measure,
)


def _targets(op):
    if isinstance(op, ClassicallyControlledGate):
        op = op.gate
    if isinstance(op, ControlledGate):
        return op.gate.targets
    if isinstance(op, Gate):
        return op.targets
    return ()


def _later_targets(ops, start, qubit):
    # controls and repeated measurements leave a collapsed wire unchanged
    return any(qubit in _targets(op) for op in ops[start + 1:])


def defer_measurements(circuit):
    """Move every measurement to the end of the circuit.

    Each classically controlled gate becomes a quantum-controlled gate on the
    measured wire. When a later gate targets the measured wire, its value is
    first copied by CNOT onto a fresh wire (appended, starting in |0>) and the
    copy serves as control and is measured at the end instead.
    """
    ops = list(circuit.ops)
    n = circuit.n_qubits
    source = {}           # classical bit -> wire holding its value
    body = []
    final = []
    for i, op in enumerate(ops):
        if isinstance(op, Measure):
            wire = op.qubit
            if _later_targets(ops, i, op.qubit):
                wire = n
                n += 1
                body.append(Gate("CNOT", CNOT, (op.qubit, wire)))
            source[op.bit] = wire
            final.append(Measure(wire, op.bit))
        elif isinstance(op, ClassicallyControlledGate):
            ctrl = source[op.bit]
            inner = op.gate
            if isinstance(inner, ControlledGate) and ctrl in inner.controls:
                # the condition wire is already a control: restrict the trigger set
                k = inner.controls.index(ctrl)
                trig = {t for t in inner.trigger if t[k] == op.value}
                if trig:
                    body.append(ControlledGate(inner.gate, inner.controls, trig))
            elif isinstance(inner, ControlledGate):
                trig = {(op.value,) + t for t in inner.trigger}
                body.append(ControlledGate(inner.gate, (ctrl,) + inner.controls, trig))
            else:
                body.append(ControlledGate(inner, (ctrl,), {(op.value,)}))
        else:
            body.append(op)
    return Circuit(n, circuit.n_bits, tuple(body + final))


def _is_hadamard(gate):
    return gate.name == "H" or (gate.matrix.shape == (2, 2) and phase_equal(gate.matrix, H))


def classify_op(op):
    """'hadamard', 'incoherent', 'measure' or 'coherent' for one circuit op."""
    if isinstance(op, Measure):
        return "measure"
    if isinstance(op, ClassicallyControlledGate):
        op = op.gate
    gate = op.gate if isinstance(op, ControlledGate) else op
    if _is_hadamard(gate):
        return "hadamard"
    # a generalised controlled U is incoherent iff U is
    return "incoherent" if classify_incoherent_unitary(gate.matrix) is not None else "coherent"


def hadamard_count(circuit):
    """Number of H / controlled-H ops; every other gate must be incoherent."""
    kinds = [classify_op(op) for op in circuit.ops]
    bad = [i for i, k in enumerate(kinds) if k == "coherent"]
    if bad:
        raise UnclassifiableGate(
            f"ops {bad} are neither incoherent nor (controlled-)Hadamard", bad
        )
    return sum(k == "hadamard" for k in kinds)
