from .gadgets import GADGET_NAMES, Ancilla, Gadget, gadget_choi_distance, gadget_library
from .ir import (
    Circuit,
    CircuitOp,
    ClassicallyControlledGate,
    ControlledGate,
    Gate,
    Measure,
    controlled_unitary,
)
from .parser import format_circuit, parse_circuit
from .rewrite import classify_op, defer_measurements, hadamard_count
from .simulate import (
    SimOutcome,
    circuit_branch_maps,
    circuit_channel,
    circuit_unitary,
    simulate,
)
