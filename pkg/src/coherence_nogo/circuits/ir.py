"""Circuit intermediate representation."""
from dataclasses import dataclass, field
from itertools import product
from typing import Union

import numpy as np

from ..errors import InvalidTriggerSet, NotUnitary, ShapeError
from ..tensor import as_matrix, is_unitary


@dataclass(frozen=True)
class Gate:
    name: str
    matrix: np.ndarray = field(compare=False, repr=False)
    targets: tuple

    def __post_init__(self):
        m = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if m.shape != (2 ** len(self.targets),) * 2:
            raise ShapeError(f"gate {self.name} of shape {m.shape} on {len(self.targets)} wires")
        if len(set(self.targets)) != len(self.targets):
            raise ShapeError(f"gate {self.name} repeats a wire")

    @property
    def wires(self):
        return self.targets


def _normalise_trigger(trigger, c):
    out = set()
    for s in trigger:
        bits = tuple(int(b) for b in (s if not isinstance(s, str) else list(s)))
        if len(bits) != c or any(b not in (0, 1) for b in bits):
            raise InvalidTriggerSet(f"trigger {s!r} is not a {c}-bit string")
        out.add(bits)
    if not out:
        raise InvalidTriggerSet("trigger set must be nonempty")
    return frozenset(out)


@dataclass(frozen=True)
class ControlledGate:
    """Apply ``gate`` when the control register's value lies in ``trigger``."""

    gate: Gate
    controls: tuple
    trigger: frozenset

    def __post_init__(self):
        controls = tuple(int(c) for c in self.controls)
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "trigger", _normalise_trigger(self.trigger, len(controls)))
        if len(set(controls)) != len(controls) or set(controls) & set(self.gate.targets):
            raise ShapeError("controls must be distinct and disjoint from targets")

    @property
    def wires(self):
        return self.controls + self.gate.targets

    def matrix(self):
        return controlled_unitary(self.gate.matrix, len(self.controls), self.trigger)


@dataclass(frozen=True)
class Measure:
    qubit: int
    bit: int

    @property
    def wires(self):
        return (self.qubit,)


@dataclass(frozen=True)
class ClassicallyControlledGate:
    """Apply ``gate`` when classical bit ``bit`` equals ``value``."""

    gate: Union[Gate, ControlledGate]
    bit: int
    value: int = 1

    @property
    def wires(self):
        return self.gate.wires


CircuitOp = Union[Gate, ControlledGate, Measure, ClassicallyControlledGate]


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    n_bits: int = 0
    ops: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        written = set()
        for i, op in enumerate(self.ops):
            for w in op.wires:
                if not 0 <= w < self.n_qubits:
                    raise ShapeError(f"op {i} uses wire {w} outside 0..{self.n_qubits - 1}")
            if isinstance(op, Measure):
                if not 0 <= op.bit < self.n_bits:
                    raise ShapeError(f"op {i} writes bit {op.bit} outside 0..{self.n_bits - 1}")
                written.add(op.bit)
            elif isinstance(op, ClassicallyControlledGate):
                if op.bit not in written:
                    raise ShapeError(f"op {i} is conditioned on unwritten bit {op.bit}")
                if op.value not in (0, 1):
                    raise ShapeError(f"op {i} compares a bit to {op.value}")

    @property
    def measurements(self):
        return [op for op in self.ops if isinstance(op, Measure)]

    def append(self, *ops):
        return Circuit(self.n_qubits, self.n_bits, self.ops + tuple(ops))


def controlled_unitary(u, c, trigger):
    """sum_{x in S} |x><x| (x) U + sum_{y not in S} |y><y| (x) 1, with c control qubits first."""
    u = as_matrix(u)
    if not is_unitary(u):
        raise NotUnitary("controlled_unitary needs a unitary target")
    trig = _normalise_trigger(trigger, c)
    d = u.shape[0]
    out = np.zeros((2**c * d, 2**c * d), dtype=np.complex128)
    for x, bits in enumerate(product((0, 1), repeat=c)):
        block = u if bits in trig else np.eye(d)
        out[x * d:(x + 1) * d, x * d:(x + 1) * d] = block
    return out


def op_matrix(op):
    """Matrix of a unitary op on its own wires (``op.wires`` order)."""
    if isinstance(op, Gate):
        return op.matrix
    if isinstance(op, ControlledGate):
        return op.matrix()
    raise TypeError(f"{type(op).__name__} has no matrix")
