"""Statevector simulation with mid-circuit measurement and classical control.

States are propagated as batches of column vectors so the same routine yields
single-input branch records and the per-branch linear maps used to build channels.
"""
from dataclasses import dataclass

import numpy as np

from ..channels import QuantumChannel, SubChannel
from ..config import DEFAULT
from ..errors import ShapeError
from ..tensor import as_state, kron_all, wire_permutation
from .ir import ClassicallyControlledGate, ControlledGate, Gate, Measure, op_matrix


def apply_on_wires(batch, mat, wires, n):
    """Apply ``mat`` to ``wires`` of an n-qubit batch of shape (2**n, m)."""
    m = batch.shape[1]
    k = len(wires)
    t = batch.reshape([2] * n + [m])
    t = np.tensordot(mat.reshape([2] * (2 * k)), t, axes=(list(range(k, 2 * k)), list(wires)))
    # tensordot puts the k acted-on axes first; move them back
    rest = [a for a in range(n) if a not in wires]
    src_pos = {w: i for i, w in enumerate(wires)}
    src_pos.update({a: k + i for i, a in enumerate(rest)})
    t = t.transpose([src_pos[a] for a in range(n)] + [n])
    return t.reshape(2**n, m)


@dataclass
class _Branch:
    record: tuple
    bits: tuple
    batch: np.ndarray


def _split(batch, qubit, n):
    t = batch.reshape([2] * n + [batch.shape[1]])
    parts = []
    for v in (0, 1):
        p = np.zeros_like(t)
        sel = [slice(None)] * (n + 1)
        sel[qubit] = v
        p[tuple(sel)] = t[tuple(sel)]
        parts.append(p.reshape(batch.shape))
    return parts


def run_branches(circuit, batch, prune=DEFAULT.branch_prune, rng=None):
    """Propagate a batch through ``circuit``.

    Returns branches keyed by measurement record. With ``rng`` a single branch is
    sampled at each measurement (using the first column's probabilities).
    """
    n = circuit.n_qubits
    branches = [_Branch((), (None,) * circuit.n_bits, np.asarray(batch, dtype=np.complex128))]
    for op in circuit.ops:
        if isinstance(op, (Gate, ControlledGate)):
            mat = op_matrix(op)
            for b in branches:
                b.batch = apply_on_wires(b.batch, mat, op.wires, n)
        elif isinstance(op, ClassicallyControlledGate):
            mat = op_matrix(op.gate)
            for b in branches:
                if b.bits[op.bit] == op.value:
                    b.batch = apply_on_wires(b.batch, mat, op.gate.wires, n)
        elif isinstance(op, Measure):
            new = []
            for b in branches:
                parts = _split(b.batch, op.qubit, n)
                if rng is not None:
                    p0 = float(np.sum(np.abs(parts[0][:, 0]) ** 2))
                    p1 = float(np.sum(np.abs(parts[1][:, 0]) ** 2))
                    v = 0 if rng.random() < p0 / (p0 + p1) else 1
                    choices = [v]
                else:
                    weights = [float(np.max(np.sum(np.abs(p) ** 2, axis=0))) for p in parts]
                    choices = [v for v in (0, 1) if weights[v] > prune]
                for v in choices:
                    bits = list(b.bits)
                    bits[op.bit] = v
                    new.append(_Branch(b.record + (v,), tuple(bits), parts[v]))
            branches = new
        else:
            raise TypeError(f"unknown op {op!r}")
    branches.sort(key=lambda b: b.record)
    return branches


@dataclass(frozen=True)
class BranchRecord:
    outcome: str          # measurement results in circuit order
    bits: tuple           # classical register (None for unwritten bits)
    probability: float
    state: np.ndarray     # normalised post-measurement state of all qubits


@dataclass(frozen=True)
class SimOutcome:
    branches: tuple

    def __iter__(self):
        return iter(self.branches)

    def __len__(self):
        return len(self.branches)


def simulate(circuit, psi, mode="enumerate", seed=None):
    """Run ``circuit`` on pure input ``psi``; mode is "enumerate" or "sample"."""
    psi = as_state(psi)
    if psi.size != 2**circuit.n_qubits:
        raise ShapeError(f"input has dimension {psi.size}, circuit needs {2**circuit.n_qubits}")
    if mode not in ("enumerate", "sample"):
        raise ValueError(f"unknown simulation mode {mode!r}")
    rng = np.random.default_rng(seed) if mode == "sample" else None
    out = []
    for b in run_branches(circuit, psi.reshape(-1, 1), rng=rng):
        v = b.batch[:, 0]
        p = float(np.vdot(v, v).real)
        state = v / np.sqrt(p) if p > 0 else v
        out.append(BranchRecord("".join(map(str, b.record)), b.bits, p, state))
    return SimOutcome(tuple(out))


def circuit_unitary(circuit):
    """Unitary of a circuit ignoring measurements; raises if it is classically controlled."""
    if any(isinstance(op, ClassicallyControlledGate) for op in circuit.ops):
        raise ValueError("circuit has classically controlled gates; defer measurements first")
    d = 2**circuit.n_qubits
    u = np.eye(d, dtype=np.complex128)
    for op in circuit.ops:
        if not isinstance(op, Measure):
            u = apply_on_wires(u, op_matrix(op), op.wires, circuit.n_qubits)
    return u


def _initial_batch(n, inputs, ancillas):
    """Columns |i> on ``inputs`` with the ancilla states on their wires, |0> elsewhere."""
    placed = list(inputs)
    pieces = []
    for wires, vec in ancillas:
        placed.extend(wires)
        pieces.append(np.asarray(vec, dtype=np.complex128).reshape(-1))
    free = [w for w in range(n) if w not in placed]
    if len(set(placed)) != len(placed):
        raise ShapeError("input and ancilla wires overlap")
    placed.extend(free)
    pieces.extend([np.array([1, 0], dtype=np.complex128)] * len(free))
    rest = kron_all(*pieces) if pieces else np.ones(1, dtype=np.complex128)
    d_in = 2 ** len(inputs)
    batch = np.kron(np.eye(d_in, dtype=np.complex128), rest.reshape(-1, 1))
    # batch rows follow the wire order in `placed`; reorder into circuit order
    order = [placed.index(w) for w in range(n)]
    return wire_permutation(order) @ batch


def _branch_kraus(batch, n, outputs, drop):
    d_in = batch.shape[1]
    rest = [w for w in range(n) if w not in outputs]
    t = batch.reshape([2] * n + [d_in]).transpose(list(outputs) + rest + [n])
    t = t.reshape(2 ** len(outputs), 2 ** len(rest), d_in)
    return [t[:, r, :] for r in range(t.shape[1]) if np.linalg.norm(t[:, r, :]) >= drop]


def circuit_branch_maps(circuit, inputs=None, ancillas=(), outputs=None, drop=DEFAULT.kraus_drop):
    """Per-outcome subchannels of a circuit, keyed by measurement record.

    ``inputs`` are the wires carrying the input (default: all), ``ancillas`` a
    sequence of (wires, state vector) pairs, remaining wires start in |0>.
    ``outputs`` (default ``inputs``) are kept, everything else is traced.
    """
    n = circuit.n_qubits
    inputs = list(range(n)) if inputs is None else list(inputs)
    outputs = list(inputs) if outputs is None else list(outputs)
    batch = _initial_batch(n, inputs, [(tuple(w), v) for w, v in ancillas])
    out = {}
    for b in run_branches(circuit, batch, prune=0.0):
        ks = _branch_kraus(b.batch, n, outputs, drop)
        if ks:
            out["".join(map(str, b.record))] = SubChannel(tuple(ks), outcome=b.record)
    return out


def circuit_channel(circuit, inputs=None, ancillas=(), outputs=None, drop=DEFAULT.kraus_drop):
    """Channel of a circuit with outcomes discarded (sum over all branches)."""
    subs = circuit_branch_maps(circuit, inputs, ancillas, outputs, drop)
    ks = [k for s in subs.values() for k in s.kraus]
    return QuantumChannel(tuple(ks))
