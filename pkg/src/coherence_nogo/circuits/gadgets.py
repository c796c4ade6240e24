"""Gate gadgets: adaptive circuits that consume ancilla states to apply a target gate."""
import re
from dataclasses import dataclass
from itertools import product

import numpy as np

from ..channels import choi_distance, unitary_channel
from ..errors import UnknownGadget
from ..gates import GATES, I2, STATES, X, Z, named_state, uk
from ..tensor import phase_equal
from .ir import Circuit, ClassicallyControlledGate, ControlledGate, Gate, Measure
from .simulate import circuit_branch_maps, circuit_channel


@dataclass(frozen=True)
class Ancilla:
    wires: tuple
    label: str
    state: np.ndarray


@dataclass(frozen=True)
class Gadget:
    name: str
    circuit: Circuit
    inputs: tuple
    outputs: tuple
    ancillas: tuple
    target: np.ndarray
    target_name: str

    def ancilla_pairs(self):
        return [(a.wires, a.state) for a in self.ancillas]

    def with_ancilla(self, label, wires=None):
        """Copy with the ancilla on ``wires`` (default: all ancilla wires) replaced."""
        wires = tuple(wires) if wires is not None else tuple(
            w for a in self.ancillas for w in a.wires)
        keep = tuple(a for a in self.ancillas if not set(a.wires) & set(wires))
        new = keep + (Ancilla(wires, label, named_state(label)),)
        return Gadget(self.name, self.circuit, self.inputs, self.outputs, new,
                      self.target, self.target_name)

    def channel(self):
        return circuit_channel(self.circuit, self.inputs, self.ancilla_pairs(), self.outputs)

    def branches(self):
        return circuit_branch_maps(self.circuit, self.inputs, self.ancilla_pairs(), self.outputs)


def _g(name, *wires, matrix=None):
    return Gate(name, GATES[name] if matrix is None else matrix, wires)


def _anc(wire, label):
    return Ancilla((wire,), label, named_state(label))


def diagonal_gadget(u, label="U"):
    """CNOT onto U|+>, measure, and correct with U^2 on outcome 1 (U diagonal)."""
    u = np.asarray(u, dtype=np.complex128)
    c = Circuit(2, 1, (
        _g("CNOT", 0, 1),
        Measure(1, 0),
        ClassicallyControlledGate(Gate(label + "^2", u @ u, (0,)), 0, 1),
    ))
    anc = Ancilla((1,), f"{label}|+>", u @ STATES["+"])
    return Gadget(f"diagonal({label})", c, (0,), (0,), (anc,), u, label)


def z_gadget():
    c = Circuit(2, 1, (_g("CNOT", 0, 1), Measure(1, 0)))
    return Gadget("z_gadget", c, (0,), (0,), (_anc(1, "-"),), GATES["Z"], "Z")


def t_msi():
    c = Circuit(2, 1, (
        _g("CNOT", 0, 1),
        Measure(1, 0),
        ClassicallyControlledGate(_g("S", 0), 0, 1),
    ))
    return Gadget("t_msi", c, (0,), (0,), (_anc(1, "T"),), GATES["T"], "T")


def s_gadget():
    # ancillas |-> on wire 1 and (|0> + i|1>)/sqrt2 on wire 2; the S^2 = Z
    # correction is itself a Z gadget on the |-> wire
    c = Circuit(3, 2, (
        _g("CNOT", 0, 2),
        Measure(2, 0),
        ClassicallyControlledGate(_g("CNOT", 0, 1), 0, 1),
        Measure(1, 1),
    ))
    return Gadget("s_gadget", c, (0,), (0,), (_anc(1, "-"), _anc(2, "+i")),
                  GATES["S"], "S")


def diagonal_uk(k):
    """Gadget for uk(k) = diag(1, exp(2 pi i / 2^k)) from CNOTs and uk(j)|+> ancillas.

    Wire j (1..k) holds uk(k+1-j)|+>. A level-j CNOT fires only if every earlier
    ancilla measured 1, since the correction needed after outcome 1 at level
    uk(m) is uk(m)^2 = uk(m-1), itself implemented by the next level.
    """
    if k < 1:
        raise UnknownGadget(f"diagonal_uk needs k >= 1, got {k}")
    if k == 1:
        g = z_gadget()
        return Gadget("diagonal_uk(1)", g.circuit, g.inputs, g.outputs, g.ancillas,
                      uk(1), "U1")
    ops = []
    for j in range(1, k + 1):
        earlier = tuple(range(1, j))
        if j == 1:
            ops.append(_g("CNOT", 0, j))
        elif j == 2:
            ops.append(ClassicallyControlledGate(_g("CNOT", 0, j), 0, 1))
        else:
            # multi-bit condition compiled to a trigger set on the measured wires
            ops.append(ControlledGate(_g("X", j), (0,) + earlier, {(1,) * j}))
        ops.append(Measure(j, j - 1))
    ancs = tuple(_anc(j, f"uk({k + 1 - j})") for j in range(1, k + 1))
    return Gadget(f"diagonal_uk({k})", Circuit(k + 1, k, tuple(ops)), (0,), (0,), ancs,
                  uk(k), f"U{k}")


def hadamard_gadget_a():
    """Hadamard gadget with ancilla |+> on wire 1 and an X-basis measurement."""
    c = Circuit(2, 1, (
        _g("S", 0),
        _g("S", 1),
        _g("CNOT", 0, 1),
        _g("Sdg", 1),
        _g("CNOT", 1, 0),
        _g("CNOT", 0, 1),
        _g("H", 1),          # X-basis measurement = H then computational measurement
        Measure(1, 0),
        ClassicallyControlledGate(_g("X", 0), 0, 1),
    ))
    return Gadget("hadamard_gadget_a", c, (0,), (0,), (_anc(1, "+"),), GATES["H"], "H")


def hadamard_gadget_b():
    """CZ between |+> (wire 0) and the input (wire 1); X-measure the input wire."""
    c = Circuit(2, 1, (
        _g("CZ", 0, 1),
        _g("H", 1),
        Measure(1, 0),
        ClassicallyControlledGate(_g("X", 0), 0, 1),
    ))
    return Gadget("hadamard_gadget_b", c, (1,), (0,), (_anc(0, "+"),), GATES["H"], "H")


_PAULIS = {(a, b): np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(Z, b)
           for a in (0, 1) for b in (0, 1)}


def _teleport_corrections(u):
    """Correction V_x for each Bell outcome x, found by enumerating branches."""
    bare = Circuit(3, 2, (_g("CNOT", 0, 1), _g("H", 0), Measure(0, 0), Measure(1, 1)))
    anc = np.kron(I2, u) @ STATES["phi+"]
    corrections = {}
    for record, sub in circuit_branch_maps(bare, (0,), [((1, 2), anc)], (2,)).items():
        w = sub.kraus[0] * 2          # each branch has probability 1/4
        v = u @ np.linalg.inv(w)
        corrections[tuple(int(b) for b in record)] = v
    return corrections


def teleport_gate(u, label=None):
    """Gate teleportation with ancilla (1 x U)|phi+> on wires 1, 2; output on wire 2.

    Outcome-dependent corrections are derived by branch enumeration. When every
    correction is a Pauli X^a Z^b with a, b linear in the outcome bits they are
    emitted as single-bit classically controlled X and Z gates; otherwise each
    outcome gets its own correction controlled on the measured wires.
    """
    u = np.asarray(u, dtype=np.complex128)
    label = label or next((k for k, g in GATES.items() if g.shape == (2, 2)
                           and np.allclose(g, u)), "U")
    corr = _teleport_corrections(u)
    pauli = {}
    for x, v in corr.items():
        hit = [ab for ab, p in _PAULIS.items() if phase_equal(p, v)]
        if not hit:
            pauli = None
            break
        pauli[x] = hit[0]
    ops = [_g("CNOT", 0, 1), _g("H", 0), Measure(0, 0), Measure(1, 1)]
    linear = pauli is not None and all(
        pauli[(m0, m1)][i] == (m0 * pauli[(1, 0)][i]) ^ (m1 * pauli[(0, 1)][i])
        for m0, m1 in product((0, 1), repeat=2) for i in (0, 1)
    ) and pauli[(0, 0)] == (0, 0)
    if linear:
        for bit, (a, b) in ((0, pauli[(1, 0)]), (1, pauli[(0, 1)])):
            if b:
                ops.append(ClassicallyControlledGate(_g("Z", 2), bit, 1))
            if a:
                ops.append(ClassicallyControlledGate(_g("X", 2), bit, 1))
    else:
        for x, v in sorted(corr.items()):
            if not phase_equal(v, I2):
                ops.append(ControlledGate(Gate("V", v / np.sqrt(np.linalg.det(v)), (2,)),
                                          (0, 1), {x}))
    anc = Ancilla((1, 2), f"(1x{label})phi+", np.kron(I2, u) @ STATES["phi+"])
    return Gadget(f"teleport_gate({label})", Circuit(3, 2, tuple(ops)), (0,), (2,), (anc,),
                  u, label)


_SIMPLE = {
    "z_gadget": z_gadget,
    "s_gadget": s_gadget,
    "t_msi": t_msi,
    "hadamard_gadget_a": hadamard_gadget_a,
    "hadamard_gadget_b": hadamard_gadget_b,
}

GADGET_NAMES = tuple(_SIMPLE) + ("diagonal_uk(k)", "teleport_gate(U)")


def gadget_library(name):
    """Look up a gadget by name, e.g. ``"t_msi"``, ``"diagonal_uk(3)"``, ``"teleport_gate(H)"``."""
    name = name.strip()
    if name in _SIMPLE:
        return _SIMPLE[name]()
    m = re.fullmatch(r"diagonal_uk\((\d+)\)", name)
    if m:
        return diagonal_uk(int(m.group(1)))
    m = re.fullmatch(r"teleport_gate\((\w+)\)", name)
    if m and m.group(1) in GATES and GATES[m.group(1)].shape == (2, 2):
        return teleport_gate(GATES[m.group(1)], m.group(1))
    raise UnknownGadget(f"unknown gadget {name!r}; known: {', '.join(GADGET_NAMES)}")


def gadget_choi_distance(g):
    return choi_distance(g.channel(), unitary_channel(g.target))
