"""Random unitaries built from incoherent gates and at most k (controlled-)Hadamards."""
from dataclasses import dataclass
from itertools import product

import numpy as np

from .circuits.ir import controlled_unitary
from .circuits.simulate import apply_on_wires
from .gates import GATES, H
from .rand import haar_state, random_density, random_incoherent_unitary, rng, sparse_state

# gate pool for compiled incoherent circuits: name -> number of wires
POOL = {"X": 1, "S": 1, "T": 1, "CNOT": 2, "TOFFOLI": 3}


@dataclass(frozen=True)
class Factor:
    kind: str            # "incoherent" or "hadamard"
    matrix: np.ndarray
    label: str


@dataclass(frozen=True)
class AlternatingProduct:
    """U = U_k V_k ... U_1 V_1 U_0; ``factors`` lists U_0, V_1, U_1, ... in application order."""

    n_qubits: int
    factors: tuple

    @property
    def unitary(self):
        u = np.eye(2**self.n_qubits, dtype=np.complex128)
        for f in self.factors:
            u = f.matrix @ u
        return u

    @property
    def k(self):
        return sum(f.kind == "hadamard" for f in self.factors)


def random_incoherent_circuit(n_qubits, depth, seed=None):
    """Unitary of a random circuit over X, S, T, CNOT and Toffoli, with its gate list."""
    g = rng(seed)
    pool = [name for name, w in POOL.items() if w <= n_qubits]
    u = np.eye(2**n_qubits, dtype=np.complex128)
    ops = []
    for _ in range(depth):
        name = pool[g.integers(len(pool))]
        wires = tuple(int(w) for w in g.choice(n_qubits, size=POOL[name], replace=False))
        u = apply_on_wires(u, GATES[name], wires, n_qubits)
        ops.append((name, wires))
    return u, ops


def random_incoherent(n_qubits, seed=None, depth=6):
    """Either a permutation-times-phases unitary or a compiled random circuit."""
    g = rng(seed)
    if g.random() < 0.5:
        return random_incoherent_unitary(2**n_qubits, g), "perm-phase"
    u, ops = random_incoherent_circuit(n_qubits, depth, g)
    return u, "circuit:" + ";".join(f"{n}@{','.join(map(str, w))}" for n, w in ops)


def random_controlled_h(n_qubits, seed=None, max_controls=2):
    """H on a random wire, controlled by a random register with a random trigger set."""
    g = rng(seed)
    target = int(g.integers(n_qubits))
    others = [w for w in range(n_qubits) if w != target]
    c = int(g.integers(min(max_controls, len(others)) + 1))
    controls = tuple(int(w) for w in g.choice(others, size=c, replace=False)) if c else ()
    strings = list(product((0, 1), repeat=c))
    pick = g.random(len(strings)) < 0.5
    if not pick.any():
        pick[g.integers(len(strings))] = True
    trigger = {s for s, keep in zip(strings, pick) if keep}
    mat = controlled_unitary(H, c, trigger)
    u = apply_on_wires(np.eye(2**n_qubits, dtype=np.complex128), mat, controls + (target,), n_qubits)
    trig = ",".join("".join(map(str, s)) for s in sorted(trigger)) or "-"
    return u, f"H@{target} ctrl {','.join(map(str, controls)) or '-'} when {trig}"


@dataclass(frozen=True)
class IncoherentResourceFamily:
    """Alternating products on n system plus a ancilla qubits with Hadamard budget k."""

    n: int
    a: int = 0
    k: int = 0
    depth: int = 6
    max_controls: int = 2

    @property
    def n_qubits(self):
        return self.n + self.a

    def sample(self, seed=None):
        g = rng(seed)
        nq = self.n_qubits
        u, label = random_incoherent(nq, g, self.depth)
        factors = [Factor("incoherent", u, label)]
        for _ in range(self.k):
            v, vlabel = random_controlled_h(nq, g, self.max_controls)
            factors.append(Factor("hadamard", v, vlabel))
            u, label = random_incoherent(nq, g, self.depth)
            factors.append(Factor("incoherent", u, label))
        return AlternatingProduct(nq, tuple(factors))


def random_ancilla(n_qubits, seed=None, mixed=None):
    """Haar pure state or full-rank Wishart density on ``n_qubits``; returns (state, kind)."""
    g = rng(seed)
    d = 2**n_qubits
    if mixed is None:
        mixed = bool(g.random() < 0.5)
    if mixed:
        return random_density(d, seed=g), "wishart"
    return haar_state(d, g), "haar"


def random_pure_ancilla(n_qubits, seed=None):
    """Pure ancilla with random coherence rank: sparse or Haar."""
    g = rng(seed)
    d = 2**n_qubits
    support = int(g.integers(1, d + 1))
    return sparse_state(d, support, g)
