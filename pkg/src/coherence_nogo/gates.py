"""Standard gate matrices and named single-qubit states."""
import numpy as np

from .tensor import kron_all

_s2 = 1 / np.sqrt(2)

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
H = np.array([[1, 1], [1, -1]], dtype=np.complex128) * _s2
S = np.diag([1, 1j]).astype(np.complex128)
SDG = S.conj().T
T = np.diag([1, np.exp(1j * np.pi / 4)]).astype(np.complex128)
TDG = T.conj().T
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)
CZ = np.diag([1, 1, 1, -1]).astype(np.complex128)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)
TOFFOLI = np.eye(8, dtype=np.complex128)
TOFFOLI[6:, 6:] = X
# Bell unitary (H x 1) CNOT_12
BELL = np.kron(H, I2) @ CNOT

GATES = {
    "I": I2,
    "X": X,
    "Y": Y,
    "Z": Z,
    "H": H,
    "S": S,
    "Sdg": SDG,
    "T": T,
    "Tdg": TDG,
    "CNOT": CNOT,
    "CZ": CZ,
    "SWAP": SWAP,
    "TOFFOLI": TOFFOLI,
}


def diagonal_phase(theta):
    return np.diag([1, np.exp(1j * theta)]).astype(np.complex128)


def uk(k):
    """diag(1, exp(2*pi*i / 2**k)); uk(1) = Z, uk(2) = S, uk(3) = T."""
    return diagonal_phase(2 * np.pi / 2**k)


def hadamard_n(n):
    return kron_all(*([H] * n)) if n else np.eye(1, dtype=np.complex128)


def bell_rotated(u):
    """Rotated Bell unitary (1 x U) B."""
    return np.kron(I2, u) @ BELL


# named ancilla constructors
def _named_states():
    zero = np.array([1, 0], dtype=np.complex128)
    one = np.array([0, 1], dtype=np.complex128)
    plus = (zero + one) * _s2
    minus = (zero - one) * _s2
    return {
        "0": zero,
        "1": one,
        "+": plus,
        "-": minus,
        "+i": (zero + 1j * one) * _s2,
        "T": T @ plus,
        "phi+": np.array([1, 0, 0, 1], dtype=np.complex128) * _s2,
    }


STATES = _named_states()


def named_state(name):
    """Pure state for a constructor string.

    Accepts the names in ``STATES``, ``uk(k)`` for ``uk(k)|+>``, and a
    comma-separated list for a product, e.g. ``"-,+i"``.
    """
    parts = [p.strip() for p in str(name).split(",") if p.strip()]
    if not parts:
        raise ValueError("empty state constructor")
    vecs = []
    for p in parts:
        if p in STATES:
            vecs.append(STATES[p])
        elif p.startswith("uk(") and p.endswith(")"):
            vecs.append(uk(int(p[3:-1])) @ STATES["+"])
        else:
            raise ValueError(f"unknown state constructor {p!r}")
    return kron_all(*vecs)


def state_qubits(name):
    return int(np.log2(named_state(name).size))
