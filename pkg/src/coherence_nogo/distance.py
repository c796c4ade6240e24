"""Induced trace distance: a multi-start lower-bound search and the certified
dephasing-covariant bound against n Hadamards."""
from dataclasses import dataclass

import numpy as np

from .channels import apply, trace_distance
from .coherence import dephase, is_dephasing_covariant
from .config import DEFAULT
from .errors import BoundViolation, NotDephasingCovariant, ShapeError
from .gates import hadamard_n
from .rand import haar_state
from .tensor import as_matrix, index_to_bits, projector


@dataclass(frozen=True)
class SearchResult:
    value: float
    witness: np.ndarray
    start_index: int
    evaluations: int

    def __iter__(self):
        # unpacks as (value, witness)
        return iter((self.value, self.witness))


def _conjugate_basis(d):
    n = int(round(np.log2(d)))
    if 2**n == d:
        return hadamard_n(n)
    # Fourier basis for non-qubit dimensions
    k = np.arange(d)
    return np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d)


def _starts(d, n_random, seed):
    starts = [np.eye(d, dtype=np.complex128)[i] for i in range(d)]
    starts += list(_conjugate_basis(d).T)
    for child in np.random.SeedSequence(seed).spawn(n_random):
        starts.append(haar_state(d, np.random.default_rng(child)))
    return starts


def _ascend(objective, psi0, budget, min_gain=1e-10, step0=0.25, min_step=1e-9):
    """Coordinate-wise ascent on the real parameterisation (Re psi, Im psi)."""
    d = psi0.size
    x = np.concatenate([psi0.real, psi0.imag])

    def to_state(v):
        s = v[:d] + 1j * v[d:]
        return s / np.linalg.norm(s)

    best = objective(to_state(x))
    used = 1
    step = step0
    while used < budget and step >= min_step:
        gain = 0.0
        for c in range(2 * d):
            for sign in (1.0, -1.0):
                if used >= budget:
                    break
                trial = x.copy()
                trial[c] += sign * step
                if np.linalg.norm(trial) == 0:
                    continue
                trial /= np.linalg.norm(trial)
                val = objective(to_state(trial))
                used += 1
                if val > best:
                    gain += val - best
                    x, best = trial, val
                    break
        if gain == 0.0:
            step /= 2
        elif gain < min_gain:
            break
    return best, to_state(x), used


def induced_distance_lower(ch, target_unitary, budget=20000, seed=0, n_random=8):
    """Best D(E(psi), V psi V^dag) found over pure inputs: a lower bound on the
    induced trace distance, achieved by the returned witness.

    Starts are the computational basis, the conjugate basis and ``n_random``
    seeded Haar states; each is refined by coordinate ascent with step halving.
    The budget is split evenly across starts so the result does not depend on
    execution order.
    """
    v = as_matrix(target_unitary)
    d = ch.in_dim
    if v.shape != (d, d) or ch.out_dim != d:
        raise ShapeError("channel and target dimensions differ")

    def objective(psi):
        rho = projector(psi)
        return trace_distance(apply(ch, rho), v @ rho @ v.conj().T)

    starts = _starts(d, n_random, seed)
    per_start = max(1, budget // len(starts))
    best = None
    total = 0
    for i, psi0 in enumerate(starts):
        val, psi, used = _ascend(objective, psi0, per_start)
        total += used
        if best is None or val > best[0]:
            best = (val, psi, i)
    return SearchResult(float(best[0]), best[1], best[2], total)


@dataclass(frozen=True)
class NoGoBound:
    bound: float
    witness_state: np.ndarray      # input H^n|x>
    witness_basis_vector: tuple    # the bitstring x
    sigma_diagonal: np.ndarray

    def __iter__(self):
        return iter((self.bound, self.witness_state, self.witness_basis_vector))


def certified_nogo_bound(ch, n, ancilla, tol=DEFAULT.superop):
    """Certified lower bound on the induced distance between rho -> E(rho x ancilla)
    and n Hadamards, for a channel E commuting with dephasing.

    sigma = E(1/2^n x Delta(ancilla)); the bound is max_x (1 - <x|sigma|x>),
    attained on input H^n|x>. Ties go to the smallest x.
    """
    if not is_dephasing_covariant(ch, tol):
        raise NotDephasingCovariant("certified bound needs a channel commuting with dephasing")
    tau = np.asarray(ancilla, dtype=np.complex128)
    tau = projector(tau) if tau.ndim == 1 else as_matrix(tau)
    dn = 2**n
    if ch.in_dim != dn * tau.shape[0] or ch.out_dim != dn:
        raise ShapeError("channel must map (n qubits x ancilla) to n qubits")
    sigma = apply(ch, np.kron(np.eye(dn) / dn, dephase(tau)))
    diag = np.real(np.diag(sigma))
    scores = 1.0 - diag
    top = float(np.max(scores))
    x = int(np.flatnonzero(scores >= top - 1e-12)[0])
    if top < 1 - 2.0**-n - 1e-9:
        raise BoundViolation(f"bound {top!r} below 1 - 2^-{n}")
    witness = hadamard_n(n)[:, x].copy()
    return NoGoBound(top, witness, index_to_bits(x, n), diag)
