"""Coherence primitives: dephasing, incoherence tests, coherence rank.

Channel-level predicates work on anything exposing ``in_dim``, ``out_dim`` and
``superoperator()`` (see :mod:`coherence_nogo.channels`).
"""
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import NotUnitary
from .tensor import as_matrix, is_unitary


def dephase(rho):
    """Zero every off-diagonal entry; the diagonal is copied bit for bit."""
    rho = as_matrix(rho)
    out = np.zeros_like(rho)
    idx = np.arange(min(rho.shape))
    out[idx, idx] = rho[idx, idx]
    return out


def is_incoherent_state(rho, tol=DEFAULT.rank):
    rho = as_matrix(rho)
    off = rho - np.diag(np.diag(rho))
    return bool(np.max(np.abs(off), initial=0.0) <= tol)


@dataclass(frozen=True)
class IncoherentDecomposition:
    """U = sum_x exp(i phases[x]) |permutation[x]><x|."""

    permutation: tuple
    phases: tuple

    def matrix(self):
        d = len(self.permutation)
        u = np.zeros((d, d), dtype=np.complex128)
        u[list(self.permutation), np.arange(d)] = np.exp(1j * np.asarray(self.phases))
        return u


def classify_incoherent_unitary(u, tol=DEFAULT.unitary):
    """Return the monomial decomposition of ``u``, or None if ``u`` is coherent."""
    u = as_matrix(u)
    if not is_unitary(u, tol):
        raise NotUnitary("classify_incoherent_unitary needs a unitary matrix")
    mags = np.abs(u)
    big = mags >= 1 - tol
    small = mags <= tol
    if not np.all(big.sum(axis=0) == 1) or not np.all(big | small):
        return None
    perm = np.argmax(big, axis=0)
    if len(set(perm.tolist())) != u.shape[0]:
        return None
    cols = np.arange(u.shape[0])
    phases = np.angle(u[perm, cols])
    # canonical range (-pi, pi]
    phases = np.where(phases <= -np.pi, phases + 2 * np.pi, phases)
    return IncoherentDecomposition(tuple(int(p) for p in perm), tuple(float(t) for t in phases))


@dataclass(frozen=True)
class CoherenceRank:
    value: int
    tolerance_used: float
    near_threshold: bool = False

    def __int__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, CoherenceRank):
            return self.value == other.value
        return self.value == other

    def __hash__(self):
        return hash(self.value)


def coherence_rank(psi, tol=DEFAULT.rank):
    """Number of amplitudes with magnitude above ``tol``.

    ``near_threshold`` is set when some amplitude lies within a factor 10 of
    ``tol``, where the rank is numerically fragile.
    """
    a = np.abs(np.asarray(psi, dtype=np.complex128).reshape(-1))
    value = int(np.count_nonzero(a > tol))
    near = bool(np.any((a > tol / 10) & (a < tol * 10)))
    return CoherenceRank(value, tol, near)


def _dephasing_mask(d):
    return np.eye(d, dtype=bool).reshape(-1)


def is_dephasing_covariant(ch, tol=DEFAULT.superop):
    """True iff the channel commutes with dephasing (the DIO condition).

    Compared column by column on the matrix-unit basis {|i><j|}.
    """
    sup = ch.superoperator()
    din, dout = ch.in_dim, ch.out_dim
    m_in, m_out = _dephasing_mask(din), _dephasing_mask(dout)
    after = sup * m_out[:, None]       # Delta o E
    before = sup * m_in[None, :]       # E o Delta
    return bool(np.max(np.abs(after - before), initial=0.0) <= tol)


def is_mio(ch, tol=DEFAULT.superop):
    """True iff Delta o E o Delta == E o Delta on the matrix-unit basis."""
    sup = ch.superoperator()
    m_in, m_out = _dephasing_mask(ch.in_dim), _dephasing_mask(ch.out_dim)
    e_delta = sup * m_in[None, :]
    return bool(np.max(np.abs(e_delta * m_out[:, None] - e_delta), initial=0.0) <= tol)
