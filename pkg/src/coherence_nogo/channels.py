"""Quantum channels and subchannels in Kraus form.

Superoperators use row-major vectorisation, vec(rho)[i*d + j] = rho[i, j], so the
column of ``superoperator()`` at index ``i*d + j`` is vec(E(|i><j|)).
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .config import DEFAULT
from .errors import NotUnitary, ShapeError
from .tensor import as_matrix, hermitian_eig, is_unitary, partial_trace, projector, trace_norm


@dataclass(frozen=True)
class Realization:
    """rho -> Tr_traced(U (rho x ancilla) U^dag); ``dims`` factorises U's space."""

    unitary: np.ndarray
    ancilla: np.ndarray
    dims: tuple
    traced: tuple
    measured: tuple = ()
    outcome: tuple = ()


def _check_kraus(kraus):
    ks = [as_matrix(k) for k in kraus]
    if not ks:
        raise ShapeError("a channel needs at least one Kraus operator")
    shape = ks[0].shape
    if any(k.shape != shape for k in ks):
        raise ShapeError("Kraus operators have inconsistent shapes")
    return tuple(ks)


class _KrausMap:
    kraus: tuple

    @property
    def in_dim(self):
        return self.kraus[0].shape[1]

    @property
    def out_dim(self):
        return self.kraus[0].shape[0]

    @cached_property
    def stacked(self):
        """Kraus operators as one (count, out, in) array."""
        return np.stack(self.kraus)

    def gram(self):
        """sum_K K^dag K."""
        return sum(k.conj().T @ k for k in self.kraus)

    def __call__(self, rho):
        return apply(self, rho)

    def superoperator(self):
        return sum(np.kron(k, k.conj()) for k in self.kraus)


@dataclass(frozen=True)
class QuantumChannel(_KrausMap):
    kraus: tuple
    realization: Optional[Realization] = field(default=None, compare=False)

    def __post_init__(self):
        ks = _check_kraus(self.kraus)
        object.__setattr__(self, "kraus", ks)
        g = self.gram()
        if np.max(np.abs(g - np.eye(g.shape[0]))) > 1e-9:
            raise ShapeError("Kraus operators are not trace preserving")


@dataclass(frozen=True)
class SubChannel(_KrausMap):
    kraus: tuple
    outcome: tuple = ()
    realization: Optional[Realization] = field(default=None, compare=False)

    def __post_init__(self):
        ks = _check_kraus(self.kraus)
        object.__setattr__(self, "kraus", ks)
        g = self.gram()
        if np.linalg.eigvalsh(np.eye(g.shape[0]) - (g + g.conj().T) / 2)[0] < -1e-9:
            raise ShapeError("Kraus operators are trace increasing")

    def acceptance_constant(self, tol=DEFAULT.superop):
        """Return p if Tr(E(rho)) = p Tr(rho) for every rho, else None.

        Checked on the matrix-unit basis: Tr E(|i><j|) must equal p * delta_ij.
        """
        d_in, d_out = self.in_dim, self.out_dim
        sup = self.superoperator()
        traces = sup[np.arange(d_out) * (d_out + 1), :].sum(axis=0).reshape(d_in, d_in)
        p = float(np.mean(np.diag(traces).real))
        if np.max(np.abs(traces - p * np.eye(d_in))) > tol:
            return None
        return p

    def normalized(self, tol=DEFAULT.superop):
        """The channel E/p when acceptance is a constant p > 0, else None."""
        p = self.acceptance_constant(tol)
        if p is None or p <= tol:
            return None
        return QuantumChannel(tuple(k / np.sqrt(p) for k in self.kraus))


def _ancilla_density(ancilla):
    a = np.asarray(ancilla, dtype=np.complex128)
    return projector(a) if a.ndim == 1 else as_matrix(a)


def _realization_kraus(u, tau, dims, traced, measured, outcome, drop):
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        raise ShapeError("realization unitary must be square")
    if not is_unitary(u, DEFAULT.unitary):
        raise NotUnitary("realization unitary is not unitary")
    d_anc = tau.shape[0]
    total = u.shape[0]
    if total % d_anc:
        raise ShapeError(f"ancilla dimension {d_anc} does not divide {total}")
    d_in = total // d_anc
    dims = [d_in, d_anc] if dims is None else [int(d) for d in dims]
    if int(np.prod(dims)) != total:
        raise ShapeError(f"subsystem dims {dims} do not multiply to {total}")
    traced = sorted(set(int(t) for t in traced))
    measured = [int(m) for m in measured]
    if any(t < 0 or t >= len(dims) for t in traced) or not set(measured) <= set(traced):
        raise ShapeError("traced/measured subsystem indices are invalid")
    if len(outcome) != len(measured):
        raise ShapeError("outcome length does not match measured subsystems")
    kept = [i for i in range(len(dims)) if i not in traced]
    rest = [t for t in traced if t not in measured]
    d_keep = int(np.prod([dims[i] for i in kept])) if kept else 1
    d_rest = int(np.prod([dims[i] for i in rest])) if rest else 1

    w, v = hermitian_eig(tau)
    kraus = []
    for lam, e in zip(w[::-1], v.T[::-1]):
        if lam <= drop:
            continue
        m = u @ np.kron(np.eye(d_in), e.reshape(-1, 1))
        t = m.reshape(dims + [d_in])
        sel = [slice(None)] * len(dims) + [slice(None)]
        for ax, o in zip(measured, outcome):
            sel[ax] = int(o)
        t = t[tuple(sel)]
        remaining = [i for i in range(len(dims)) if i not in measured]
        order = [remaining.index(i) for i in kept + rest] + [len(remaining)]
        t = t.transpose(order).reshape(d_keep, d_rest, d_in)
        for r in range(d_rest):
            k = np.sqrt(lam) * t[:, r, :]
            if np.linalg.norm(k) >= drop:
                kraus.append(k)
    if not kraus:
        kraus.append(np.zeros((d_keep, d_in), dtype=np.complex128))
    return kraus, tuple(dims)


def channel_from_realization(u, ancilla, traced=(1,), dims=None, drop=DEFAULT.kraus_drop):
    """Kraus form of rho -> Tr_traced(U (rho x ancilla) U^dag).

    The input occupies the leading factor of U's space and the ancilla the
    trailing one. ``dims`` optionally refines that factorisation into
    subsystems; ``traced`` indexes into it. By default the ancilla is traced.
    """
    tau = _ancilla_density(ancilla)
    kraus, dims = _realization_kraus(u, tau, dims, traced, (), (), drop)
    real = Realization(as_matrix(u), tau, dims, tuple(sorted(set(traced))))
    return QuantumChannel(tuple(kraus), realization=real)


def subchannel_from_realization(u, ancilla, traced, outcome, measured=None, dims=None,
                                drop=DEFAULT.kraus_drop):
    """rho -> Tr_traced((1 x |x><x|) U (rho x ancilla) U^dag).

    ``measured`` lists the subsystems read out in the computational basis (a
    subset of ``traced``; defaults to all traced subsystems) and ``outcome``
    gives one basis index per measured subsystem.
    """
    tau = _ancilla_density(ancilla)
    measured = tuple(sorted(set(traced))) if measured is None else tuple(measured)
    outcome = tuple(int(o) for o in outcome)
    kraus, dims = _realization_kraus(u, tau, dims, traced, measured, outcome, drop)
    real = Realization(as_matrix(u), tau, dims, tuple(sorted(set(traced))), measured, outcome)
    return SubChannel(tuple(kraus), outcome=outcome, realization=real)


def apply_realization(real, rho):
    """Evaluate a realization directly, without its Kraus form."""
    u = real.unitary
    joint = u @ np.kron(as_matrix(rho), real.ancilla) @ u.conj().T
    dims = list(real.dims)
    if real.measured:
        proj = np.ones(1)
        for i, d in enumerate(dims):
            if i in real.measured:
                vec = np.zeros(d)
                vec[real.outcome[real.measured.index(i)]] = 1
            else:
                vec = np.ones(d)
            proj = np.kron(proj, vec)
        joint = joint * np.outer(proj, proj)
    keep = [i for i in range(len(dims)) if i not in real.traced]
    return partial_trace(joint, dims, keep)


def apply(ch, rho):
    rho = as_matrix(rho)
    if rho.shape != (ch.in_dim, ch.in_dim):
        raise ShapeError(f"input of shape {rho.shape} does not match channel input {ch.in_dim}")
    ks = ch.stacked if isinstance(ch, _KrausMap) else np.stack(ch.kraus)
    return np.sum(ks @ rho @ ks.conj().transpose(0, 2, 1), axis=0)


def unitary_channel(u):
    u = as_matrix(u)
    if not is_unitary(u):
        raise NotUnitary("unitary_channel needs a unitary")
    return QuantumChannel((u,))


def identity_channel(d):
    return QuantumChannel((np.eye(d, dtype=np.complex128),))


def dephasing_channel(d):
    return QuantumChannel(tuple(projector(np.eye(d)[i]) for i in range(d)))


def replacement_channel(sigma, d_in):
    """rho -> Tr(rho) sigma."""
    sigma = _ancilla_density(sigma)
    w, v = hermitian_eig(sigma)
    kraus = []
    for lam, e in zip(w, v.T):
        if lam > DEFAULT.kraus_drop:
            for i in range(d_in):
                k = np.zeros((sigma.shape[0], d_in), dtype=np.complex128)
                k[:, i] = np.sqrt(lam) * e
                kraus.append(k)
    return QuantumChannel(tuple(kraus))


def compose(second, first):
    """second o first."""
    if first.out_dim != second.in_dim:
        raise ShapeError("channel dimensions do not compose")
    ks = [b @ a for b in second.kraus for a in first.kraus]
    ks = [k for k in ks if np.linalg.norm(k) >= DEFAULT.kraus_drop] or ks[:1]
    return QuantumChannel(tuple(ks))


def fix_input(ch, ancilla):
    """rho -> E(rho x ancilla) for a channel on (system x ancilla)."""
    tau = _ancilla_density(ancilla)
    d_anc = tau.shape[0]
    if ch.in_dim % d_anc:
        raise ShapeError("ancilla dimension does not divide channel input")
    d_sys = ch.in_dim // d_anc
    w, v = hermitian_eig(tau)
    ks = []
    for lam, e in zip(w, v.T):
        if lam > DEFAULT.kraus_drop:
            emb = np.kron(np.eye(d_sys), e.reshape(-1, 1))
            ks.extend(np.sqrt(lam) * k @ emb for k in ch.kraus)
    ks = [k for k in ks if np.linalg.norm(k) >= DEFAULT.kraus_drop] or ks[:1]
    cls = QuantumChannel if isinstance(ch, QuantumChannel) else SubChannel
    return cls(tuple(ks))


@dataclass(frozen=True)
class ChoiMatrix:
    """(1 x E)(|Omega><Omega|), |Omega> = sum_i |ii>/sqrt(d_in); input factor first."""

    matrix: np.ndarray
    in_dim: int
    out_dim: int
    convention: str = "input-first, trace-normalised"


def choi(ch):
    d = ch.in_dim
    vecs = [k.T.reshape(-1) / np.sqrt(d) for k in ch.kraus]
    return ChoiMatrix(sum(np.outer(v, v.conj()) for v in vecs), d, ch.out_dim)


def as_unitary(ch, tol=DEFAULT.superop):
    """Return V with E(rho) = V rho V^dag, or None if the channel is not unitary.

    V's global phase is fixed by making its largest-magnitude entry real positive.
    """
    if ch.in_dim != ch.out_dim:
        return None
    c = choi(ch)
    w, v = hermitian_eig(c.matrix, tol=1e-8)
    if w[-1] < 1 - tol:
        return None
    d = ch.in_dim
    mat = np.sqrt(d) * v[:, -1].reshape(d, d).T
    mat = canonical_phase(mat)
    if not is_unitary(mat, 10 * tol):
        return None
    return mat


def probabilistic_unitary(sub, tol=DEFAULT.superop):
    """Return (p, V) when the subchannel equals p * V . V^dag for constant p > 0, else None."""
    p = sub.acceptance_constant(tol)
    if p is None or p <= tol:
        return None
    v = as_unitary(QuantumChannel(tuple(k / np.sqrt(p) for k in sub.kraus)), tol)
    return None if v is None else (p, v)


def canonical_phase(mat):
    flat = mat.reshape(-1)
    j = int(np.argmax(np.round(np.abs(flat), 12)))
    ph = flat[j] / abs(flat[j]) if abs(flat[j]) > 0 else 1.0
    return mat / ph


def trace_distance(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ShapeError(f"cannot compare states of shapes {a.shape} and {b.shape}")
    return 0.5 * trace_norm(a - b)


def choi_distance(ch1, ch2):
    """Trace distance between trace-normalised Choi matrices."""
    return trace_distance(choi(ch1).matrix, choi(ch2).matrix)
