"""Dense complex linear algebra on finite-dimensional Hilbert spaces.

Matrices and vectors are plain ``numpy`` arrays of dtype ``complex128``. Qubit
ordering is big-endian: subsystem 0 is the most significant tensor factor.
"""
from functools import reduce

import numpy as np

from .config import DEFAULT
from .errors import DimensionLimit, NotHermitian, ShapeError


def as_matrix(m):
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ShapeError("matrix has non-finite entries")
    return a


def as_state(psi, tol=DEFAULT.norm):
    """Validate a pure state vector and return it as a 1-d complex array."""
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise ShapeError("state has non-finite amplitudes")
    norm2 = float(np.vdot(v, v).real)
    if abs(norm2 - 1.0) > tol:
        raise ShapeError(f"state is not normalised (|psi|^2 = {norm2!r})")
    return v


def as_density(rho, tol=DEFAULT.herm):
    """Validate a density matrix: Hermitian, unit trace, positive semidefinite."""
    r = as_matrix(rho)
    if r.shape[0] != r.shape[1]:
        raise ShapeError(f"density matrix must be square, got {r.shape}")
    if np.max(np.abs(r - r.conj().T), initial=0.0) > tol:
        raise NotHermitian("density matrix is not Hermitian")
    if abs(np.trace(r).real - 1.0) > tol:
        raise ShapeError(f"density matrix trace {np.trace(r).real!r} != 1")
    if np.linalg.eigvalsh(r)[0] < -tol:
        raise ShapeError("density matrix has a negative eigenvalue")
    return r


def projector(psi):
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    return np.outer(v, v.conj())


def ket(index, dim):
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def bits_to_index(bits):
    return int("".join(str(int(b)) for b in bits), 2) if len(bits) else 0


def index_to_bits(index, width):
    return tuple((index >> (width - 1 - i)) & 1 for i in range(width))


def kron(a, b, max_dim=DEFAULT.max_dim):
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim == 1 and b.ndim == 1:
        if a.size * b.size > max_dim:
            raise DimensionLimit(f"dimension {a.size * b.size} exceeds {max_dim}")
        return np.kron(a, b)
    a, b = np.atleast_2d(a), np.atleast_2d(b)
    if max(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]) > max_dim:
        raise DimensionLimit(
            f"kron result {a.shape[0] * b.shape[0]}x{a.shape[1] * b.shape[1]} exceeds {max_dim}"
        )
    return np.kron(a, b)


def kron_all(*factors, max_dim=DEFAULT.max_dim):
    return reduce(lambda x, y: kron(x, y, max_dim=max_dim), factors)


def partial_trace(rho, dims, keep):
    """Reduced operator on the subsystems listed in ``keep`` (kept in ascending order)."""
    rho = as_matrix(rho)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims)) if dims else 1
    if rho.shape != (total, total):
        raise ShapeError(f"dims {dims} do not match operator of shape {rho.shape}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ShapeError(f"keep indices {keep} out of range for {len(dims)} subsystems")
    n = len(dims)
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    perm = keep + traced + [n + i for i in keep] + [n + i for i in traced]
    t = t.transpose(perm)
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    dt = int(np.prod([dims[i] for i in traced])) if traced else 1
    return np.einsum("ajbj->ab", t.reshape(dk, dt, dk, dt))


def hermitian_eig(m, tol=DEFAULT.herm):
    """Ascending eigenvalues and orthonormal eigenvectors (as columns)."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"matrix must be square, got {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    if np.max(np.abs(m - m.conj().T), initial=0.0) > tol * scale:
        raise NotHermitian("matrix is not Hermitian")
    # LAPACK's Hermitian solver is deterministic for a fixed input and build.
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return w, v


def trace_norm(m):
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"trace norm needs a square matrix, got {m.shape}")
    if not m.size:
        return 0.0
    if np.allclose(m, m.conj().T, atol=1e-13, rtol=0):
        return float(np.sum(np.abs(np.linalg.eigvalsh((m + m.conj().T) / 2))))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def is_unitary(m, tol=DEFAULT.unitary):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])), initial=0.0) <= tol)


def phase_equal(a, b, tol=DEFAULT.phase_equal):
    """True when ``a`` and ``b`` agree up to a global phase."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        return False
    d = a.shape[0]
    return bool(abs(np.trace(a.conj().T @ b)) / d >= 1 - tol)


def permutation_matrix(perm):
    """Unitary sending |x> to |perm[x]>."""
    d = len(perm)
    p = np.zeros((d, d), dtype=np.complex128)
    p[list(perm), list(range(d))] = 1.0
    return p


def wire_permutation(order):
    """Unitary moving qubit wire ``order[i]`` of the input to position ``i`` of the output."""
    n = len(order)
    d = 2**n
    idx = np.arange(d).reshape([2] * n).transpose(order).reshape(-1)
    # output basis state y comes from input basis state idx[y]
    p = np.zeros((d, d), dtype=np.complex128)
    p[np.arange(d), idx] = 1.0
    return p
