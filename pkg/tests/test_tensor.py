import numpy as np
import pytest
from hypothesis import given, strategies as st

from coherence_nogo.errors import DimensionLimit, NotHermitian, ShapeError
from coherence_nogo.rand import haar_unitary, random_density
from coherence_nogo.tensor import (
    as_density,
    as_state,
    bits_to_index,
    hermitian_eig,
    index_to_bits,
    kron,
    kron_all,
    partial_trace,
    phase_equal,
    trace_norm,
    wire_permutation,
)


def _ptrace_loops(rho, dims, keep):
    # independent oracle: explicit index contraction over multi-indices
    n = len(dims)
    idx = list(np.ndindex(*dims))
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    out = np.zeros((dk, dk), dtype=complex)
    sub = list(np.ndindex(*[dims[i] for i in keep]))
    pos = {m: i for i, m in enumerate(sub)}
    for a, ia in enumerate(idx):
        for b, ib in enumerate(idx):
            if all(ia[j] == ib[j] for j in range(n) if j not in keep):
                out[pos[tuple(ia[j] for j in keep)], pos[tuple(ib[j] for j in keep)]] += rho[a, b]
    return out


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.data())
def test_partial_trace_matches_index_contraction(dims, data):
    d = int(np.prod(dims))
    keep = data.draw(st.sets(st.integers(0, len(dims) - 1)))
    rho = random_density(d, seed=data.draw(st.integers(0, 10**6)))
    got = partial_trace(rho, dims, sorted(keep))
    assert np.allclose(got, _ptrace_loops(rho, dims, sorted(keep)), atol=1e-12)


def test_partial_trace_of_product():
    a, b = random_density(2, seed=1), random_density(3, seed=2)
    assert np.allclose(partial_trace(np.kron(a, b), [2, 3], [0]), a)
    assert np.allclose(partial_trace(np.kron(a, b), [2, 3], [1]), b)
    assert np.isclose(partial_trace(np.kron(a, b), [2, 3], []).item(), 1)


def test_partial_trace_bad_dims():
    with pytest.raises(ShapeError):
        partial_trace(np.eye(4), [2, 3], [0])


def test_kron_limit():
    with pytest.raises(DimensionLimit):
        kron(np.eye(128), np.eye(64))
    assert kron_all(np.eye(2), np.eye(2), np.eye(2)).shape == (8, 8)


def test_validators():
    with pytest.raises(ShapeError):
        as_state([1, 1])
    with pytest.raises(NotHermitian):
        as_density([[0.5, 1], [0, 0.5]])
    with pytest.raises(ShapeError):
        as_density(np.diag([1.5, -0.5]))
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_bits_roundtrip():
    for i in range(16):
        assert bits_to_index(index_to_bits(i, 4)) == i
    assert index_to_bits(6, 3) == (1, 1, 0)


def test_hermitian_eig_reconstructs():
    rho = random_density(5, seed=3)
    w, v = hermitian_eig(rho)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose(v @ np.diag(w) @ v.conj().T, rho)


def test_trace_norm_against_svd():
    m = np.random.default_rng(0).standard_normal((4, 4))
    assert np.isclose(trace_norm(m), np.linalg.svd(m, compute_uv=False).sum())
    assert np.isclose(trace_norm(np.diag([1, -2, 0.5])), 3.5)


def test_phase_equal():
    u = haar_unitary(3, seed=4)
    assert phase_equal(u, np.exp(0.7j) * u)
    assert not phase_equal(u, haar_unitary(3, seed=5))


def test_wire_permutation_moves_qubits():
    # three-qubit |abc> with order (2, 0, 1) becomes |c a b>
    p = wire_permutation([2, 0, 1])
    for x in range(8):
        a, b, c = index_to_bits(x, 3)
        y = bits_to_index((c, a, b))
        assert p[y, x] == 1
    assert np.allclose(p @ p.T, np.eye(8))
