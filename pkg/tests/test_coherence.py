import numpy as np
import pytest
from hypothesis import given, strategies as st

from coherence_nogo.channels import (
    QuantumChannel,
    apply,
    compose,
    dephasing_channel,
    unitary_channel,
)
from coherence_nogo.coherence import (
    classify_incoherent_unitary,
    coherence_rank,
    dephase,
    is_dephasing_covariant,
    is_incoherent_state,
    is_mio,
)
from coherence_nogo.errors import NotUnitary
from coherence_nogo.gates import CNOT, GATES, H, TOFFOLI, hadamard_n
from coherence_nogo.rand import haar_state, random_incoherent_unitary, random_kraus, sparse_state


def test_dephase_zeroes_offdiagonals():
    rho = np.full((3, 3), 1 / 3)
    assert np.allclose(dephase(rho), np.eye(3) / 3)
    assert is_incoherent_state(np.eye(3) / 3)
    assert not is_incoherent_state(rho)


@given(st.integers(1, 16), st.integers(0, 10**6))
def test_classify_recovers_permutation_and_phases(d, seed):
    u = random_incoherent_unitary(d, seed)
    dec = classify_incoherent_unitary(u)
    assert dec is not None
    assert np.allclose(dec.matrix(), u)
    assert all(-np.pi < t <= np.pi for t in dec.phases)


def test_classify_rejects_coherent_and_non_unitary():
    assert classify_incoherent_unitary(H) is None
    assert classify_incoherent_unitary(hadamard_n(2)) is None
    for name in ("X", "Z", "S", "T", "CNOT", "SWAP", "TOFFOLI"):
        assert classify_incoherent_unitary(GATES[name]) is not None
    with pytest.raises(NotUnitary):
        classify_incoherent_unitary(np.diag([1, 2]))


def test_classify_phases_of_minus_one():
    dec = classify_incoherent_unitary(-np.eye(2))
    assert np.allclose(dec.phases, [np.pi, np.pi])


def test_coherence_rank():
    assert coherence_rank([1, 0, 0, 0]) == 1
    assert coherence_rank(np.ones(8) / np.sqrt(8)) == 8
    r = coherence_rank([1, 3e-10, 0, 0])
    assert r == 1 and r.near_threshold
    assert coherence_rank([1, 1e-8, 0, 0], tol=1e-7) == 1
    psi = sparse_state(16, 5, seed=2)
    assert coherence_rank(psi) == 5


@given(st.integers(0, 10**6))
def test_rank_multiplicative_on_products(seed):
    g = np.random.default_rng(seed)
    a = sparse_state(4, int(g.integers(1, 5)), g)
    b = sparse_state(4, int(g.integers(1, 5)), g)
    assert coherence_rank(np.kron(a, b)).value == coherence_rank(a).value * coherence_rank(b).value


def _units(d):
    for i in range(d):
        for j in range(d):
            m = np.zeros((d, d), dtype=complex)
            m[i, j] = 1
            yield m


def _mio_oracle(ch, tol=1e-9):
    # Delta E Delta == E Delta, evaluated map by map on matrix units
    return all(np.max(np.abs(dephase(apply(ch, dephase(e))) - apply(ch, dephase(e)))) <= tol
               for e in _units(ch.in_dim))


def _dio_oracle(ch, tol=1e-9):
    return all(np.max(np.abs(dephase(apply(ch, e)) - apply(ch, dephase(e)))) <= tol
               for e in _units(ch.in_dim))


def test_incoherent_unitary_channel_is_dio():
    for seed in range(5):
        ch = unitary_channel(random_incoherent_unitary(8, seed))
        assert is_dephasing_covariant(ch) and is_mio(ch)
    assert not is_dephasing_covariant(unitary_channel(H))
    assert not is_mio(unitary_channel(H))
    assert is_dephasing_covariant(dephasing_channel(3))


def test_mio_but_not_dio():
    # X-basis measure-and-prepare: outputs are always diagonal, inputs are read coherently
    d = 2
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    ks = (np.outer([1, 0], plus.conj()), np.outer([0, 1], minus.conj()))
    ch = QuantumChannel(ks)
    assert is_mio(ch) == _mio_oracle(ch)
    assert is_dephasing_covariant(ch) == _dio_oracle(ch)
    assert is_mio(ch) and not is_dephasing_covariant(ch)
    assert ch.in_dim == d


@given(st.integers(0, 10**6))
def test_classifiers_match_oracles(seed):
    g = np.random.default_rng(seed)
    d = int(g.integers(2, 5))
    ch = QuantumChannel(tuple(random_kraus(d, d, int(g.integers(1, 4)), g)))
    pick = int(g.integers(3))
    if pick == 1:
        ch = compose(dephasing_channel(d), ch)
    elif pick == 2:
        ch = compose(dephasing_channel(d), compose(ch, dephasing_channel(d)))
    assert is_mio(ch) == _mio_oracle(ch)
    assert is_dephasing_covariant(ch) == _dio_oracle(ch)
    if is_dephasing_covariant(ch):
        assert is_mio(ch)


def test_rank_of_cnot_on_plus_zero():
    psi = CNOT @ np.kron(H @ [1, 0], [1, 0])
    assert coherence_rank(psi) == 2
    assert coherence_rank(TOFFOLI @ np.kron(haar_state(4, 0), [1, 0])) == 4
