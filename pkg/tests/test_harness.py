import csv
import io
import json

import numpy as np
from hypothesis import given, strategies as st

from coherence_nogo import harness
from coherence_nogo.channels import apply_realization, channel_from_realization
from coherence_nogo.coherence import classify_incoherent_unitary, coherence_rank, dephase
from coherence_nogo.families import (
    IncoherentResourceFamily,
    random_controlled_h,
    random_incoherent_circuit,
)
from coherence_nogo.gates import H, hadamard_n


@given(st.integers(1, 3), st.integers(0, 2), st.integers(0, 3), st.integers(0, 10**6))
def test_family_factors_alternate(n, a, k, seed):
    prod = IncoherentResourceFamily(n, a, k).sample(seed)
    kinds = [f.kind for f in prod.factors]
    assert kinds == ["incoherent"] + ["hadamard", "incoherent"] * k
    assert prod.k == k
    for f in prod.factors:
        if f.kind == "incoherent":
            assert classify_incoherent_unitary(f.matrix) is not None
    if k == 0:
        assert classify_incoherent_unitary(prod.unitary) is not None


def test_compiled_circuits_are_incoherent():
    for seed in range(10):
        u, ops = random_incoherent_circuit(3, 8, seed)
        assert len(ops) == 8
        assert classify_incoherent_unitary(u) is not None


def test_controlled_h_moves_rank_by_at_most_two():
    for seed in range(20):
        v, _ = random_controlled_h(3, seed)
        psi = np.zeros(8, dtype=complex)
        psi[seed % 8] = 1
        assert coherence_rank(v @ psi).value in (1, 2)


def _dephasing_oracle(u, traced, n_total, tol=1e-9):
    # commute with dephasing, checked directly on matrix units
    joint = channel_from_realization(u, np.ones(1), traced=traced, dims=[2] * n_total)
    d = 2**n_total
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d))
            e[i, j] = 1
            lhs = dephase(apply_realization(joint.realization, e))
            rhs = apply_realization(joint.realization, dephase(e))
            if np.max(np.abs(lhs - rhs)) > tol:
                return False
    return True


def test_exact_records_agree_with_direct_oracle():
    rep = harness.verify_exact_nogo(trials=8, seed=3)
    assert rep.passed
    for r in rep.records[:-1]:
        assert r.values["joint_dephasing_covariant"]
        assert r.params["n"] + r.params["a"] <= 5


@given(st.integers(0, 10**6))
def test_incoherent_realizations_commute_with_dephasing(seed):
    g = np.random.default_rng(seed)
    u = IncoherentResourceFamily(1, 2, 0).sample(g).unitary
    traced = tuple(sorted(g.choice(3, size=2, replace=False).tolist()))
    assert _dephasing_oracle(u, traced, 3)


def test_exact_adversarial_record():
    rep = harness.verify_exact_nogo(trials=1, seed=0)
    last = rep.records[-1]
    assert last.status == harness.PASS
    assert not last.values["coherent_unitary"]
    assert last.values["distance_to_H_lower"] >= 0.5


def test_approx_control_is_tight():
    rep = harness.verify_approx_bound(n=2, trials=5, seed=1)
    control = rep.records[-1]
    assert abs(control.slack) <= 1e-9
    assert all(r.values["bound"] >= 0.75 - 1e-9 for r in rep.records)


def test_ancilla_independence_negative_control():
    rep = harness.verify_ancilla_independence(trials=3, seed=0)
    assert rep.passed
    assert rep.records[-1].status == harness.EXPECTED_FAILURE
    assert rep.aggregate["n_expected_failure"] == 1


def test_kton_worked_example_and_witness():
    rep = harness.verify_kton(n=2, k=1, trials=20, seed=0)
    assert rep.passed
    for r in rep.records:
        assert r.values["contradiction"] and r.values["intervals_disjoint"]
        if r.params["a"] == 0:
            assert r.values["witness_overlap"] <= 0.5 + 1e-9


def test_witness_saturates_when_k_equals_n():
    u = hadamard_n(2)
    overlap = abs(np.vdot(hadamard_n(2)[:, 0], u[:, 0])) ** 2
    assert np.isclose(overlap, 1.0)


def test_kton_k0_n1_overlap_is_half():
    for seed in range(10):
        u = IncoherentResourceFamily(1, 0, 0).sample(seed).unitary
        assert np.isclose(abs(np.vdot(H[:, 0], u[:, 0])) ** 2, 0.5)


def test_rank_ladder_single_hadamard():
    assert coherence_rank(H @ [1, 0]).value == 2
    rep = harness.verify_rank_ladder(trials=30, seed=2)
    assert rep.passed
    zero_k = [r for r in rep.records if r.params["k"] == 0]
    assert all(r.values["chi_before"] == r.values["chi_after"] for r in zero_k)


def test_reports_are_reproducible_and_parseable():
    a = harness.verify_kton(n=3, k=2, trials=6, seed=5)
    b = harness.verify_kton(n=3, k=2, trials=6, seed=5)
    assert a.to_json() == b.to_json() and a.to_csv() == b.to_csv()
    doc = json.loads(a.to_json())
    assert set(doc) == {"lemma", "seed", "trials", "records", "aggregate", "verdict"}
    rows = list(csv.DictReader(io.StringIO(a.to_csv())))
    assert len(rows) == 6 and rows[0]["lemma"] == "kton"
    # a record depends only on (lemma, seed, index)
    longer = harness.verify_kton(n=3, k=2, trials=9, seed=5)
    assert [r.to_dict() for r in longer.records[:6]] == [r.to_dict() for r in a.records]
