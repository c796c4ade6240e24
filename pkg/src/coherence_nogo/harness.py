"""Randomised campaigns checking each no-go statement, with JSON/CSV reports.

Every trial draws from ``default_rng([lemma code, seed, trial index])`` so any
record can be regenerated on its own.
"""
import csv
import io
import json
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .channels import (
    as_unitary,
    channel_from_realization,
    probabilistic_unitary,
    replacement_channel,
    subchannel_from_realization,
    trace_distance,
    unitary_channel,
)
from .circuits.gadgets import hadamard_gadget_b
from .circuits.ir import Circuit
from .circuits.simulate import circuit_branch_maps, circuit_channel
from .coherence import classify_incoherent_unitary, coherence_rank, is_dephasing_covariant
from .config import DEFAULT
from .distance import certified_nogo_bound, induced_distance_lower
from .families import IncoherentResourceFamily, random_ancilla, random_pure_ancilla
from .gates import CNOT, GATES, STATES, hadamard_n
from .rand import haar_unitary, random_density
from .tensor import kron, ket, partial_trace, projector

LEMMAS = ("exact", "approx", "ancilla-indep", "kton", "rank-ladder")
_CODES = {name: i + 1 for i, name in enumerate(LEMMAS)}

PASS, FAIL, EXPECTED_FAILURE = "pass", "fail", "expected-failure"


def trial_rng(lemma, seed, index):
    return np.random.default_rng([_CODES[lemma], int(seed), int(index)])


def _plain(x):
    """Convert numpy scalars and tuples into JSON-ready Python values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    return x


@dataclass(frozen=True)
class TrialRecord:
    index: int
    status: str
    params: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    slack: float = None

    def to_dict(self):
        return _plain({"index": self.index, "status": self.status, "params": self.params,
                       "values": self.values, "slack": self.slack})


@dataclass(frozen=True)
class NoGoReport:
    lemma: str
    seed: int
    trials: int
    records: tuple

    @property
    def aggregate(self):
        slacks = [r.slack for r in self.records if r.slack is not None]
        count = {s: sum(r.status == s for r in self.records) for s in (PASS, FAIL, EXPECTED_FAILURE)}
        return {
            "n_pass": count[PASS],
            "n_fail": count[FAIL],
            "n_expected_failure": count[EXPECTED_FAILURE],
            "slack_min": float(min(slacks)) if slacks else None,
            "slack_max": float(max(slacks)) if slacks else None,
            "slack_mean": float(np.mean(slacks)) if slacks else None,
        }

    @property
    def verdict(self):
        return FAIL if any(r.status == FAIL for r in self.records) else PASS

    @property
    def passed(self):
        return self.verdict == PASS

    def to_dict(self):
        return {"lemma": self.lemma, "seed": self.seed, "trials": self.trials,
                "records": [r.to_dict() for r in sorted(self.records, key=lambda r: r.index)],
                "aggregate": self.aggregate, "verdict": self.verdict}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self):
        rows = []
        for r in sorted(self.records, key=lambda r: r.index):
            d = r.to_dict()
            row = {"lemma": self.lemma, "seed": self.seed, "index": d["index"],
                   "status": d["status"], "slack": d["slack"]}
            for group in ("params", "values"):
                for k, v in d[group].items():
                    row[f"{group}.{k}"] = json.dumps(v, sort_keys=True) if isinstance(
                        v, (list, dict)) else v
            rows.append(row)
        head = ["lemma", "seed", "index", "status", "slack"]
        extra = sorted({k for row in rows for k in row} - set(head))
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=head + extra, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()

    def write(self, path, fmt="json"):
        text = self.to_csv() if fmt == "csv" else self.to_json()
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _is_incoherent(v):
    return classify_incoherent_unitary(v) is not None


def _pick_traced(g, n_total, n_traced):
    return tuple(sorted(int(w) for w in g.choice(n_total, size=n_traced, replace=False)))


# ---------------------------------------------------------------- exact

def _exact_checks(u, tau, n, a, traced, tol):
    """Covariance and unitary-extraction checks for one realization."""
    dims = [2] * (n + a)
    joint = channel_from_realization(u, np.ones(1), traced=traced, dims=dims)
    covariant = is_dephasing_covariant(joint, tol)
    found = []
    v = as_unitary(channel_from_realization(u, tau, traced=traced, dims=dims), tol)
    if v is not None:
        found.append(("channel", _is_incoherent(v)))
    n_const = 0
    sub_covariant = True
    for x in product((0, 1), repeat=a):
        sub = subchannel_from_realization(u, tau, traced, x, dims=dims)
        hit = probabilistic_unitary(sub, tol)
        if sub.acceptance_constant(tol) is not None:
            n_const += 1
            jsub = subchannel_from_realization(u, np.ones(1), traced, x, dims=dims)
            sub_covariant &= is_dephasing_covariant(jsub, tol)
        if hit is not None:
            found.append(("".join(map(str, x)), _is_incoherent(hit[1])))
    coherent = [name for name, ok in found if not ok]
    return {
        "joint_dephasing_covariant": covariant,
        "subchannels_dephasing_covariant": bool(sub_covariant),
        "constant_subchannels": n_const,
        "unitaries_found": [name for name, _ in found],
        "coherent_unitaries": coherent,
    }


def _adversarial_gadget_b(tol):
    """Hadamard gadget b with the X-basis readout replaced by a computational one."""
    g = hadamard_gadget_b()
    ops = tuple(op for op in g.circuit.ops if getattr(op, "name", None) != "H")
    c = Circuit(g.circuit.n_qubits, g.circuit.n_bits, ops)
    anc = g.ancilla_pairs()
    ch = circuit_channel(c, g.inputs, anc, g.outputs)
    v = as_unitary(ch, tol)
    subs = circuit_branch_maps(c, g.inputs, anc, g.outputs)
    hits = {rec: probabilistic_unitary(s, tol) for rec, s in subs.items()}
    coherent = (v is not None and not _is_incoherent(v)) or any(
        h is not None and not _is_incoherent(h[1]) for h in hits.values())
    dist = induced_distance_lower(ch, GATES["H"], budget=400, seed=0, n_random=2).value
    return coherent, dist


def verify_exact_nogo(trials=100, seed=0, n=None, ancilla_qubits=None, tol=DEFAULT.superop,
                      max_qubits=5):
    """Random incoherent realizations never yield a coherent unitary, even probabilistically."""
    records = []
    for t in range(trials):
        g = trial_rng("exact", seed, t)
        nn = n if n is not None else int(g.integers(1, 3))
        a = ancilla_qubits if ancilla_qubits is not None else int(g.integers(1, max_qubits - nn + 1))
        fam = IncoherentResourceFamily(nn, a, 0)
        if g.random() < 0.25:
            # product realization: system and ancilla untouched by each other, so
            # every subchannel has constant acceptance
            us = IncoherentResourceFamily(nn, 0, 0).sample(g).unitary
            ua = IncoherentResourceFamily(a, 0, 0).sample(g).unitary
            u, kind = np.kron(us, ua), "product"
            traced = tuple(range(nn, nn + a))
        else:
            u = fam.sample(g).unitary
            kind = "random"
            traced = _pick_traced(g, nn + a, a)
        tau, tkind = random_ancilla(a, g)
        vals = _exact_checks(u, tau, nn, a, traced, tol)
        ok = (vals["joint_dephasing_covariant"] and vals["subchannels_dephasing_covariant"]
              and not vals["coherent_unitaries"])
        records.append(TrialRecord(t, PASS if ok else FAIL,
                                   {"n": nn, "a": a, "traced": traced, "unitary": kind,
                                    "ancilla": tkind},
                                   vals))
    coherent, dist = _adversarial_gadget_b(tol)
    ok = not coherent and dist >= 0.5 - 1e-9
    records.append(TrialRecord(trials, PASS if ok else FAIL,
                               {"control": "hadamard_gadget_b, computational readout"},
                               {"coherent_unitary": coherent, "distance_to_H_lower": dist}))
    return NoGoReport("exact", seed, trials, tuple(records))


# ---------------------------------------------------------------- approx

def verify_approx_bound(n=1, trials=100, seed=0, ancilla_qubits=None, tol=DEFAULT.superop,
                        budget=300, max_qubits=5):
    """Certified distance to H^n is at least 1 - 2^-n for every incoherent-resource channel."""
    if not 1 <= n <= 4:
        raise ValueError("verify_approx_bound needs 1 <= n <= 4")
    floor = 1 - 2.0**-n
    records = []
    for t in range(trials):
        g = trial_rng("approx", seed, t)
        a = ancilla_qubits if ancilla_qubits is not None else int(
            g.integers(1, max(1, max_qubits - n) + 1))
        u = IncoherentResourceFamily(n, a, 0).sample(g).unitary
        traced = _pick_traced(g, n + a, a)
        tau, tkind = random_ancilla(a, g)
        dims = [2] * (n + a)
        joint = channel_from_realization(u, np.ones(1), traced=traced, dims=dims)
        nb = certified_nogo_bound(joint, n, tau, tol)
        ch = channel_from_realization(u, tau, traced=traced, dims=dims)
        lower = induced_distance_lower(ch, hadamard_n(n), budget=budget, seed=t, n_random=2)
        slack = nb.bound - floor
        records.append(TrialRecord(
            t, PASS if slack >= -1e-9 else FAIL,
            {"n": n, "a": a, "traced": traced, "ancilla": tkind},
            {"bound": nb.bound, "witness": "".join(map(str, nb.witness_basis_vector)),
             "optimizer_lower": lower.value},
            slack))
    # control: replace everything with the maximally mixed state
    d = 2**n
    ctrl = replacement_channel(np.eye(d) / d, 2 * d)
    nb = certified_nogo_bound(ctrl, n, STATES["+"], tol)
    slack = nb.bound - floor
    records.append(TrialRecord(trials, PASS if abs(slack) <= 1e-9 else FAIL,
                               {"n": n, "control": "replace-with-maximally-mixed"},
                               {"bound": nb.bound}, slack))
    return NoGoReport("approx", seed, trials, tuple(records))


# ---------------------------------------------------------------- ancilla independence

def _marginal_spread(u, gamma, inputs, d_sys):
    d_anc = gamma.shape[0]
    margs = [partial_trace(u @ kron(rho, gamma) @ u.conj().T, [d_sys, d_anc], keep=[1])
             for rho in inputs]
    return max((trace_distance(x, y) for x, y in combinations(margs, 2)), default=0.0)


def verify_ancilla_independence(trials=50, seed=0, n_inputs=10, tol=1e-9):
    """For U = V x W the ancilla marginal does not depend on the input."""
    records = []
    for t in range(trials):
        g = trial_rng("ancilla-indep", seed, t)
        ns = int(g.integers(1, 3))
        ds = 2**ns
        if t == 0:
            v, w, gamma, kind = GATES["H"], np.eye(2), projector(STATES["T"]), "H x I, |T>"
        else:
            v, w = haar_unitary(ds, g), haar_unitary(2, g)
            gamma, kind = projector(random_pure_ancilla(1, g)), "haar"
        u = np.kron(v, w)
        inputs = [random_density(v.shape[0], seed=g) for _ in range(n_inputs)]
        spread = _marginal_spread(u, gamma, inputs, v.shape[0])
        records.append(TrialRecord(t, PASS if spread <= tol else FAIL,
                                   {"system_qubits": int(np.log2(v.shape[0])), "unitary": kind},
                                   {"max_pairwise_distance": spread}, tol - spread))
    # negative control: an entangling unitary breaks independence
    spread = _marginal_spread(CNOT, projector(ket(0, 2)),
                              [projector(ket(0, 2)), projector(ket(1, 2))], 2)
    records.append(TrialRecord(trials, EXPECTED_FAILURE if spread > tol else FAIL,
                               {"control": "CNOT, inputs |0>,|1>"},
                               {"max_pairwise_distance": spread}))
    return NoGoReport("ancilla-indep", seed, trials, tuple(records))


# ---------------------------------------------------------------- k -> n

def _kton_trial(prod, n, a, k, gamma, tol):
    u = prod.unitary
    zero = np.kron(ket(0, 2**n), gamma)
    plus = np.kron(hadamard_n(n)[:, 0], gamma)
    r = coherence_rank(gamma, tol).value
    c0 = coherence_rank(u @ zero, tol)
    cp = coherence_rank(u @ plus, tol)
    # an exact H^n would give c0 = 2^n r' and cp = r' for the same r'
    window0 = r / 2**k <= c0.value <= 2**k * r
    windowp = 2**n * r / 2**k <= cp.value <= 2**k * 2**n * r
    disjoint = 2**k * r < 2 ** (2 * n - k) * r
    return {"r": r, "chi_zero": c0.value, "chi_plus": cp.value,
            "near_threshold": c0.near_threshold or cp.near_threshold,
            "windows_hold": window0 and windowp, "intervals_disjoint": disjoint,
            "contradiction": c0.value != 2**n * cp.value}


def verify_kton(n=2, k=1, trials=50, seed=0, ancilla_qubits=None, tol=DEFAULT.rank,
                max_qubits=5):
    """k Hadamards plus incoherent resources cannot implement H^n exactly when k < n."""
    if not 0 <= k < n <= 4:
        raise ValueError("verify_kton needs 0 <= k < n <= 4")
    records = []
    for t in range(trials):
        g = trial_rng("kton", seed, t)
        a = ancilla_qubits if ancilla_qubits is not None else int(
            g.integers(0, min(2, max_qubits - n) + 1))
        prod = IncoherentResourceFamily(n, a, k).sample(g)
        gamma = random_pure_ancilla(a, g) if a else np.ones(1, dtype=np.complex128)
        vals = _kton_trial(prod, n, a, k, gamma, tol)
        loose = _kton_trial(prod, n, a, k, gamma, 1e-7)
        vals["tolerance_sensitive"] = (loose["chi_zero"], loose["chi_plus"]) != (
            vals["chi_zero"], vals["chi_plus"])
        ok = vals["windows_hold"] and vals["intervals_disjoint"] and vals["contradiction"]
        slack = None
        if a == 0:
            u = prod.unitary
            overlap = float(abs(np.vdot(hadamard_n(n)[:, 0], u[:, 0])) ** 2)
            vals["witness_overlap"] = overlap
            slack = 2.0 ** (k - n) - overlap
            ok = ok and slack >= -1e-9
            # approximate regime: measured only, nothing asserted
            vals["distance_to_Hn_lower"] = induced_distance_lower(
                unitary_channel(u), hadamard_n(n), budget=200, seed=t, n_random=2).value
        records.append(TrialRecord(t, PASS if ok else FAIL,
                                   {"n": n, "k": k, "a": a,
                                    "factors": [f.label for f in prod.factors]},
                                   vals, slack))
    return NoGoReport("kton", seed, trials, tuple(records))


# ---------------------------------------------------------------- rank ladder

def verify_rank_ladder(trials=100, seed=0, max_k=3, max_qubits=4, tol=DEFAULT.rank):
    """chi(psi) / 2^k <= chi(U psi) <= 2^k chi(psi) for products with k Hadamard layers."""
    records = []
    for t in range(trials):
        g = trial_rng("rank-ladder", seed, t)
        nq = int(g.integers(1, max_qubits + 1))
        k = int(g.integers(0, max_k + 1))
        prod = IncoherentResourceFamily(nq, 0, k).sample(g)
        psi = random_pure_ancilla(nq, g)
        before = coherence_rank(psi, tol).value
        after = coherence_rank(prod.unitary @ psi, tol).value
        lo, hi = before / 2**k, before * 2**k
        ok = lo <= after <= hi
        records.append(TrialRecord(t, PASS if ok else FAIL,
                                   {"qubits": nq, "k": k,
                                    "factors": [f.label for f in prod.factors]},
                                   {"chi_before": before, "chi_after": after},
                                   min(after - lo, hi - after) / before))
    return NoGoReport("rank-ladder", seed, trials, tuple(records))
