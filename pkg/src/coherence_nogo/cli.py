"""coherence-nogo command line: analyze, verify-gadget, nogo, distance.

Exit codes: 0 pass, 1 verified failure, 2 usage or parse error.
"""
import argparse
import csv
import io
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import harness
from .channels import QuantumChannel, channel_from_realization
from .circuits.ir import ClassicallyControlledGate, ControlledGate, Measure
from .circuits.gadgets import gadget_choi_distance, gadget_library
from .circuits.parser import _gate_matrix, parse_circuit
from .circuits.rewrite import classify_op, hadamard_count
from .circuits.simulate import circuit_channel
from .coherence import is_dephasing_covariant
from .config import DEFAULT
from .distance import certified_nogo_bound, induced_distance_lower
from .errors import CircuitSyntaxError, CoherenceError, UnclassifiableGate, UnknownGadget
from .gates import hadamard_n, named_state
from .tensor import as_matrix, hermitian_eig, is_unitary, projector

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _flat_csv(report):
    """Two-column key,value view of a nested report."""
    rows = []

    def walk(prefix, x):
        if isinstance(x, dict):
            for k in sorted(x):
                walk(f"{prefix}.{k}" if prefix else str(k), x[k])
        elif isinstance(x, list) and any(isinstance(v, (dict, list)) for v in x):
            for i, v in enumerate(x):
                walk(f"{prefix}.{i}", v)
        else:
            rows.append((prefix, json.dumps(x) if isinstance(x, list) else x))

    walk("", report)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    w.writerows(rows)
    return buf.getvalue()


def _write(report, path, fmt):
    if path is None:
        return
    text = _flat_csv(report) if fmt == "csv" else json.dumps(report, sort_keys=True, indent=2) + "\n"
    Path(path).write_text(text)


def _read_circuit(path):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        return parse_circuit(text)
    except CircuitSyntaxError as e:
        raise UsageError(f"{path}: {e}") from None


# ---------------------------------------------------------------- analyze

def _describe(op):
    if isinstance(op, Measure):
        return f"measure -> c{op.bit}"
    if isinstance(op, ClassicallyControlledGate):
        return f"{_describe(op.gate)} if c{op.bit}=={op.value}"
    if isinstance(op, ControlledGate):
        trig = ",".join("".join(map(str, t)) for t in sorted(op.trigger))
        return f"c-{op.gate.name} when {trig}"
    return op.name


def cmd_analyze(args):
    circuit = _read_circuit(args.circuit)
    table = [{"index": i, "op": _describe(op), "wires": list(op.wires),
              "class": classify_op(op)} for i, op in enumerate(circuit.ops)]
    print(f"{'#':>3}  {'op':<26} {'wires':<12} class")
    for row in table:
        print(f"{row['index']:>3}  {row['op']:<26} {str(row['wires']):<12} {row['class']}")
    report = {"circuit": str(args.circuit), "ops": table}
    try:
        k = hadamard_count(circuit)
    except UnclassifiableGate as e:
        print(f"error: {e}")
        report["error"] = str(e)
        _write(report, args.out, args.format)
        return EXIT_FAIL
    # |0...0> has coherence rank 1
    report.update({"k": k, "rank_window": [2.0**-k, 2.0**k]})
    print(f"k = {k}; rank window for |0...0>: [{2.0**-k:g}, {2.0**k:g}]")
    _write(report, args.out, args.format)
    return EXIT_PASS


# ---------------------------------------------------------------- verify-gadget

def cmd_verify_gadget(args):
    try:
        g = gadget_library(args.name)
    except UnknownGadget as e:
        raise UsageError(str(e.args[0])) from None
    if args.ancilla:
        try:
            g = g.with_ancilla(args.ancilla, args.ancilla_wires)
        except (KeyError, ValueError, CoherenceError) as e:
            raise UsageError(f"bad ancilla override: {e}") from None
    tol = args.tol if args.tol is not None else 1e-9
    dist = gadget_choi_distance(g)
    ok = dist <= tol
    print(f"{g.name}: target {g.target_name}, Choi distance {dist:.3e} -> {'pass' if ok else 'fail'}")
    _write({"gadget": g.name, "target": g.target_name,
            "ancillas": [{"wires": list(a.wires), "label": a.label} for a in g.ancillas],
            "choi_distance": float(dist), "tolerance": tol, "pass": bool(ok)},
           args.out, args.format)
    return EXIT_PASS if ok else EXIT_FAIL


# ---------------------------------------------------------------- nogo

def _run_lemma(args):
    kw = {"trials": args.trials, "seed": args.seed}
    if args.tol is not None:
        kw["tol"] = args.tol
    lemma = args.lemma
    if lemma == "exact":
        return harness.verify_exact_nogo(n=args.n, ancilla_qubits=args.ancilla_qubits, **kw)
    if lemma == "approx":
        return harness.verify_approx_bound(n=args.n or 1, ancilla_qubits=args.ancilla_qubits, **kw)
    if lemma == "ancilla-indep":
        return harness.verify_ancilla_independence(**kw)
    if lemma == "kton":
        n = args.n if args.n is not None else 2
        k = args.k if args.k is not None else n - 1
        return harness.verify_kton(n=n, k=k, ancilla_qubits=args.ancilla_qubits, **kw)
    return harness.verify_rank_ladder(**kw)


def cmd_nogo(args):
    try:
        report = _run_lemma(args)
    except ValueError as e:
        raise UsageError(str(e)) from None
    out = args.out or f"nogo-{args.lemma}-seed{args.seed}.{args.format}"
    report.write(out, args.format)
    agg = report.aggregate
    print(f"{args.lemma}: {agg['n_pass']} pass, {agg['n_fail']} fail, "
          f"{agg['n_expected_failure']} expected-failure; verdict {report.verdict}; "
          f"report -> {out}")
    if agg["slack_min"] is not None:
        print(f"slack min {agg['slack_min']:.3e} mean {agg['slack_mean']:.3e} "
              f"max {agg['slack_max']:.3e}")
    return EXIT_PASS if report.passed else EXIT_FAIL


# ---------------------------------------------------------------- distance

def _ancilla_density(text):
    """Named state product ("+,T", "uk(3)") or "mixed:<qubits>"; returns (rho, qubits)."""
    text = (text or "").strip()
    if not text:
        return np.ones((1, 1), dtype=np.complex128), 0
    m = re.fullmatch(r"mixed:(\d+)", text)
    if m:
        d = 2 ** int(m.group(1))
        return np.eye(d, dtype=np.complex128) / d, int(m.group(1))
    try:
        psi = named_state(text)
    except (KeyError, ValueError, CoherenceError) as e:
        raise UsageError(f"bad ancilla {text!r}: {e}") from None
    return projector(psi), int(np.log2(psi.size))


def _unitary_from_spec(value):
    if isinstance(value, str):
        try:
            return _gate_matrix((value, 1), 1)[1]
        except CircuitSyntaxError as e:
            raise UsageError(f"bad unitary literal: {e}") from None
    try:
        m = as_matrix(np.array([[complex(str(x).replace("i", "j")) for x in row] for row in value]))
    except (TypeError, ValueError, CoherenceError) as e:
        raise UsageError(f"bad unitary matrix: {e}") from None
    if not is_unitary(m, 1e-8):
        raise UsageError("unitary matrix is not unitary")
    return m


def _mixture(build, tau):
    """Channel for a mixed ancilla as the eigen-weighted sum of pure-ancilla channels."""
    w, v = hermitian_eig(tau)
    ks = []
    for lam, e in zip(w, v.T):
        if lam > DEFAULT.kraus_drop:
            ks.extend(np.sqrt(lam) * k for k in build(e).kraus)
    return QuantumChannel(tuple(ks))


def load_channel_spec(path, n):
    """Return (induced channel, joint channel, ancilla density) for a channel spec file."""
    try:
        spec = json.loads(Path(path).read_text())
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    if not isinstance(spec, dict) or ("circuit" in spec) == ("unitary" in spec):
        raise UsageError("channel spec needs exactly one of 'circuit' or 'unitary'")
    tau, a = _ancilla_density(spec.get("ancilla"))
    total = n + a
    trace = spec.get("trace", list(range(n, total)))
    if not isinstance(trace, list) or not all(isinstance(t, int) for t in trace):
        raise UsageError("'trace' must be a list of wire indices")
    if "circuit" in spec:
        circuit = _read_circuit(Path(path).parent / spec["circuit"])
        total = circuit.n_qubits
    else:
        u = _unitary_from_spec(spec["unitary"])
        if u.shape[0] != 2**total:
            raise UsageError(f"unitary acts on {int(np.log2(u.shape[0]))} qubits, "
                             f"expected {total} = {n} input + {a} ancilla")
    if sorted(set(trace)) != sorted(trace) or any(not 0 <= t < total for t in trace):
        raise UsageError(f"trace wires {trace} invalid for {total} qubits")
    if total < n + a:
        raise UsageError(f"circuit has {total} qubits, needs {n} input + {a} ancilla")
    keep = [w for w in range(total) if w not in trace]
    if len(keep) != n:
        raise UsageError(f"{len(keep)} wires remain after tracing, target needs {n}")
    anc_wires = tuple(range(n, n + a))

    if "circuit" in spec:
        def induced(e):
            anc = [(anc_wires, e)] if a else []
            return circuit_channel(circuit, list(range(n)), anc, keep)
        ch = _mixture(induced, tau)
        joint = circuit_channel(circuit, list(range(n + a)), [], keep)
    else:
        dims = [2] * total
        ch = channel_from_realization(u, tau, traced=trace, dims=dims)
        joint = channel_from_realization(u, np.ones(1), traced=trace, dims=dims)
    return ch, joint, tau


def cmd_distance(args):
    m = re.fullmatch(r"hadamard:(\d+)", args.target)
    if not m or int(m.group(1)) < 1:
        raise UsageError(f"target must be hadamard:<n>, got {args.target!r}")
    n = int(m.group(1))
    try:
        ch, joint, tau = load_channel_spec(args.spec, n)
    except CoherenceError as e:
        raise UsageError(f"channel spec error: {e}") from None
    res = induced_distance_lower(ch, hadamard_n(n), budget=args.budget, seed=args.seed)
    tol = args.tol if args.tol is not None else DEFAULT.superop
    report = {"spec": str(args.spec), "target": args.target, "seed": args.seed,
              "induced_distance_lower": res.value,
              "witness": [[float(z.real), float(z.imag)] for z in res.witness],
              "certified_bound": None}
    print(f"induced distance lower bound {res.value:.9f}")
    print("witness " + " ".join(f"{z.real:+.4f}{z.imag:+.4f}i" for z in res.witness))
    if is_dephasing_covariant(joint, tol):
        nb = certified_nogo_bound(joint, n, tau, tol)
        report["certified_bound"] = nb.bound
        report["certified_witness"] = "".join(map(str, nb.witness_basis_vector))
        print(f"certified bound {nb.bound:.9f} at H^{n}|{report['certified_witness']}>")
    _write(report, args.out, args.format)
    return EXIT_PASS


# ---------------------------------------------------------------- entry point

def build_parser():
    p = argparse.ArgumentParser(prog="coherence-nogo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="report file (reports are never printed)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--tol", type=float, help="override the relevant tolerance")
        sp.add_argument("--seed", type=int, default=0)

    a = sub.add_parser("analyze", help="classify gates and count Hadamards")
    a.add_argument("circuit")
    common(a)
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify-gadget", help="check a gadget against its target gate")
    v.add_argument("name")
    v.add_argument("--ancilla", help="replace the ancilla state, e.g. 0 or +,T")
    v.add_argument("--ancilla-wires", type=int, nargs="+")
    common(v)
    v.set_defaults(func=cmd_verify_gadget)

    g = sub.add_parser("nogo", help="run a randomised no-go campaign")
    g.add_argument("lemma", choices=harness.LEMMAS)
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--ancilla-qubits", type=int)
    g.add_argument("--trials", type=int, default=100)
    common(g)
    g.set_defaults(func=cmd_nogo)

    d = sub.add_parser("distance", help="induced distance of a channel to n Hadamards")
    d.add_argument("spec", help="JSON channel spec")
    d.add_argument("--target", default="hadamard:1")
    d.add_argument("--budget", type=int, default=20000)
    common(d)
    d.set_defaults(func=cmd_distance)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
