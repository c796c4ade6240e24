"""Line-oriented circuit text format.

::

    qubits <n>
    cbits <m>                                         (optional)
    gate <NAME> <q...>
    gate <NAME> <q...> if <c>==<0|1>
    cgate <NAME> <targets...> ctrl <q...> when <bits>[,<bits>...]
    measure <q> -> <c>

``#`` starts a comment. NAME is a standard gate or a literal ``U4:<16 entries>``
(``U2:<4 entries>`` for one qubit), entries row-major Python complex literals.
"""
import re

import numpy as np

from ..errors import CircuitSyntaxError, ShapeError
from ..gates import GATES
from ..tensor import is_unitary
from .ir import Circuit, ClassicallyControlledGate, ControlledGate, Gate, Measure

_TOKEN = re.compile(r"\S+")
_LITERAL_SIZES = {"U2": 2, "U4": 4}


def _tokens(line):
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


def _int(tok, lineno, what):
    text, col = tok
    if not re.fullmatch(r"\d+", text):
        raise CircuitSyntaxError(f"expected {what}, got {text!r}", lineno, col)
    return int(text)


def _gate_matrix(tok, lineno):
    text, col = tok
    if text in GATES:
        return text, GATES[text]
    kind, sep, body = text.partition(":")
    if sep and kind in _LITERAL_SIZES:
        d = _LITERAL_SIZES[kind]
        try:
            vals = [complex(v.replace("i", "j")) for v in body.split(",")]
        except ValueError:
            raise CircuitSyntaxError(f"bad complex entry in {kind} literal", lineno, col) from None
        if len(vals) != d * d:
            raise CircuitSyntaxError(f"{kind} literal needs {d * d} entries, got {len(vals)}",
                                     lineno, col)
        m = np.array(vals, dtype=np.complex128).reshape(d, d)
        if not is_unitary(m, 1e-8):
            raise CircuitSyntaxError(f"{kind} literal is not unitary", lineno, col)
        return "U", m
    raise CircuitSyntaxError(f"unknown gate {text!r}", lineno, col)


def _wires(toks, lineno, n):
    out = []
    for tok in toks:
        q = _int(tok, lineno, "a qubit index")
        if q >= n:
            raise CircuitSyntaxError(f"wire {q} out of range for {n} qubits", lineno, tok[1])
        out.append(q)
    return out


def _make_gate(name, m, targets, lineno, col):
    try:
        return Gate(name, m, tuple(targets))
    except ShapeError as e:
        raise CircuitSyntaxError(str(e), lineno, col) from None


def parse_circuit(text):
    n = m = None
    ops = []
    written = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        head, col = toks[0]
        if head == "qubits":
            if n is not None or ops:
                raise CircuitSyntaxError("'qubits' must appear once, before any op", lineno, col)
            if len(toks) != 2:
                raise CircuitSyntaxError("usage: qubits <n>", lineno, col)
            n = _int(toks[1], lineno, "a qubit count")
            continue
        if n is None:
            raise CircuitSyntaxError("missing 'qubits <n>' header", lineno, col)
        if head == "cbits":
            if m is not None or ops or len(toks) != 2:
                raise CircuitSyntaxError("'cbits <m>' must follow the qubits header", lineno, col)
            m = _int(toks[1], lineno, "a bit count")
        elif head == "gate":
            if len(toks) < 3:
                raise CircuitSyntaxError("usage: gate <NAME> <q...>", lineno, col)
            name, mat = _gate_matrix(toks[1], lineno)
            words = [t for t, _ in toks]
            cond = None
            if "if" in words:
                k = words.index("if")
                if k != len(toks) - 2:
                    raise CircuitSyntaxError("usage: ... if <c>==<0|1>", lineno, toks[k][1])
                ctext, ccol = toks[k + 1]
                mm = re.fullmatch(r"(\d+)==([01])", ctext)
                if not mm:
                    raise CircuitSyntaxError(f"bad condition {ctext!r}", lineno, ccol)
                bit, val = int(mm.group(1)), int(mm.group(2))
                if bit >= (m or 0):
                    raise CircuitSyntaxError(f"classical bit {bit} out of range", lineno, ccol)
                if bit not in written:
                    raise CircuitSyntaxError(f"condition on unwritten bit {bit}", lineno, ccol)
                cond = (bit, val)
                toks = toks[:k]
            g = _make_gate(name, mat, _wires(toks[2:], lineno, n), lineno, col)
            ops.append(g if cond is None else ClassicallyControlledGate(g, *cond))
        elif head == "cgate":
            words = [t for t, _ in toks]
            if "ctrl" not in words or "when" not in words or len(toks) < 2:
                raise CircuitSyntaxError(
                    "usage: cgate <NAME> <targets...> ctrl <q...> when <bits>", lineno, col)
            kc, kw = words.index("ctrl"), words.index("when")
            if not 2 < kc < kw - 1 or kw != len(toks) - 2:
                raise CircuitSyntaxError("malformed cgate", lineno, col)
            name, mat = _gate_matrix(toks[1], lineno)
            targets = _wires(toks[2:kc], lineno, n)
            controls = _wires(toks[kc + 1:kw], lineno, n)
            ttext, tcol = toks[kw + 1]
            trig = ttext.split(",")
            if any(not re.fullmatch(r"[01]+", s) or len(s) != len(controls) for s in trig):
                raise CircuitSyntaxError(f"bad trigger set {ttext!r}", lineno, tcol)
            g = _make_gate(name, mat, targets, lineno, col)
            try:
                ops.append(ControlledGate(g, tuple(controls), frozenset(trig)))
            except ShapeError as e:
                raise CircuitSyntaxError(str(e), lineno, col) from None
        elif head == "measure":
            if len(toks) != 4 or toks[2][0] != "->":
                raise CircuitSyntaxError("usage: measure <q> -> <c>", lineno, col)
            q = _wires([toks[1]], lineno, n)[0]
            c = _int(toks[3], lineno, "a classical bit")
            if c >= (m or 0):
                raise CircuitSyntaxError(f"classical bit {c} out of range", lineno, toks[3][1])
            written.add(c)
            ops.append(Measure(q, c))
        else:
            raise CircuitSyntaxError(f"unknown statement {head!r}", lineno, col)
    if n is None:
        raise CircuitSyntaxError("missing 'qubits <n>' header", 1, 1)
    return Circuit(n, m or 0, tuple(ops))


def _gate_text(g):
    if g.name in GATES and np.allclose(GATES[g.name], g.matrix):
        return g.name
    d = g.matrix.shape[0]
    kind = {2: "U2", 4: "U4"}.get(d)
    if kind is None:
        raise ValueError(f"cannot serialise a custom {d}x{d} gate")
    return kind + ":" + ",".join(repr(complex(v)).strip("()") for v in g.matrix.reshape(-1))


def format_circuit(circuit):
    """Inverse of :func:`parse_circuit`."""
    lines = [f"qubits {circuit.n_qubits}"]
    if circuit.n_bits:
        lines.append(f"cbits {circuit.n_bits}")
    for op in circuit.ops:
        if isinstance(op, Measure):
            lines.append(f"measure {op.qubit} -> {op.bit}")
            continue
        cond = ""
        if isinstance(op, ClassicallyControlledGate):
            cond = f" if {op.bit}=={op.value}"
            op = op.gate
            if isinstance(op, ControlledGate):
                raise ValueError("classically controlled cgate has no text form")
        if isinstance(op, ControlledGate):
            trig = ",".join("".join(map(str, t)) for t in sorted(op.trigger))
            lines.append(
                f"cgate {_gate_text(op.gate)} {' '.join(map(str, op.gate.targets))} "
                f"ctrl {' '.join(map(str, op.controls))} when {trig}"
            )
        else:
            lines.append(f"gate {_gate_text(op)} {' '.join(map(str, op.targets))}{cond}")
    return "\n".join(lines) + "\n"
