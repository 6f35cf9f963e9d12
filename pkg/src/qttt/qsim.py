"""Dense statevector simulator with symbolic angles and parameter-shift gradients.

Supports up to 18 qubits with the gate set H, RX, RY, RZ, P(phase) and CX.
Rotation/phase angles are symbolic :class:`AngleExpr` trees over named circuit
inputs ``x{i}`` and trainable parameters ``theta{j}``; the closed set of
expression forms (constant, scaled symbol, scaled (pi-x_i)(pi-x_j) product)
keeps partial derivatives exact, which the shift rule needs.

Amplitude indexing convention: qubit 0 is the most significant bit of the
basis-state index, i.e. ``state.reshape([2]*n)`` puts qubit k on axis k.
Global phase is never constrained.

Execution is batched internally: a circuit is compiled once to a gate program
and then run over a whole matrix of per-gate angles at once, which is what
makes parameter-shift training affordable on a single core.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 18

# Chunk batched execution so a work buffer stays below ~64 MB of complex128.
_MAX_BATCH_AMPS = 1 << 22

_SQRT1_2 = 1.0 / math.sqrt(2.0)


class QsimError(Exception):
    pass


class QubitOutOfRange(QsimError):
    pass


class UnboundSymbol(QsimError):
    pass


class UnsupportedGateForShift(QsimError):
    pass


# ---------------------------------------------------------------------------
# Symbolic angles


@dataclass(frozen=True)
class AngleExpr:
    """Angle expression over circuit inputs ("x", i) and parameters ("p", j).

    kind:
      "const"  -> coeff
      "scaled" -> coeff * value(sym)
      "zzprod" -> coeff * (pi - value(sym_a)) * (pi - value(sym_b))
    """

    kind: str
    coeff: float
    syms: tuple = ()

    @staticmethod
    def const(value: float) -> "AngleExpr":
        return AngleExpr("const", float(value))

    @staticmethod
    def input(i: int, scale: float = 1.0) -> "AngleExpr":
        return AngleExpr("scaled", float(scale), (("x", i),))

    @staticmethod
    def param(j: int, scale: float = 1.0) -> "AngleExpr":
        return AngleExpr("scaled", float(scale), (("p", j),))

    @staticmethod
    def zz(i: int, j: int, scale: float = 2.0) -> "AngleExpr":
        return AngleExpr("zzprod", float(scale), (("x", i), ("x", j)))

    def _value(self, sym, inputs, params) -> float:
        kind, idx = sym
        vec = inputs if kind == "x" else params
        return float(vec[idx])

    def evaluate(self, inputs, params) -> float:
        if self.kind == "const":
            return self.coeff
        if self.kind == "scaled":
            return self.coeff * self._value(self.syms[0], inputs, params)
        a = math.pi - self._value(self.syms[0], inputs, params)
        b = math.pi - self._value(self.syms[1], inputs, params)
        return self.coeff * a * b

    def partial(self, sym, inputs, params) -> float:
        """d(angle)/d(sym) at the given binding."""
        if self.kind == "const" or sym not in self.syms:
            return 0.0
        if self.kind == "scaled":
            return self.coeff
        other = self.syms[1] if sym == self.syms[0] else self.syms[0]
        d = -self.coeff * (math.pi - self._value(other, inputs, params))
        if self.syms[0] == self.syms[1]:  # degenerate (pi-x)^2 form
            d *= 2.0
        return d

    def __str__(self) -> str:
        def name(sym):
            return f"x{sym[1]}" if sym[0] == "x" else f"theta{sym[1]}"

        if self.kind == "const":
            return f"{self.coeff:g}"
        if self.kind == "scaled":
            s = name(self.syms[0])
            return s if self.coeff == 1.0 else f"{self.coeff:g}*{s}"
        return f"{self.coeff:g}*(pi-{name(self.syms[0])})*(pi-{name(self.syms[1])})"


# ---------------------------------------------------------------------------
# Gates and circuits

ANGLED_KINDS = ("rx", "ry", "rz", "p")
FIXED_KINDS = ("h", "cx")


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple
    angle: AngleExpr | None = None

    def __str__(self) -> str:
        q = " ".join(str(i) for i in self.qubits)
        return f"{self.kind} {q}" + ("" if self.angle is None else f" {self.angle}")


@dataclass
class QuantumCircuit:
    """Ordered gate list over n qubits with named inputs and parameters."""

    n: int
    gates: list = field(default_factory=list)
    n_inputs: int = 0
    n_params: int = 0

    def __post_init__(self):
        if not (1 <= self.n <= MAX_QUBITS):
            raise QubitOutOfRange(f"qubit count {self.n} outside 1..{MAX_QUBITS}")

    @property
    def input_names(self) -> list:
        return [f"x{i}" for i in range(self.n_inputs)]

    @property
    def param_names(self) -> list:
        return [f"theta{j}" for j in range(self.n_params)]

    def _check_qubits(self, qubits):
        for q in qubits:
            if not (0 <= q < self.n):
                raise QubitOutOfRange(f"qubit {q} outside 0..{self.n - 1}")

    def add(self, kind: str, qubits, angle: AngleExpr | None = None) -> "QuantumCircuit":
        qubits = tuple(qubits) if isinstance(qubits, (tuple, list)) else (qubits,)
        self._check_qubits(qubits)
        if kind == "cx" and qubits[0] == qubits[1]:
            raise QubitOutOfRange("cx control equals target")
        if kind in ANGLED_KINDS and angle is None:
            raise UnboundSymbol(f"{kind} gate needs an angle")
        if kind in FIXED_KINDS and angle is not None:
            raise UnboundSymbol(f"{kind} gate takes no angle")
        for sym in angle.syms if angle is not None else ():
            hi = self.n_inputs if sym[0] == "x" else self.n_params
            if not (0 <= sym[1] < hi):
                raise UnboundSymbol(f"symbol {sym} not declared by circuit")
        self.gates.append(Gate(kind, qubits, angle))
        return self

    def h(self, q):
        return self.add("h", q)

    def cx(self, control, target):
        return self.add("cx", (control, target))

    def rx(self, q, angle):
        return self.add("rx", q, angle)

    def ry(self, q, angle):
        return self.add("ry", q, angle)

    def rz(self, q, angle):
        return self.add("rz", q, angle)

    def p(self, q, angle):
        return self.add("p", q, angle)

    def symbol_index(self, name: str):
        """Resolve "x3"/"theta5" to the internal ("x"|"p", index) pair."""
        if name.startswith("x"):
            i = int(name[1:])
            if i < self.n_inputs:
                return ("x", i)
        if name.startswith("theta"):
            j = int(name[5:])
            if j < self.n_params:
                return ("p", j)
        raise UnboundSymbol(f"unknown symbol {name!r}")

    def occurrences(self, sym) -> list:
        """Gate indices whose angle references the symbol."""
        return [g for g, gate in enumerate(self.gates)
                if gate.angle is not None and sym in gate.angle.syms]

    def dump(self) -> str:
        """Audit format: one "gate target(s) angle-expr" line per gate."""
        return "\n".join(str(g) for g in self.gates)


def compose(first: QuantumCircuit, second: QuantumCircuit) -> QuantumCircuit:
    """Concatenate two circuits on the same register.

    Input symbols come from either part (indices must already be disjoint or
    identical in meaning); parameter symbols likewise. The standard use is
    embedding (inputs only) followed by ansatz (parameters only).
    """
    if first.n != second.n:
        raise QubitOutOfRange(f"width mismatch {first.n} != {second.n}")
    out = QuantumCircuit(
        n=first.n,
        n_inputs=max(first.n_inputs, second.n_inputs),
        n_params=max(first.n_params, second.n_params),
    )
    out.gates = list(first.gates) + list(second.gates)
    return out


# ---------------------------------------------------------------------------
# Statevector


@dataclass
class Statevector:
    amps: np.ndarray
    n: int

    @staticmethod
    def zero(n: int) -> "Statevector":
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[0] = 1.0
        return Statevector(amps, n)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


# ---------------------------------------------------------------------------
# Batched execution core

def _nominal_angles(circuit: QuantumCircuit, inputs, params) -> np.ndarray:
    """Per-gate concrete angles (NaN for angle-free gates)."""
    angles = np.full(len(circuit.gates), np.nan)
    for g, gate in enumerate(circuit.gates):
        if gate.angle is not None:
            angles[g] = gate.angle.evaluate(inputs, params)
    return angles


def _check_bindings(circuit: QuantumCircuit, inputs, params):
    inputs = np.asarray(inputs, dtype=np.float64)
    params = np.asarray(params, dtype=np.float64)
    if inputs.shape != (circuit.n_inputs,):
        raise UnboundSymbol(
            f"expected {circuit.n_inputs} inputs, got shape {inputs.shape}")
    if params.shape != (circuit.n_params,):
        raise UnboundSymbol(
            f"expected {circuit.n_params} parameters, got shape {params.shape}")
    return inputs, params


def _execute_angle_matrix(circuit: QuantumCircuit, angles: np.ndarray) -> np.ndarray:
    """Run the circuit for every row of ``angles``; returns (B, 2**n) states."""
    total_b = angles.shape[0]
    dim = 1 << circuit.n
    chunk = max(1, _MAX_BATCH_AMPS // dim)
    if total_b > chunk:
        parts = [_execute_angle_matrix(circuit, angles[i:i + chunk])
                 for i in range(0, total_b, chunk)]
        return np.concatenate(parts, axis=0)

    b = total_b
    state = np.zeros((b, dim), dtype=np.complex128)
    state[:, 0] = 1.0
    st = state.reshape([b] + [2] * circuit.n)
    bshape = (b,) + (1,) * (circuit.n - 1)

    def slc(assign):
        idx = [slice(None)] * (circuit.n + 1)
        for axis, v in assign.items():
            idx[axis + 1] = v
        return tuple(idx)

    for g, gate in enumerate(circuit.gates):
        kind = gate.kind
        if kind == "cx":
            c, t = gate.qubits
            i10, i11 = slc({c: 1, t: 0}), slc({c: 1, t: 1})
            tmp = st[i10].copy()
            st[i10] = st[i11]
            st[i11] = tmp
            continue
        q = gate.qubits[0]
        i0, i1 = slc({q: 0}), slc({q: 1})
        if kind == "h":
            a = st[i0].copy()
            bb = st[i1]
            st[i0] = (a + bb) * _SQRT1_2
            st[i1] = (a - bb) * _SQRT1_2
            continue
        theta = angles[:, g]
        if kind == "p":
            st[i1] = st[i1] * np.exp(1j * theta).reshape(bshape)
            continue
        if kind == "rz":
            ph = np.exp(-0.5j * theta).reshape(bshape)
            st[i0] = st[i0] * ph
            st[i1] = st[i1] * np.conj(ph)
            continue
        half = 0.5 * theta
        cos = np.cos(half).reshape(bshape)
        sin = np.sin(half).reshape(bshape)
        a = st[i0].copy()
        bb = st[i1]
        if kind == "rx":
            st[i0] = cos * a - 1j * sin * bb
            st[i1] = -1j * sin * a + cos * bb
        elif kind == "ry":
            st[i0] = cos * a - sin * bb
            st[i1] = sin * a + cos * bb
        else:
            raise UnsupportedGateForShift(f"unknown gate kind {kind!r}")
    return state


def run(circuit: QuantumCircuit, inputs=(), params=()) -> Statevector:
    """Apply all gates in order to |0...0> with the given symbol bindings."""
    inputs, params = _check_bindings(circuit, inputs, params)
    angles = _nominal_angles(circuit, inputs, params)
    state = _execute_angle_matrix(circuit, angles[None, :])[0]
    return Statevector(state, circuit.n)


# ---------------------------------------------------------------------------
# Readouts


def expect_z(state: Statevector, qubit: int) -> float:
    """<Z> on one qubit: sum of |amp|^2 * (+1 if bit 0 else -1)."""
    if not (0 <= qubit < state.n):
        raise QubitOutOfRange(f"qubit {qubit} outside 0..{state.n - 1}")
    return float(_expect_z_batch(state.amps[None, :], state.n, qubit)[0])


def _expect_z_batch(states: np.ndarray, n: int, qubit: int) -> np.ndarray:
    probs = (states.real ** 2 + states.imag ** 2).reshape([states.shape[0]] + [2] * n)
    axes = tuple(a + 1 for a in range(n) if a != qubit)
    marg = probs.sum(axis=axes)
    return marg[:, 0] - marg[:, 1]


def _marginal_probs_batch(states: np.ndarray, n: int, qubits) -> np.ndarray:
    """(B, 2**m) marginal over ``qubits``; listed order sets bit significance,
    first qubit most significant."""
    probs = (states.real ** 2 + states.imag ** 2).reshape([states.shape[0]] + [2] * n)
    keep = tuple(qubits)
    drop = tuple(a + 1 for a in range(n) if a not in keep)
    marg = probs.sum(axis=drop) if drop else probs
    remaining = sorted(keep)
    perm = [0] + [remaining.index(q) + 1 for q in keep]
    return marg.transpose(perm).reshape(states.shape[0], -1)


def marginal_probs(state: Statevector, qubits) -> np.ndarray:
    qubits = list(qubits)
    for q in qubits:
        if not (0 <= q < state.n):
            raise QubitOutOfRange(f"qubit {q} outside 0..{state.n - 1}")
    if len(set(qubits)) != len(qubits):
        raise QubitOutOfRange("duplicate qubit in measurement list")
    return _marginal_probs_batch(state.amps[None, :], state.n, qubits)[0]


def sample_quasi_probs(state: Statevector, qubits, shots: int = 1024,
                       rng=None, exact: bool = False) -> np.ndarray:
    """Frequency distribution over the measured subset, summing to 1.

    ``exact=True`` returns the exact marginal (the infinite-shot limit).
    Sampling is deterministic for a given ``rng`` seed.
    """
    probs = marginal_probs(state, qubits)
    if exact:
        return probs
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    counts = rng.multinomial(shots, probs / probs.sum())
    return counts / float(shots)


def sample_bits(state: Statevector, qubits, shots: int, rng) -> np.ndarray:
    """(shots, m) matrix of sampled bit outcomes for the listed qubits."""
    qubits = list(qubits)
    probs = marginal_probs(state, qubits)
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    outcomes = rng.choice(len(probs), size=shots, p=probs / probs.sum())
    m = len(qubits)
    shifts = np.arange(m - 1, -1, -1)
    return (outcomes[:, None] >> shifts[None, :]) & 1


# Readout descriptors shared with the engine layer.


@dataclass(frozen=True)
class ZReadout:
    """Per-qubit <Z> vector over the listed qubits."""

    qubits: tuple

    @property
    def size(self) -> int:
        return len(self.qubits)

    def apply_batch(self, states: np.ndarray, n: int) -> np.ndarray:
        cols = [_expect_z_batch(states, n, q) for q in self.qubits]
        return np.stack(cols, axis=1)

    def weighted_batch(self, states: np.ndarray, n: int, weights: np.ndarray) -> np.ndarray:
        out = np.zeros(states.shape[0])
        for w, q in zip(weights, self.qubits):
            if w != 0.0:
                out += w * _expect_z_batch(states, n, q)
        return out


@dataclass(frozen=True)
class ProbReadout:
    """Quasi-probability vector over the listed qubits (2**m entries)."""

    qubits: tuple

    @property
    def size(self) -> int:
        return 1 << len(self.qubits)

    def apply_batch(self, states: np.ndarray, n: int) -> np.ndarray:
        return _marginal_probs_batch(states, n, self.qubits)

    def weighted_batch(self, states: np.ndarray, n: int, weights: np.ndarray) -> np.ndarray:
        return self.apply_batch(states, n) @ weights


# ---------------------------------------------------------------------------
# Parameter-shift differentiation


def _shift_plan(circuit: QuantumCircuit, syms) -> tuple:
    """Rows of (gate_index, +-pi/2) covering every occurrence of every symbol."""
    rows = []
    spans = []  # per symbol: list of (gate_idx, row_plus, row_minus)
    for sym in syms:
        entries = []
        for g in circuit.occurrences(sym):
            entries.append((g, len(rows), len(rows) + 1))
            rows.append((g, +math.pi / 2))
            rows.append((g, -math.pi / 2))
        spans.append(entries)
    return rows, spans


def _shifted_states(circuit: QuantumCircuit, angles: np.ndarray, rows) -> np.ndarray:
    mat = np.tile(angles, (len(rows), 1))
    for r, (g, delta) in enumerate(rows):
        mat[r, g] += delta
    return _execute_angle_matrix(circuit, mat)


def shift_vjp(circuit: QuantumCircuit, inputs, params, readout, weights, syms) -> np.ndarray:
    """d(weights . readout)/d(sym) for each symbol, by the shift rule.

    Every occurrence of a symbol contributes
    (d angle/d sym) * (f(angle + pi/2) - f(angle - pi/2)) / 2,
    which is the chain rule over multi-occurrence symbols such as
    ZZ-feature-map inputs. All shifted circuits run as one batch.
    """
    inputs, params = _check_bindings(circuit, inputs, params)
    angles = _nominal_angles(circuit, inputs, params)
    rows, spans = _shift_plan(circuit, syms)
    grads = np.zeros(len(syms))
    if not rows:
        return grads
    states = _shifted_states(circuit, angles, rows)
    f = readout.weighted_batch(states, circuit.n, np.asarray(weights, dtype=np.float64))
    for k, (sym, entries) in enumerate(zip(syms, spans)):
        total = 0.0
        for g, rp, rm in entries:
            scale = circuit.gates[g].angle.partial(sym, inputs, params)
            total += scale * 0.5 * (f[rp] - f[rm])
        grads[k] = total
    return grads


def shift_jacobian(circuit: QuantumCircuit, inputs, params, readout, syms) -> np.ndarray:
    """(readout.size, len(syms)) Jacobian via the shift rule, one batch."""
    inputs, params = _check_bindings(circuit, inputs, params)
    angles = _nominal_angles(circuit, inputs, params)
    rows, spans = _shift_plan(circuit, syms)
    jac = np.zeros((readout.size, len(syms)))
    if not rows:
        return jac
    states = _shifted_states(circuit, angles, rows)
    outs = readout.apply_batch(states, circuit.n)
    for k, (sym, entries) in enumerate(zip(syms, spans)):
        for g, rp, rm in entries:
            scale = circuit.gates[g].angle.partial(sym, inputs, params)
            jac[:, k] += scale * 0.5 * (outs[rp] - outs[rm])
    return jac


def param_shift_grad(circuit: QuantumCircuit, inputs, params, observable, wrt: str) -> float:
    """Shift-rule gradient of one observable with respect to one named symbol.

    ``observable`` is ("z", qubit) for a Z expectation or
    ("prob", qubits, outcome_index) for one exact quasi-probability component.
    Symbols absent from the circuit have gradient 0.
    """
    for gate in circuit.gates:
        if gate.kind not in ANGLED_KINDS and gate.kind not in FIXED_KINDS:
            raise UnsupportedGateForShift(f"gate {gate.kind!r} has no shift rule")
    sym = circuit.symbol_index(wrt)
    if observable[0] == "z":
        readout = ZReadout((observable[1],))
        weights = np.ones(1)
    elif observable[0] == "prob":
        readout = ProbReadout(tuple(observable[1]))
        weights = np.zeros(readout.size)
        weights[observable[2]] = 1.0
    else:
        raise ValueError(f"unknown observable {observable!r}")
    return float(shift_vjp(circuit, inputs, params, readout, weights, [sym])[0])
