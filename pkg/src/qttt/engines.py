"""Engine assembly: the full roster of classical, quantum-only and hybrid
board evaluators behind one interface.

An engine maps a board to 9 action values. The roster (54 configurations):

  ccnn-stronger / ccnn-weaker          2   convolutional value nets
  qnn-9-<emb>-<ansatz>                 8   9 qubits, <Z> on every qubit
  qcnn-18-<emb>                        4   18 qubits, input duplicated,
                                           <Z> on the 9 pooled qubits
  hnn-est-<n>-<emb>-<ansatz>          16   dense 9->n, circuit, <Z> per
                                           qubit, dense n->9
  hnn-smp-<n>-<emb>-<ansatz>          16   as above but reads the 2^n
                                           quasi-probability vector
  hnn-est-<n>-<emb>-qcnn               8   pooled readout, dense n/2->9

with <emb> one of zfeaturemap/zzfeaturemap/hee/tpe, <ansatz> one of
realamplitudes/efficientsu2 and n in {8, 16}. Sampler readout never pairs
with the qcnn ansatz.

Evaluation is exact-expectation by default (deterministic); pass ``shots``
to estimate readouts from sampled measurements instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import nn
from .circuits import build_model_circuit, qcnn_surviving_qubits
from .game import Board, encode, legal_moves
from .qsim import ProbReadout, ZReadout, run, shift_vjp

CHECKPOINT_SCHEMA = 1

HNN_WIDTHS = (8, 16)
QNN_ANSATZE = ("realamplitudes", "efficientsu2")
_EMBS = ("zfeaturemap", "zzfeaturemap", "hee", "tpe")


class InvalidSpec(Exception):
    pass


class NoLegalMoves(Exception):
    pass


class CorruptCheckpoint(Exception):
    pass


class SpecMismatch(Exception):
    pass


# ---------------------------------------------------------------------------
# Spec keys


@dataclass(frozen=True)
class EngineSpec:
    """Parsed engine key. ``family`` is ccnn/qnn/qcnn/hnn; ``method`` is
    est/smp for hybrids, the net size for classical."""

    key: str
    family: str
    method: str | None = None
    n: int | None = None
    embedding: str | None = None
    ansatz: str | None = None


def parse_key(key: str) -> EngineSpec:
    parts = key.split("-")
    try:
        family = parts[0]
        if family == "ccnn" and len(parts) == 2 and parts[1] in ("stronger", "weaker"):
            return EngineSpec(key, "ccnn", method=parts[1])
        if family == "qnn" and len(parts) == 4:
            n, emb, ans = int(parts[1]), parts[2], parts[3]
            if n == 9 and emb in _EMBS and ans in QNN_ANSATZE:
                return EngineSpec(key, "qnn", n=9, embedding=emb, ansatz=ans)
        if family == "qcnn" and len(parts) == 3:
            n, emb = int(parts[1]), parts[2]
            if n == 18 and emb in _EMBS:
                return EngineSpec(key, "qcnn", n=18, embedding=emb, ansatz="qcnn")
        if family == "hnn" and len(parts) == 5:
            method, n, emb, ans = parts[1], int(parts[2]), parts[3], parts[4]
            if (method in ("est", "smp") and n in HNN_WIDTHS and emb in _EMBS
                    and ans in QNN_ANSATZE + ("qcnn",)):
                if ans == "qcnn" and method != "est":
                    raise InvalidSpec(
                        f"{key!r}: qcnn hybrids read expectations only (est)")
                return EngineSpec(key, "hnn", method=method, n=n,
                                  embedding=emb, ansatz=ans)
    except ValueError:
        pass
    raise InvalidSpec(f"unknown engine key {key!r}")


def all_spec_keys() -> list:
    """The 54 engine keys in census order (2 + 8 + 4 + 16 + 16 + 8)."""
    keys = ["ccnn-stronger", "ccnn-weaker"]
    for emb in _EMBS:
        for ans in QNN_ANSATZE:
            keys.append(f"qnn-9-{emb}-{ans}")
    for emb in _EMBS:
        keys.append(f"qcnn-18-{emb}")
    for method in ("est", "smp"):
        for n in HNN_WIDTHS:
            for emb in _EMBS:
                for ans in QNN_ANSATZE:
                    keys.append(f"hnn-{method}-{n}-{emb}-{ans}")
    for n in HNN_WIDTHS:
        for emb in _EMBS:
            keys.append(f"hnn-est-{n}-{emb}-qcnn")
    return keys


# ---------------------------------------------------------------------------
# Engine


class Engine:
    """Board evaluator. Classical engines use ``net``; the others hold an
    optional pre-net, a circuit with parameters, a readout and an optional
    post-net. Weight arrays are shared with the optimizer and mutated in
    place during training."""

    def __init__(self, spec: EngineSpec, *, net=None, pre_net=None, circuit=None,
                 theta=None, readout=None, post_net=None, duplicate_input=False):
        self.spec = spec
        self.net = net
        self.pre_net = pre_net
        self.circuit = circuit
        self.theta = theta
        self.readout = readout
        self.post_net = post_net
        self.duplicate_input = duplicate_input
        self.n_data_inputs = circuit.n_inputs if circuit is not None else 0

    # -- weights ----------------------------------------------------------

    def trainable(self) -> list:
        """All weight arrays, in checkpoint order."""
        if self.net is not None:
            return nn.weights(self.net)
        arrays = []
        if self.pre_net is not None:
            arrays.extend(nn.weights(self.pre_net))
        arrays.append(self.theta)
        if self.post_net is not None:
            arrays.extend(nn.weights(self.post_net))
        return arrays

    def classical_param_count(self) -> int:
        return sum(w.size for w in self.trainable() if w is not self.theta)

    def quantum_param_count(self) -> int:
        return 0 if self.theta is None else self.theta.size

    # -- forward ----------------------------------------------------------

    def _classical_input(self, board: Board) -> np.ndarray:
        return encode(board).reshape(1, 3, 3)

    def _pre_output(self, board: Board):
        """(circuit-facing features, pre-net caches or None)."""
        x = encode(board)
        if self.pre_net is not None:
            return nn.forward(self.pre_net, x)
        if self.duplicate_input:
            return np.concatenate([x, x]), None
        return x, None

    def _assemble_inputs(self, features: np.ndarray) -> np.ndarray:
        """Circuit input binding. Channel wrappers append noise angles here."""
        return features

    def _read(self, state_amps: np.ndarray, shots, rng) -> np.ndarray:
        vec = self.readout.apply_batch(state_amps[None, :], self.circuit.n)[0]
        if shots is None:
            return vec
        rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
        if isinstance(self.readout, ProbReadout):
            counts = rng.multinomial(shots, vec / vec.sum())
            return counts / float(shots)
        p0 = np.clip((vec + 1.0) / 2.0, 0.0, 1.0)
        return 2.0 * rng.binomial(shots, p0) / shots - 1.0

    def evaluate(self, board: Board, shots: int | None = None, rng=None) -> np.ndarray:
        """Nine action values. Deterministic when ``shots`` is None."""
        if self.net is not None:
            out, _ = nn.forward(self.net, self._classical_input(board))
            return out
        features, _ = self._pre_output(board)
        xin = self._assemble_inputs(features)
        state = run(self.circuit, xin, self.theta)
        vec = self._read(state.amps, shots, rng)
        if self.post_net is not None:
            vec, _ = nn.forward(self.post_net, vec)
        return vec

    # -- backward ---------------------------------------------------------

    def evaluate_with_grad(self, board: Board, action: int):
        """Q(board, action) and its gradient w.r.t. every trainable array.

        Exact-expectation mode only. Gradients arrive in trainable() order;
        quantum gradients use the shift rule, classical ones backprop, and
        for hybrids the shift-rule input gradients chain into the pre-net.
        """
        one_hot = np.zeros(9)
        one_hot[action] = 1.0
        if self.net is not None:
            out, caches = nn.forward(self.net, self._classical_input(board))
            grads, _ = nn.backward(self.net, caches, one_hot)
            return float(out[action]), nn.flat_grads(grads)

        features, pre_caches = self._pre_output(board)
        xin = self._assemble_inputs(features)
        state = run(self.circuit, xin, self.theta)
        vec = self.readout.apply_batch(state.amps[None, :], self.circuit.n)[0]
        if self.post_net is not None:
            out, post_caches = nn.forward(self.post_net, vec)
            post_grads, gvec = nn.backward(self.post_net, post_caches, one_hot)
        else:
            out, post_grads, gvec = vec, [], one_hot

        syms = [("p", j) for j in range(self.circuit.n_params)]
        if self.pre_net is not None:
            syms += [("x", i) for i in range(self.n_data_inputs)]
        g = shift_vjp(self.circuit, xin, self.theta, self.readout, gvec, syms)
        theta_grad = g[:self.circuit.n_params]

        grads = []
        if self.pre_net is not None:
            gx = g[self.circuit.n_params:]
            pre_grads, _ = nn.backward(self.pre_net, pre_caches, gx)
            grads.extend(nn.flat_grads(pre_grads))
        grads.append(theta_grad)
        grads.extend(nn.flat_grads(post_grads))
        return float(out[action]), grads


def select_move(engine: Engine, board: Board, epsilon: float, rng=None,
                shots: int | None = None) -> int:
    """Epsilon-greedy move: uniform legal with probability epsilon, else the
    legal cell with the highest value (ties to the lowest index)."""
    legal = legal_moves(board)
    if not legal:
        raise NoLegalMoves(f"no legal moves in {board.to_string()!r}")
    if epsilon > 0.0:
        rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
        if rng.random() < epsilon:
            return int(legal[rng.integers(len(legal))])
    values = engine.evaluate(board, shots=shots, rng=rng)
    best = legal[0]
    for cell in legal[1:]:
        if values[cell] > values[best]:
            best = cell
    return int(best)


# ---------------------------------------------------------------------------
# Construction


def _classical_net(variant: str, rng) -> list:
    if variant == "stronger":
        return [nn.Conv3x3(1, 64, rng), nn.Tanh(), nn.Flatten(),
                nn.Dense(64, 128, rng), nn.Tanh(),
                nn.Dense(128, 9, rng), nn.Tanh()]
    return [nn.Conv3x3(1, 16, rng), nn.Tanh(), nn.Flatten(),
            nn.Dense(16, 9, rng), nn.Tanh()]


def build_engine(spec, seed: int = 0) -> Engine:
    """Construct an engine with seeded weights.

    Draw order is fixed (pre-net, then quantum parameters in [0, 2pi), then
    post-net) so a (spec, seed) pair pins every initial weight.
    """
    if isinstance(spec, str):
        spec = parse_key(spec)
    rng = np.random.default_rng(seed)

    if spec.family == "ccnn":
        return Engine(spec, net=_classical_net(spec.method, rng))

    circuit = build_model_circuit(spec.embedding, spec.ansatz, spec.n)

    if spec.family == "qnn":
        theta = rng.uniform(0.0, 2.0 * np.pi, circuit.n_params)
        return Engine(spec, circuit=circuit, theta=theta,
                      readout=ZReadout(tuple(range(9))))
    if spec.family == "qcnn":
        theta = rng.uniform(0.0, 2.0 * np.pi, circuit.n_params)
        return Engine(spec, circuit=circuit, theta=theta,
                      readout=ZReadout(qcnn_surviving_qubits(18)),
                      duplicate_input=True)

    pre = [nn.Dense(9, spec.n, rng), nn.Tanh()]
    theta = rng.uniform(0.0, 2.0 * np.pi, circuit.n_params)
    if spec.method == "smp":
        readout = ProbReadout(tuple(range(spec.n)))
    elif spec.ansatz == "qcnn":
        readout = ZReadout(qcnn_surviving_qubits(spec.n))
    else:
        readout = ZReadout(tuple(range(spec.n)))
    post = [nn.Dense(readout.size, 9, rng), nn.Tanh()]
    return Engine(spec, pre_net=pre, circuit=circuit, theta=theta,
                  readout=readout, post_net=post)


# ---------------------------------------------------------------------------
# Checkpoints

def checkpoint_doc(engine: Engine, seed=None, rating=None) -> dict:
    arrays = [{"shape": list(a.shape), "data": a.reshape(-1).tolist()}
              for a in engine.trainable()]
    return {"schema": CHECKPOINT_SCHEMA, "spec": engine.spec.key,
            "seed": seed, "rating": rating, "arrays": arrays}


def checkpoint_save(engine: Engine, path, seed=None, rating=None):
    with open(path, "w") as f:
        json.dump(checkpoint_doc(engine, seed=seed, rating=rating), f)


def engine_from_doc(doc: dict, expect_spec: str | None = None) -> Engine:
    try:
        schema, key, arrays = doc["schema"], doc["spec"], doc["arrays"]
    except (TypeError, KeyError) as e:
        raise CorruptCheckpoint(f"missing checkpoint field: {e}") from None
    if schema != CHECKPOINT_SCHEMA:
        raise CorruptCheckpoint(f"unsupported checkpoint schema {schema!r}")
    if expect_spec is not None and key != expect_spec:
        raise SpecMismatch(f"checkpoint is {key!r}, expected {expect_spec!r}")
    engine = build_engine(key, seed=0)
    targets = engine.trainable()
    if len(arrays) != len(targets):
        raise CorruptCheckpoint(
            f"{len(arrays)} arrays in file, engine has {len(targets)}")
    for rec, target in zip(arrays, targets):
        try:
            loaded = np.asarray(rec["data"], dtype=np.float64).reshape(rec["shape"])
        except (TypeError, KeyError, ValueError) as e:
            raise CorruptCheckpoint(f"bad array record: {e}") from None
        if loaded.shape != target.shape:
            raise CorruptCheckpoint(
                f"array shape {loaded.shape} != expected {target.shape}")
        target[...] = loaded
    return engine


def checkpoint_load(path, expect_spec: str | None = None) -> Engine:
    try:
        with open(path) as f:
            doc = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise CorruptCheckpoint(f"unreadable checkpoint {path}: {e}") from None
    return engine_from_doc(doc, expect_spec=expect_spec)
