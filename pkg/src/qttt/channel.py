"""Client-server quantum channel noise.

A channel-wrapped engine simulates running its circuit remotely: states
crossing the fiber pick up a per-qubit RX,RY,RZ rotation triple whose angles
are drawn i.i.d. from Normal(0, sigma(d)^2) and re-sampled on every
inference. The strength grows with distance d as

    sigma(d) = 10^(attenuation * d / 10) - 1      (attenuation in dB/km)

Model 1 sends the state both ways: noise after the embedding (client to
server) and again after the ansatz (server back to client), 6n noise gates.
Model 2 has the server measure and return classical outcomes: noise after
the embedding only, 3n gates, half of Model 1.

Patterns describe when the channel is active: A never, B evaluation only,
C training and evaluation. During Pattern-C training the noise angles are
constants of the current sample; gradients flow only through data inputs
and trainable parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .arena import GreedyPlayer, evaluate_vs_random
from .circuits import embedding as build_embedding
from .engines import Engine, build_engine
from .qsim import AngleExpr, QuantumCircuit
from .trainer import TrainConfig, train

DEFAULT_ATTENUATION = 0.2  # dB/km
FIXED_DISTANCE_KM = 100.0
PATTERNS = ("A", "B", "C")


class NoQuantumLayer(Exception):
    pass


def noise_sigma(distance_km: float, attenuation: float = DEFAULT_ATTENUATION) -> float:
    if distance_km < 0:
        raise ValueError("distance must be >= 0")
    if attenuation <= 0:
        raise ValueError("attenuation must be > 0")
    return 10.0 ** (attenuation * distance_km / 10.0) - 1.0


@dataclass(frozen=True)
class ChannelConfig:
    model: int = 1
    distance_km: float = FIXED_DISTANCE_KM
    attenuation: float = DEFAULT_ATTENUATION
    pattern: str = "B"

    def __post_init__(self):
        if self.model not in (1, 2):
            raise ValueError(f"model must be 1 or 2, got {self.model}")
        if self.pattern not in PATTERNS:
            raise ValueError(f"pattern must be one of {PATTERNS}")
        noise_sigma(self.distance_km, self.attenuation)  # range checks

    @property
    def sigma(self) -> float:
        return noise_sigma(self.distance_km, self.attenuation)


def _noise_layer(qc: QuantumCircuit, n: int, next_input: int) -> int:
    """RX,RY,RZ per qubit, each angle its own fresh input symbol."""
    for q in range(n):
        qc.rx(q, AngleExpr.input(next_input))
        qc.ry(q, AngleExpr.input(next_input + 1))
        qc.rz(q, AngleExpr.input(next_input + 2))
        next_input += 3
    return next_input


def _wrapped_circuit(base: QuantumCircuit, embedding_len: int, model: int) -> QuantumCircuit:
    n = base.n
    layers = 2 if model == 1 else 1
    qc = QuantumCircuit(n, n_inputs=base.n_inputs + layers * 3 * n,
                        n_params=base.n_params)
    k = base.n_inputs
    qc.gates.extend(base.gates[:embedding_len])
    k = _noise_layer(qc, n, k)
    qc.gates.extend(base.gates[embedding_len:])
    if model == 1:
        _noise_layer(qc, n, k)
    return qc


def noise_gate_count(engine: Engine) -> int:
    """Gates whose angle reads a noise input (index past the data inputs)."""
    count = 0
    for gate in engine.circuit.gates:
        if gate.angle is not None and any(
                s[0] == "x" and s[1] >= engine.n_data_inputs for s in gate.angle.syms):
            count += 1
    return count


class ChannelEngine(Engine):
    """Engine view with the channel spliced into its circuit.

    Shares every weight array with the base engine, so training either
    object trains both. Noise angles are appended to the circuit inputs and
    re-drawn from this wrapper's own generator on every evaluation.
    """

    def __init__(self, base: Engine, config: ChannelConfig, rng):
        if base.circuit is None:
            raise NoQuantumLayer(f"{base.spec.key} has no quantum layer")
        emb_len = len(build_embedding(base.spec.embedding, base.spec.n).gates)
        super().__init__(base.spec, pre_net=base.pre_net,
                         circuit=_wrapped_circuit(base.circuit, emb_len, config.model),
                         theta=base.theta, readout=base.readout,
                         post_net=base.post_net, duplicate_input=base.duplicate_input)
        self.n_data_inputs = base.circuit.n_inputs
        self.base = base
        self.config = config
        self.sigma = config.sigma
        self.n_noise = self.circuit.n_inputs - self.n_data_inputs
        self.noise_rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng

    def _assemble_inputs(self, features: np.ndarray) -> np.ndarray:
        noise = self.noise_rng.normal(0.0, self.sigma, self.n_noise)
        return np.concatenate([features, noise])


def wrap_with_channel(engine: Engine, config: ChannelConfig, rng) -> ChannelEngine:
    return ChannelEngine(engine, config, rng)


# ---------------------------------------------------------------------------
# Experiments


def _noise_stream(seed: int):
    return np.random.default_rng([seed, 0x51])


def _eval_seed(seed: int) -> list:
    return [seed, 0xE7]


def run_pattern_experiment(spec_key: str, config: ChannelConfig,
                           train_cfg: TrainConfig, seed: int,
                           n_eval_games: int = 10000) -> float:
    """Train per the pattern, rate vs random, return the final rating."""
    engine = build_engine(spec_key, seed=seed)
    tcfg = replace(train_cfg, seed=seed)
    if config.pattern == "C":
        wrapped = wrap_with_channel(engine, config, _noise_stream(seed))
        train(wrapped, tcfg)
        rated = wrapped
    else:
        train(engine, tcfg)
        if config.pattern == "B":
            rated = wrap_with_channel(engine, config, _noise_stream(seed))
        else:
            rated = engine
    table = evaluate_vs_random(GreedyPlayer(rated), spec_key,
                               n_games=n_eval_games, seed=_eval_seed(seed))
    return table.ratings[spec_key]


def distance_sweep(spec_key: str, model: int, distances, seed: int,
                   train_cfg: TrainConfig, n_eval_games: int = 10000,
                   attenuation: float = DEFAULT_ATTENUATION) -> list:
    """Pattern-B sweep: train once, rate once per distance.

    Returns [(distance_km, sigma, final_rating), ...] in input order.
    """
    engine = build_engine(spec_key, seed=seed)
    train(engine, replace(train_cfg, seed=seed))
    out = []
    for d in distances:
        config = ChannelConfig(model=model, distance_km=float(d),
                               attenuation=attenuation, pattern="B")
        rated = wrap_with_channel(engine, config, _noise_stream(seed))
        table = evaluate_vs_random(GreedyPlayer(rated), spec_key,
                                   n_games=n_eval_games, seed=_eval_seed(seed))
        out.append((float(d), config.sigma, table.ratings[spec_key]))
    return out


def default_sweep_distances(lo: float = 0.01, hi: float = 10.0, points: int = 4) -> list:
    return [float(d) for d in np.logspace(np.log10(lo), np.log10(hi), points)]
