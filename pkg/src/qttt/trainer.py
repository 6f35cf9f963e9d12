"""Q-learning self-play training.

One engine plays both seats of each episode. Every seat records transitions
from its own perspective: the state it acted in, the action, and the board
it next faced (after the opponent's reply) or Terminal. Rewards are +1 win,
-1 loss, 0 draw, paid only on terminal transitions.

After each game every transition is replayed in chronological order: the
target is r + gamma * max over legal moves of Q(next), Huber loss is taken
on the chosen action's output alone, and one Adam step follows per
transition. No replay buffer, no target network.

The same loop trains :class:`TabularAgent`, a dictionary Q-learner over the
5478 reachable states, used as a correctness reference for the environment.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import game, nn
from .engines import select_move
from .game import Board, DRAW, O, ONGOING, O_WINS, X_WINS, apply_move, legal_moves, outcome

REWARD_WIN = 1.0
REWARD_LOSS = -1.0
REWARD_DRAW = 0.0


@dataclass(frozen=True)
class Transition:
    state: Board
    action: int
    reward: float
    next_state: Board | None  # None once the game has ended
    perspective: str  # seat that acted

    @property
    def terminal(self) -> bool:
        return self.next_state is None


@dataclass
class TrainConfig:
    episodes: int = 10000
    gamma: float = 0.9
    eps0: float = 1.0
    eps_min: float = 0.05
    decay: float = 0.9995
    lr: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.gamma < 1.0):
            raise ValueError("gamma must lie in [0, 1)")
        if not (self.eps0 >= self.eps_min >= 0.0):
            raise ValueError("need eps0 >= eps_min >= 0")
        if not (0.0 < self.decay <= 1.0):
            raise ValueError("decay must lie in (0, 1]")


def seat_reward(result: str, seat: str) -> float:
    if result == DRAW:
        return REWARD_DRAW
    won = (result == O_WINS) == (seat == O)
    return REWARD_WIN if won else REWARD_LOSS


def self_play_episode(player, epsilon: float, rng) -> tuple:
    """One full game, ``player`` on both seats; returns (O list, X list).

    ``player`` is anything with the engine evaluate() contract (including
    TabularAgent). Within each seat's list, s_{i+1} of one transition is
    s_i of the next.
    """
    pending = {}
    transitions = {game.O: [], game.X: []}
    board = Board.empty()
    while outcome(board) == ONGOING:
        seat = board.to_move
        if seat in pending:
            s, a = pending[seat]
            transitions[seat].append(Transition(s, a, 0.0, board, seat))
        action = select_move(player, board, epsilon, rng)
        pending[seat] = (board, action)
        board = apply_move(board, action)
    result = outcome(board)
    for seat, (s, a) in pending.items():
        transitions[seat].append(
            Transition(s, a, seat_reward(result, seat), None, seat))
    return transitions[game.O], transitions[game.X], result


def q_target(t: Transition, player, gamma: float) -> float:
    if t.terminal:
        return t.reward
    values = player.evaluate(t.next_state)
    best = max(float(values[c]) for c in legal_moves(t.next_state))
    return t.reward + gamma * best


def _chronological(o_trans: list, x_trans: list) -> list:
    merged = []
    for i in range(max(len(o_trans), len(x_trans))):
        if i < len(o_trans):
            merged.append(o_trans[i])
        if i < len(x_trans):
            merged.append(x_trans[i])
    return merged


def train(engine, config: TrainConfig) -> list:
    """Train in place; returns the per-episode log.

    Log rows: (episode, epsilon, mean transition loss, game result).
    Identical (engine seed, config) pairs give identical weights: the only
    randomness flows through the config seed.
    """
    rng = np.random.default_rng(config.seed)
    adam = nn.Adam(engine.trainable(), lr=config.lr)
    epsilon = config.eps0
    log = []
    for episode in range(config.episodes):
        o_trans, x_trans, result = self_play_episode(engine, epsilon, rng)
        losses = []
        for t in _chronological(o_trans, x_trans):
            target = q_target(t, engine, config.gamma)
            pred, grads = engine.evaluate_with_grad(t.state, t.action)
            loss, dpred = nn.huber(pred, target)
            adam.step(engine.trainable(), [g * dpred for g in grads])
            losses.append(loss)
        log.append((episode, epsilon, float(np.mean(losses)), result))
        epsilon = max(config.eps_min, epsilon * config.decay)
    return log


def write_training_log(log: list, path):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["episode", "epsilon", "mean_loss", "result"])
        for episode, epsilon, loss, result in log:
            w.writerow([episode, f"{epsilon:.6f}", f"{loss:.8f}", result])


# ---------------------------------------------------------------------------
# Tabular reference


class TabularAgent:
    """Dictionary Q-learner over reachable boards.

    Exposes evaluate() so the shared self-play and arena code treat it like
    any engine; unknown states read as all-zero rows.
    """

    def __init__(self, alpha: float = 0.5, gamma: float = 0.9):
        self.alpha = alpha
        self.gamma = gamma
        self.q = {}

    def _row(self, board: Board) -> np.ndarray:
        key = board.to_string()
        if key not in self.q:
            self.q[key] = np.zeros(9)
        return self.q[key]

    def evaluate(self, board: Board, shots=None, rng=None) -> np.ndarray:
        return self.q.get(board.to_string(), np.zeros(9))

    def update(self, t: Transition):
        target = q_target(t, self, self.gamma)
        row = self._row(t.state)
        row[t.action] += self.alpha * (target - row[t.action])


def train_tabular(config: TrainConfig, agent: TabularAgent | None = None) -> tuple:
    """Same schedule as train(), tabular update rule. Returns (agent, log)."""
    agent = agent or TabularAgent(gamma=config.gamma)
    rng = np.random.default_rng(config.seed)
    epsilon = config.eps0
    log = []
    for episode in range(config.episodes):
        o_trans, x_trans, result = self_play_episode(agent, epsilon, rng)
        for t in _chronological(o_trans, x_trans):
            agent.update(t)
        log.append((episode, epsilon, 0.0, result))
        epsilon = max(config.eps_min, epsilon * config.decay)
    return agent, log
