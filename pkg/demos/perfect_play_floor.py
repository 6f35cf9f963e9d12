#!/usr/bin/env python3
"""Tabular Q-learning against the game-theoretic floor.

The minimax oracle values the empty board at 0 (draw under perfect play).
A converged tabular learner should never lose to either a random or a
perfect opponent; this is the correctness floor every network engine is
measured against.
"""

import numpy as np

from qttt.arena import GreedyPlayer, RandomPlayer, play_game, score_vs_random
from qttt.game import Board, minimax_move, minimax_value, reachable_boards
from qttt.trainer import TrainConfig, train_tabular

print(f"reachable boards: {len(reachable_boards())}")
print(f"minimax value of the empty board: {minimax_value(Board.empty())}")

agent, _log = train_tabular(TrainConfig(episodes=100_000, seed=0))
print(f"tabular agent visited {len(agent.q)} states")

w, d, losses = score_vs_random(GreedyPlayer(agent), 2000, seed=1)
print(f"vs random, 2000 games: W{w} D{d} L{losses}")


class MinimaxPlayer:
    def choose(self, board, rng):
        return minimax_move(board)


rng = np.random.default_rng(2)
results = []
for g in range(40):  # alternate seats against perfect play
    pair = (GreedyPlayer(agent), MinimaxPlayer())
    first, second = pair if g % 2 == 0 else pair[::-1]
    result, _moves = play_game(first, second, rng)
    mine = "O" if g % 2 == 0 else "X"
    results.append("draw" if result == "draw" else
                   ("win" if result == mine else "loss"))
print(f"vs minimax, 40 games: " + ", ".join(
    f"{results.count(k)} {k}" for k in ("win", "draw", "loss")))
