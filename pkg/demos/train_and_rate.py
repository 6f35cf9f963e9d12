#!/usr/bin/env python3
"""Train three small engines by self-play and rate them round-robin.

Budgets here are kept tiny so the script finishes in about a minute;
the rating table is noisy at this scale but the mechanics are the real ones.
"""

import time

from qttt.arena import GreedyPlayer, round_robin, score_vs_random
from qttt.engines import build_engine
from qttt.trainer import TrainConfig, train

BUDGETS = {
    "ccnn-weaker": 2000,
    "qnn-9-tpe-realamplitudes": 150,
    "hnn-est-8-zfeaturemap-realamplitudes": 150,
}

players = {}
for key, episodes in BUDGETS.items():
    t0 = time.time()
    engine = build_engine(key, seed=0)
    log = train(engine, TrainConfig(episodes=episodes, seed=0))
    w, d, losses = score_vs_random(GreedyPlayer(engine), 200, seed=1)
    print(f"{key}: {episodes} episodes in {time.time() - t0:.0f}s, "
          f"final mean loss {log[-1][2]:.4f}, "
          f"vs random W{w} D{d} L{losses}")
    players[key] = GreedyPlayer(engine)

print()
table = round_robin(players, games_per_pair=100, seed=0)
for key in sorted(table.ratings, key=table.ratings.get, reverse=True):
    marks = " ".join(f"({g}, {r:.0f})" for g, r in table.history[key])
    print(f"{table.ratings[key]:7.1f}  {key}   history {marks}")
