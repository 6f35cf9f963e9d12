"""Elo ratings, round-robin tournaments and vs-random evaluation runs.

Ratings start at 1500 and are updated once per 100-game block:

    expected A beats B = 1 / (10^((R_B - R_A)/400) + 1)
    R_A' = R_A + K * (wins_A - decisive_games * expected)

Draws count for neither side: ``decisive_games`` is wins_A + wins_B, so an
all-draw block changes nothing. Both sides update simultaneously from their
pre-block ratings, which keeps each block zero-sum at equal K.

Every rated game is appended to a log of plain records, enough to recount
all tallies and replay the rating arithmetic from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engines import select_move
from .game import Board, DRAW, ONGOING, O_WINS, apply_move, legal_moves, outcome

BLOCK_SIZE = 100
INITIAL_RATING = 1500.0
DEFAULT_K = 32.0


def expected_score(rating_a: float, rating_b: float) -> float:
    """Probability weight that A beats B given current ratings."""
    return 1.0 / (10.0 ** ((rating_b - rating_a) / 400.0) + 1.0)


def update_rating(rating: float, wins: int, decisive_games: int,
                  expected: float, k: float = DEFAULT_K) -> float:
    return rating + k * (wins - decisive_games * expected)


@dataclass(frozen=True)
class BlockResult:
    wins_a: int
    wins_b: int
    draws: int

    def __post_init__(self):
        if min(self.wins_a, self.wins_b, self.draws) < 0:
            raise ValueError("negative tally")

    @property
    def games(self) -> int:
        return self.wins_a + self.wins_b + self.draws

    @property
    def decisive(self) -> int:
        return self.wins_a + self.wins_b


class RatingTable:
    """Ratings plus a (games played, rating) sample per completed block."""

    def __init__(self, ids, k: float = DEFAULT_K):
        self.k = k
        self.ratings = {i: INITIAL_RATING for i in ids}
        self.games = {i: 0 for i in ids}
        self.history = {i: [] for i in ids}

    def apply_block(self, id_a: str, id_b: str, block: BlockResult):
        """One simultaneous pairwise update from pre-block ratings."""
        ra, rb = self.ratings[id_a], self.ratings[id_b]
        w_ab = expected_score(ra, rb)
        self.ratings[id_a] = update_rating(ra, block.wins_a, block.decisive, w_ab, self.k)
        self.ratings[id_b] = update_rating(rb, block.wins_b, block.decisive, 1.0 - w_ab, self.k)
        for i, n in ((id_a, block.games), (id_b, block.games)):
            self.games[i] += n
            self.history[i].append((self.games[i], self.ratings[i]))


# ---------------------------------------------------------------------------
# Players


class GreedyPlayer:
    """Engine adapter: epsilon 0, highest legal value, lowest-index ties."""

    def __init__(self, engine, shots: int | None = None):
        self.engine = engine
        self.shots = shots

    def choose(self, board: Board, rng) -> int:
        return select_move(self.engine, board, 0.0, rng, shots=self.shots)


class RandomPlayer:
    """Uniform choice over legal cells."""

    def choose(self, board: Board, rng) -> int:
        legal = legal_moves(board)
        return int(legal[rng.integers(len(legal))])


def play_game(first, second, rng):
    """One game, ``first`` moving first. Returns (result, move list)."""
    board = Board.empty()
    moves = []
    players = (first, second)
    while outcome(board) == ONGOING:
        cell = players[len(moves) % 2].choose(board, rng)
        moves.append(cell)
        board = apply_move(board, cell)
    return outcome(board), moves


def _play_block(player_a, player_b, id_a, id_b, n_games: int, start_index: int,
                rng, log) -> BlockResult:
    """n_games with alternating first mover (A first on even indices)."""
    wins_a = wins_b = draws = 0
    for g in range(n_games):
        a_first = (start_index + g) % 2 == 0
        first, second = (player_a, player_b) if a_first else (player_b, player_a)
        result, moves = play_game(first, second, rng)
        if result == DRAW:
            draws += 1
        else:
            first_won = result == O_WINS
            if first_won == a_first:
                wins_a += 1
            else:
                wins_b += 1
        if log is not None:
            log.append({"pair": [id_a, id_b], "game": start_index + g,
                        "first": id_a if a_first else id_b,
                        "moves": moves, "result": result})
    return BlockResult(wins_a, wins_b, draws)


def play_match(player_a, player_b, id_a, id_b, n_games: int, table: RatingTable,
               rng, log=None):
    """Rated match in 100-game blocks (final block may be shorter)."""
    played = 0
    while played < n_games:
        size = min(BLOCK_SIZE, n_games - played)
        block = _play_block(player_a, player_b, id_a, id_b, size, played, rng, log)
        table.apply_block(id_a, id_b, block)
        played += size


def round_robin(players: dict, games_per_pair: int = 100, k: float = DEFAULT_K,
                seed: int = 0, log=None) -> RatingTable:
    """Every unordered pair plays a rated match; pair order is shuffled."""
    ids = list(players)
    if len(ids) < 2:
        raise ValueError("round robin needs at least 2 players")
    pairs = [(a, b) for i, a in enumerate(ids) for b in ids[i + 1:]]
    rng = np.random.default_rng(seed)
    rng.shuffle(pairs)
    table = RatingTable(ids, k=k)
    for id_a, id_b in pairs:
        play_match(players[id_a], players[id_b], id_a, id_b,
                   games_per_pair, table, rng, log)
    return table


RANDOM_ID = "random"


def evaluate_vs_random(player, engine_id: str, n_games: int = 10000,
                       k: float = DEFAULT_K, seed: int = 0, log=None) -> RatingTable:
    """Rated blocks against a uniform random mover; both sides start 1500."""
    table = RatingTable([engine_id, RANDOM_ID], k=k)
    rng = np.random.default_rng(seed)
    play_match(player, RandomPlayer(), engine_id, RANDOM_ID, n_games, table, rng, log)
    return table


def score_vs_random(player, n_games: int, seed: int = 0):
    """(wins, draws, losses) over unrated games, alternating first mover."""
    rng = np.random.default_rng(seed)
    wins = draws = losses = 0
    opponent = RandomPlayer()
    for g in range(n_games):
        mine_first = g % 2 == 0
        first, second = (player, opponent) if mine_first else (opponent, player)
        result, _ = play_game(first, second, rng)
        if result == DRAW:
            draws += 1
        elif (result == O_WINS) == mine_first:
            wins += 1
        else:
            losses += 1
    return wins, draws, losses


# ---------------------------------------------------------------------------
# Recount oracle


def recount_ratings(records: list, ids, k: float = DEFAULT_K) -> RatingTable:
    """Replay a game log's tallies through fresh rating arithmetic.

    Consecutive same-pair records are grouped into 100-game blocks in file
    order, mirroring how play_match produced them.
    """
    table = RatingTable(ids, k=k)

    def flush(pair, buf):
        wins_a = sum(1 for r in buf
                     if r["result"] != DRAW
                     and (r["result"] == O_WINS) == (r["first"] == pair[0]))
        draws = sum(1 for r in buf if r["result"] == DRAW)
        block = BlockResult(wins_a, len(buf) - wins_a - draws, draws)
        table.apply_block(pair[0], pair[1], block)

    pair, buf = None, []
    for rec in records:
        key = tuple(rec["pair"])
        if key != pair and buf:
            flush(pair, buf)
            buf = []
        pair = key
        buf.append(rec)
        if len(buf) == BLOCK_SIZE:
            flush(pair, buf)
            buf = []
    if buf:
        flush(pair, buf)
    return table
