"""Tic-tac-toe rules, numeric board encoding, and an exhaustive minimax oracle.

Boards are immutable: every move returns a new :class:`Board`. O always
moves first. Cells are indexed 0..8 row-major:

    0 | 1 | 2
    ---------
    3 | 4 | 5
    ---------
    6 | 7 | 8
"""

from __future__ import annotations

import functools
from typing import NamedTuple

import numpy as np

EMPTY = "."
O = "O"
X = "X"

ONGOING = "ongoing"
O_WINS = "O"
X_WINS = "X"
DRAW = "draw"

LINES = (
    (0, 1, 2), (3, 4, 5), (6, 7, 8),   # rows
    (0, 3, 6), (1, 4, 7), (2, 5, 8),   # columns
    (0, 4, 8), (2, 4, 6),              # diagonals
)

_ENCODING = {O: 1.0, X: -1.0, EMPTY: 0.0}


class IllegalMove(Exception):
    """Raised when a move targets an occupied cell or a finished game."""


class Board(NamedTuple):
    cells: tuple
    to_move: str = O

    @staticmethod
    def empty() -> "Board":
        return Board(cells=(EMPTY,) * 9, to_move=O)

    @staticmethod
    def from_string(s: str) -> "Board":
        """Parse the 10-char wire form: 9 cells over ``.OX`` plus side to move."""
        if len(s) != 10 or any(c not in ".OX" for c in s[:9]) or s[9] not in "OX":
            raise ValueError(f"bad board string {s!r}")
        return Board(cells=tuple(s[:9]), to_move=s[9])

    def to_string(self) -> str:
        return "".join(self.cells) + self.to_move

    def __str__(self) -> str:
        rows = ["".join(self.cells[r * 3:r * 3 + 3]) for r in range(3)]
        return "\n".join(rows) + f"  ({self.to_move} to move)"


def legal_moves(board: Board) -> list:
    """Indices of empty cells, ascending."""
    return [i for i, c in enumerate(board.cells) if c == EMPTY]


def apply_move(board: Board, cell: int) -> Board:
    """Place the side-to-move's mark at ``cell`` and flip the turn."""
    if outcome(board) != ONGOING:
        raise IllegalMove("game is over")
    if not (0 <= cell <= 8) or board.cells[cell] != EMPTY:
        raise IllegalMove(f"cell {cell} is not playable")
    cells = list(board.cells)
    cells[cell] = board.to_move
    return Board(cells=tuple(cells), to_move=X if board.to_move == O else O)


def outcome(board: Board) -> str:
    for a, b, c in LINES:
        v = board.cells[a]
        if v != EMPTY and v == board.cells[b] == board.cells[c]:
            return O_WINS if v == O else X_WINS
    if EMPTY not in board.cells:
        return DRAW
    return ONGOING


def encode(board: Board) -> np.ndarray:
    """9-vector with O as +1, X as -1, empty as 0."""
    return np.array([_ENCODING[c] for c in board.cells], dtype=np.float64)


@functools.lru_cache(maxsize=None)
def minimax_value(board: Board) -> int:
    """Exact game value from O's perspective: +1 O wins, -1 X wins, 0 draw.

    Full game-tree enumeration with memoization; used as the correctness
    reference for every learning agent in this package.
    """
    result = outcome(board)
    if result == O_WINS:
        return 1
    if result == X_WINS:
        return -1
    if result == DRAW:
        return 0
    values = [minimax_value(apply_move(board, m)) for m in legal_moves(board)]
    return max(values) if board.to_move == O else min(values)


def minimax_move(board: Board) -> int:
    """Lowest-index optimal move for the side to move."""
    best = None
    best_value = None
    for m in legal_moves(board):
        v = minimax_value(apply_move(board, m))
        better = best is None or (v > best_value if board.to_move == O else v < best_value)
        if better:
            best, best_value = m, v
    if best is None:
        raise IllegalMove("no legal moves")
    return best


def reachable_boards() -> set:
    """All boards reachable from the empty board, terminals included."""
    seen = set()
    stack = [Board.empty()]
    while stack:
        b = stack.pop()
        if b in seen:
            continue
        seen.add(b)
        if outcome(b) == ONGOING:
            stack.extend(apply_move(b, m) for m in legal_moves(b))
    return seen
