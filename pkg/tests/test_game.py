import numpy as np
import pytest

from oracles import twin_reachable, twin_value, twin_winner
from qttt import game
from qttt.game import (Board, IllegalMove, apply_move, encode, legal_moves,
                       minimax_move, minimax_value, outcome, reachable_boards)


def test_empty_board():
    b = Board.empty()
    assert b.cells == tuple("." * 9)
    assert b.to_move == "O"
    assert outcome(b) == "ongoing"
    assert legal_moves(b) == list(range(9))


def test_apply_move_alternates_and_fills():
    b = Board.empty()
    b = apply_move(b, 4)
    assert b.cells[4] == "O" and b.to_move == "X"
    b = apply_move(b, 0)
    assert b.cells[0] == "X" and b.to_move == "O"
    assert legal_moves(b) == [1, 2, 3, 5, 6, 7, 8]


def test_apply_move_rejects_occupied_and_out_of_range():
    b = apply_move(Board.empty(), 4)
    with pytest.raises(IllegalMove):
        apply_move(b, 4)
    with pytest.raises(IllegalMove):
        apply_move(b, 9)
    with pytest.raises(IllegalMove):
        apply_move(b, -1)


def test_apply_move_rejects_finished_game():
    b = Board.empty()
    for cell in (0, 3, 1, 4, 2):  # O wins the top row
        b = apply_move(b, cell)
    assert outcome(b) == "O"
    with pytest.raises(IllegalMove):
        apply_move(b, 8)


def test_outcome_examples():
    won = Board(cells=tuple("OOOXX...."), to_move="X")
    assert outcome(won) == "O"
    col = Board(cells=tuple("X.OX.OX.."), to_move="O")
    assert outcome(col) == "X"
    diag = Board(cells=tuple("O..XO.XXO"), to_move="X")
    assert outcome(diag) == "O"
    full = Board(cells=tuple("OXOXXOOOX"), to_move="X")
    assert outcome(full) == "draw"


def test_reachable_count_and_twin_agreement():
    ours = reachable_boards()
    assert len(ours) == 5478
    twin = twin_reachable()
    assert len(twin) == 5478
    assert {(b.cells, b.to_move) for b in ours} == twin


def test_no_board_has_two_winners():
    for b in reachable_boards():
        o_line = any(all(b.cells[i] == "O" for i in line) for line in
                     ((0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7),
                      (2, 5, 8), (0, 4, 8), (2, 4, 6)))
        x_line = any(all(b.cells[i] == "X" for i in line) for line in
                     ((0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7),
                      (2, 5, 8), (0, 4, 8), (2, 4, 6)))
        assert not (o_line and x_line)


def test_encode_shape_and_values():
    b = apply_move(apply_move(Board.empty(), 4), 0)
    v = encode(b)
    assert v.shape == (9,)
    assert v.dtype == np.float64
    assert v[4] == 1.0 and v[0] == -1.0
    assert np.count_nonzero(v) == 2


def test_encode_single_move_changes_one_coordinate():
    rng = np.random.default_rng(7)
    for _ in range(50):
        b = Board.empty()
        while outcome(b) == "ongoing":
            before = encode(b)
            mover = b.to_move
            cell = int(rng.choice(legal_moves(b)))
            b = apply_move(b, cell)
            after = encode(b)
            diff = np.nonzero(after - before)[0]
            assert diff.tolist() == [cell]
            assert after[cell] == (1.0 if mover == "O" else -1.0)


def test_minimax_empty_board_is_draw():
    assert minimax_value(Board.empty()) == 0


def test_minimax_agrees_with_memoized_twin_everywhere():
    memo = {}
    for b in reachable_boards():
        assert minimax_value(b) == twin_value(b.cells, b.to_move, memo)


def test_minimax_agrees_with_unmemoized_twin_sampled():
    rng = np.random.default_rng(3)
    boards = sorted(reachable_boards(), key=lambda b: (b.cells, b.to_move))
    picks = rng.choice(len(boards), size=120, replace=False)
    for i in picks:
        b = boards[int(i)]
        assert minimax_value(b) == twin_value(b.cells, b.to_move, memo=None)


def test_minimax_antisymmetric_under_mark_swap():
    swap = {"O": "X", "X": "O", ".": "."}
    for b in sorted(reachable_boards(), key=lambda x: (x.cells, x.to_move))[::7]:
        mirrored = Board(cells=tuple(swap[c] for c in b.cells),
                         to_move=swap[b.to_move])
        assert minimax_value(mirrored) == -minimax_value(b)


def test_minimax_move_is_legal_and_optimal():
    rng = np.random.default_rng(11)
    for _ in range(30):
        b = Board.empty()
        while outcome(b) == "ongoing":
            if b.to_move == "O":
                cell = minimax_move(b)
                assert cell in legal_moves(b)
                child = apply_move(b, cell)
                best = max(minimax_value(apply_move(b, m)) for m in legal_moves(b))
                assert minimax_value(child) == best
                b = child
            else:
                b = apply_move(b, int(rng.choice(legal_moves(b))))
        # optimal O never loses
        assert outcome(b) != "X"


def test_minimax_self_play_draws():
    b = Board.empty()
    while outcome(b) == "ongoing":
        b = apply_move(b, minimax_move(b))
    assert outcome(b) == "draw"


def test_winner_twin_agreement_on_terminals():
    for b in reachable_boards():
        w = twin_winner(b.cells)
        out = outcome(b)
        if w is not None:
            assert out == w
        elif "." not in b.cells:
            assert out == "draw"
        else:
            assert out == "ongoing"


def test_wire_form_round_trip():
    for b in sorted(reachable_boards(), key=lambda x: (x.cells, x.to_move))[::13]:
        assert Board.from_string(b.to_string()) == b


def test_wire_form_rejects_garbage():
    for bad in ("", "OXOXOXOXO", "OXOXOXOXOXO", "ZXOXOXOXOO", "........Z", ".........Z"):
        with pytest.raises(ValueError):
            Board.from_string(bad)


def test_constants():
    assert game.EMPTY == "."
    assert game.O == "O" and game.X == "X"
    assert game.DRAW == "draw" and game.ONGOING == "ongoing"
