import random

import pytest

from classical_ref import BLACK as REF_BLACK
from classical_ref import RefBoard, gomoku_lines_bruteforce
from conftest import one_term, stones_board
from qbg.board import Board, Color, parse_point
from qbg.fir import Status, fir_outcome, line_win, line_win_through
from qbg.state import Superposition

P = parse_point


def test_horizontal_row_found():
    board = stones_board(9, {f"{c}1": "b" for c in "ABCDE"})
    line = line_win(board, Color.BLACK)
    assert line == tuple(P(f"{c}1") for c in "ABCDE")


def test_empty_board_no_line():
    assert line_win(Board.empty(9), Color.BLACK) is None
    assert line_win(Board.empty(9), Color.WHITE) is None


def test_overline_counts():
    board = stones_board(9, {f"C{r}": "w" for r in range(1, 8)})
    assert line_win(board, Color.WHITE) is not None


def random_ref_board(size: int, rng: random.Random, fill: float) -> RefBoard:
    board = RefBoard(size)
    for i in range(size * size):
        r = rng.random()
        if r < fill / 2:
            board.cells[i] = 0
        elif r < fill:
            board.cells[i] = 2
    return board


def to_engine_board(ref: RefBoard) -> Board:
    return Board.from_digits(ref.size, ref.size, ref.digits())


@pytest.mark.parametrize("fill", [0.2, 0.45, 0.7])
def test_line_win_matches_bruteforce_on_random_boards(fill):
    rng = random.Random(int(fill * 100))
    for _ in range(60):
        ref = random_ref_board(7, rng, fill)
        board = to_engine_board(ref)
        for color, ref_color in ((Color.BLACK, 0), (Color.WHITE, 2)):
            windows = gomoku_lines_bruteforce(ref, ref_color)
            line = line_win(board, color)
            if windows:
                assert line is not None
                assert tuple(sorted(board.index(p) for p in line)) in windows
            else:
                assert line is None


def test_line_win_through_agrees_with_full_scan():
    rng = random.Random(5)
    for _ in range(80):
        ref = random_ref_board(7, rng, 0.5)
        board = to_engine_board(ref)
        for color in (Color.BLACK, Color.WHITE):
            full = line_win(board, color)
            through_any = None
            for idx in range(49):
                hit = line_win_through(board, board.point(idx), color)
                if hit is not None:
                    through_any = hit
                    break
            assert (full is None) == (through_any is None)


def test_outcome_white_line_in_second_branch():
    clean = stones_board(7, {"A1": "b"})
    winning = stones_board(7, {f"C{r}": "w" for r in range(2, 7)})
    state = Superposition.from_terms(7, 7, [(0.8, clean), (0.6, winning)])
    outcome = fir_outcome(state)
    assert outcome.status is Status.WHITE_WINS
    assert outcome.witness is not None
    assert state.terms[outcome.witness.branch].board.digits() == winning.digits()


def test_outcome_classical_reduction():
    board = stones_board(9, {f"{c}5": "b" for c in "BCDEF"})
    outcome = fir_outcome(one_term(board))
    assert outcome.status is Status.BLACK_WINS
    assert outcome.witness.branch == 0


def test_eq12_position_ongoing():
    s1 = stones_board(9, {"G3": "b"})
    s2 = stones_board(9, {"G4": "b"})
    state = Superposition.from_terms(9, 9, [(2**-0.5, s1), (2**-0.5, s2)])
    assert fir_outcome(state).status is Status.ONGOING


def test_outcome_invariant_under_branch_reordering():
    b1 = stones_board(7, {f"{c}2": "b" for c in "ABCDE"})
    b2 = stones_board(7, {"A1": "w"})
    forward = Superposition.from_terms(7, 7, [(0.6, b1), (0.8, b2)])
    backward = Superposition.from_terms(7, 7, [(0.8, b2), (0.6, b1)])
    assert fir_outcome(forward) == fir_outcome(backward)


def test_cross_color_tiebreak_goes_to_mover():
    black_line = stones_board(7, {f"{c}1": "b" for c in "ABCDE"})
    white_line = stones_board(7, {f"{c}7": "w" for c in "ABCDE"})
    state = Superposition.from_terms(7, 7, [(2**-0.5, black_line), (2**-0.5, white_line)])
    assert fir_outcome(state, mover=Color.WHITE).status is Status.WHITE_WINS
    assert fir_outcome(state, mover=Color.BLACK).status is Status.BLACK_WINS
