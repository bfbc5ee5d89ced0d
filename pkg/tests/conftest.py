import math
from pathlib import Path

import pytest

from qbg.board import Board, Color, parse_point
from qbg.state import Superposition

REPO = Path(__file__).resolve().parents[1]
GOLDEN_GATES = REPO / "golden" / "gates"
GOLDEN_RECORDS = REPO / "golden" / "records"

SQRT_HALF = 1.0 / math.sqrt(2.0)


def stones_board(n: int, stones: dict[str, str], rows: int | None = None) -> Board:
    """Board from {"G3": "b", ...} placements."""
    board = Board.empty(n, rows)
    updates = {
        board.index(parse_point(label)): Color(c).cell for label, c in stones.items()
    }
    return board.with_cells(updates)


def one_term(board: Board) -> Superposition:
    return Superposition.from_terms(board.cols, board.rows, [(1.0 + 0.0j, board)])


@pytest.fixture
def phi0() -> Superposition:
    """Two-branch weiqi position ahead of the broadcast-capture move."""
    left = stones_board(
        9, {"C3": "b", "G7": "w", "C7": "b", "G3": "w", "F7": "b", "F6": "w", "E7": "b"}
    )
    right = stones_board(
        9, {"G4": "b", "G5": "w", "D3": "b", "H4": "w", "C7": "b", "G3": "w", "G7": "b"}
    )
    return Superposition.from_terms(
        9, 9, [(SQRT_HALF, left), (-SQRT_HALF, right)]
    )
