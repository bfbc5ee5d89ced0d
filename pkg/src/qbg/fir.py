"""Five-in-a-row rules: line detection and the branch-wise win condition.

A line of five or more same-colored stones in any single branch decides the
match, regardless of that branch's amplitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .board import BLACK, WHITE, Board, Color, Point
from .state import Superposition

WIN_LENGTH = 5
# Scan directions east, south, south-east, north-east as (dcol, drow).
_DIRECTIONS = ((1, 0), (0, 1), (1, 1), (1, -1))


class Status(str, Enum):
    ONGOING = "ongoing"
    BLACK_WINS = "black_wins"
    WHITE_WINS = "white_wins"
    UNFINISHED = "unfinished"

    @staticmethod
    def win_for(color: Color) -> "Status":
        return Status.BLACK_WINS if color is Color.BLACK else Status.WHITE_WINS


@dataclass(frozen=True)
class Witness:
    branch: int
    line: tuple[Point, ...]


@dataclass(frozen=True)
class FirOutcome:
    status: Status
    witness: Witness | None = None


def line_win(board: Board, color: Color) -> tuple[Point, ...] | None:
    """First 5-in-a-row of `color` in row-major scan order, or None.

    Overlines count: a run of six or more yields its first five stones.
    """
    want = color.cell
    cells = board.cells
    cols, rows = board.cols, board.rows
    for row in range(rows):
        base = row * cols
        for col in range(cols):
            if cells[base + col] != want:
                continue
            for dc, dr in _DIRECTIONS:
                end_col = col + dc * (WIN_LENGTH - 1)
                end_row = row + dr * (WIN_LENGTH - 1)
                if not (0 <= end_col < cols and 0 <= end_row < rows):
                    continue
                if all(
                    cells[(row + dr * i) * cols + (col + dc * i)] == want
                    for i in range(1, WIN_LENGTH)
                ):
                    return tuple(
                        Point(col + dc * i, row + dr * i) for i in range(WIN_LENGTH)
                    )
    return None


def line_win_through(board: Board, through: Point, color: Color) -> tuple[Point, ...] | None:
    """5-run of `color` containing `through`, or None; O(1) per direction."""
    want = color.cell
    cells = board.cells
    cols, rows = board.cols, board.rows
    if cells[through.row * cols + through.col] != want:
        return None
    for dc, dr in _DIRECTIONS:
        run_back = 0
        c, r = through.col - dc, through.row - dr
        while 0 <= c < cols and 0 <= r < rows and cells[r * cols + c] == want:
            run_back += 1
            c -= dc
            r -= dr
        run_fwd = 0
        c, r = through.col + dc, through.row + dr
        while 0 <= c < cols and 0 <= r < rows and cells[r * cols + c] == want:
            run_fwd += 1
            c += dc
            r += dr
        if run_back + 1 + run_fwd >= WIN_LENGTH:
            start_col = through.col - dc * run_back
            start_row = through.row - dr * run_back
            return tuple(
                Point(start_col + dc * i, start_row + dr * i) for i in range(WIN_LENGTH)
            )
    return None


def fir_outcome(state: Superposition, mover: Color | None = None) -> FirOutcome:
    """Scan branches in canonical order; the first line found decides.

    If one scan turns up lines of both colors in different branches, the
    mover's color prevails (robustness tie-break; a legal five-in-a-row move
    can only complete the mover's own line).
    """
    first: dict[Color, Witness] = {}
    for branch, term in enumerate(state.terms):
        for color in (Color.BLACK, Color.WHITE):
            if color in first:
                continue
            line = line_win(term.board, color)
            if line is not None:
                first[color] = Witness(branch, line)
        if len(first) == 2:
            break
    if not first:
        return FirOutcome(Status.ONGOING)
    if len(first) == 2 and mover is not None:
        winner = mover
    else:
        winner = min(first, key=lambda c: first[c].branch)
    return FirOutcome(Status.win_for(winner), first[winner])
