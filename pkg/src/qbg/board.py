"""Board geometry: qutrit cell values, coordinates, and classical boards.

A point holds one of three cell values with a fixed basis order (black=0,
unoccupied=1, white=2). Coordinates follow the board labelling with letters
for columns and numbers for rows, e.g. "E5" is the centre of a 9x9 board.
Column letters run A..S with no skipped letters.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, NamedTuple

from .errors import BadPoint, NotationError

BLACK = 0
UNOCCUPIED = 1
WHITE = 2

_LETTERS = "ABCDEFGHIJKLMNOPQRS"


class Color(str, Enum):
    BLACK = "b"
    WHITE = "w"

    @property
    def cell(self) -> int:
        return BLACK if self is Color.BLACK else WHITE

    @property
    def opposite(self) -> "Color":
        return Color.WHITE if self is Color.BLACK else Color.BLACK

    @staticmethod
    def from_cell(value: int) -> "Color":
        if value == BLACK:
            return Color.BLACK
        if value == WHITE:
            return Color.WHITE
        raise ValueError("unoccupied cell has no color")


class Point(NamedTuple):
    """Zero-based (column, row); row 0 is the '1' rank."""

    col: int
    row: int

    def label(self) -> str:
        return f"{_LETTERS[self.col]}{self.row + 1}"


def parse_point(text: str) -> Point:
    text = text.strip().upper()
    if len(text) < 2 or text[0] not in _LETTERS or not text[1:].isdigit():
        raise NotationError(f"bad point {text!r}")
    row = int(text[1:])
    if row < 1:
        raise NotationError(f"bad point {text!r}")
    return Point(_LETTERS.index(text[0]), row - 1)


@dataclass(frozen=True)
class Board:
    """One classical board configuration; immutable.

    Cells are stored row-major as bytes with values 0/1/2, row 0 first, so
    sorting boards by the raw bytes matches sorting by the base-3 big-endian
    encoding (first cell is the most significant digit).
    """

    cols: int
    rows: int
    cells: bytes

    @staticmethod
    def empty(cols: int, rows: int | None = None) -> "Board":
        rows = cols if rows is None else rows
        return Board(cols, rows, bytes([UNOCCUPIED]) * (cols * rows))

    @property
    def n_points(self) -> int:
        return self.cols * self.rows

    def index(self, p: Point) -> int:
        if not (0 <= p.col < self.cols and 0 <= p.row < self.rows):
            raise BadPoint(f"{p.label()} outside {self.cols}x{self.rows} board")
        return p.row * self.cols + p.col

    def point(self, index: int) -> Point:
        return Point(index % self.cols, index // self.cols)

    def get(self, p: Point) -> int:
        return self.cells[self.index(p)]

    def with_cells(self, updates: dict[int, int]) -> "Board":
        cells = bytearray(self.cells)
        for idx, value in updates.items():
            cells[idx] = value
        return Board(self.cols, self.rows, bytes(cells))

    def neighbors(self, idx: int) -> Iterator[int]:
        col, row = idx % self.cols, idx // self.cols
        if col > 0:
            yield idx - 1
        if col < self.cols - 1:
            yield idx + 1
        if row > 0:
            yield idx - self.cols
        if row < self.rows - 1:
            yield idx + self.cols

    def stones(self) -> Iterator[tuple[int, int]]:
        """Yield (cell index, cell value) for occupied points."""
        for idx, value in enumerate(self.cells):
            if value != UNOCCUPIED:
                yield idx, value

    def digits(self) -> str:
        """Base-3 big-endian digit string; the canonical board encoding."""
        return bytes(c + ord("0") for c in self.cells).decode("ascii")

    @staticmethod
    def from_digits(cols: int, rows: int, digits: str) -> "Board":
        if len(digits) != cols * rows or any(d not in "012" for d in digits):
            raise ValueError("bad cell digit string")
        return Board(cols, rows, bytes(int(d) for d in digits))

    def basis_index(self) -> int:
        """Index of this configuration in the dense statevector."""
        value = 0
        for c in self.cells:
            value = value * 3 + c
        return value


def board_hash(board: Board) -> str:
    """Stable 16-hex-char id of one branch board; used by game-wise notation."""
    return hashlib.sha256(board.cells).hexdigest()[:16]
