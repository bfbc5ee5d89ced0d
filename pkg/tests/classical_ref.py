"""Independent classical-rules reference used as a test oracle.

Deliberately written against plain int lists with union-find group tracking,
so it shares no code path with the engine's flood-fill/byte-board
implementation. Black=0, unoccupied=1, white=2 to ease comparisons.
"""

from __future__ import annotations

BLACK, EMPTY, WHITE = 0, 1, 2


class RefBoard:
    def __init__(self, size: int):
        self.size = size
        self.cells = [EMPTY] * (size * size)

    def clone(self) -> "RefBoard":
        out = RefBoard(self.size)
        out.cells = list(self.cells)
        return out

    def idx(self, col: int, row: int) -> int:
        return row * self.size + col

    def neighbors(self, i: int) -> list[int]:
        col, row = i % self.size, i // self.size
        out = []
        if col > 0:
            out.append(i - 1)
        if col < self.size - 1:
            out.append(i + 1)
        if row > 0:
            out.append(i - self.size)
        if row < self.size - 1:
            out.append(i + self.size)
        return out

    def digits(self) -> str:
        return "".join(str(c) for c in self.cells)


class DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def groups_unionfind(board: RefBoard) -> list[tuple[int, frozenset[int], int]]:
    """(color, members, liberty count) triples via union-find."""
    n = board.size * board.size
    dsu = DSU(n)
    for i in range(n):
        if board.cells[i] == EMPTY:
            continue
        for nb in board.neighbors(i):
            if nb > i and board.cells[nb] == board.cells[i]:
                dsu.union(i, nb)
    members: dict[int, list[int]] = {}
    for i in range(n):
        if board.cells[i] != EMPTY:
            members.setdefault(dsu.find(i), []).append(i)
    out = []
    for root, pts in members.items():
        libs = set()
        for i in pts:
            libs.update(nb for nb in board.neighbors(i) if board.cells[nb] == EMPTY)
        out.append((board.cells[root], frozenset(pts), len(libs)))
    return out


def go_play(board: RefBoard, i: int, color: int) -> tuple[RefBoard, list[int]]:
    """Place a stone, remove dead opponent groups; raises on suicide/occupied."""
    if board.cells[i] != EMPTY:
        raise ValueError("occupied")
    board = board.clone()
    board.cells[i] = color
    opponent = BLACK + WHITE - color
    captured: list[int] = []
    for col, pts, libs in groups_unionfind(board):
        if col == opponent and libs == 0:
            captured.extend(pts)
    for p in captured:
        board.cells[p] = EMPTY
    if not captured:
        for col, pts, libs in groups_unionfind(board):
            if col == color and i in pts and libs == 0:
                raise ValueError("suicide")
    return board, sorted(captured)


def is_legal_go(board: RefBoard, i: int, color: int) -> bool:
    if board.cells[i] != EMPTY:
        return False
    try:
        go_play(board, i, color)
        return True
    except ValueError:
        return False


def _lines(size: int) -> list[list[int]]:
    """Every maximal horizontal/vertical/diagonal point sequence."""
    out = []
    for row in range(size):
        out.append([row * size + col for col in range(size)])
    for col in range(size):
        out.append([row * size + col for row in range(size)])
    for start in range(-size + 1, size):  # "\" diagonals
        line = [r * size + (r + start) for r in range(size) if 0 <= r + start < size]
        if len(line) >= 5:
            out.append(line)
    for start in range(2 * size - 1):  # "/" diagonals
        line = [r * size + (start - r) for r in range(size) if 0 <= start - r < size]
        if len(line) >= 5:
            out.append(line)
    return out


def gomoku_lines_bruteforce(board: RefBoard, color: int) -> list[tuple[int, ...]]:
    """All 5-windows of `color` over every board line (the slow oracle)."""
    found = []
    for line in _lines(board.size):
        for k in range(len(line) - 4):
            window = line[k : k + 5]
            if all(board.cells[i] == color for i in window):
                found.append(tuple(window))
    return sorted(found)


def gomoku_winner(board: RefBoard) -> int | None:
    for color in (BLACK, WHITE):
        if gomoku_lines_bruteforce(board, color):
            return color
    return None
