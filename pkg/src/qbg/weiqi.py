"""Weiqi rules: groups and liberties, capture generalizations, forbidden
points, and the ko rule over the branch set.

Capture approaches:
  broadcast  - the captured stones' X gates are applied to every branch
               (removing where present, inserting where unoccupied, inert on
               the other color); the bounded-correlation-compliant default.
  remove     - captured stones are removed from all branches; only applicable
               when every branch holds the stone.
  per_branch - stones are removed only in the branches that captured them; a
               game-wise operation, allowed once game-wise moves are.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .board import UNOCCUPIED, Board, Color, Point, board_hash
from .errors import MoveRejected, Reason
from .gates import gate_x
from .moves import MandatoryCapture
from .state import Superposition, apply_gate, state_hash


class CaptureApproach(str, Enum):
    BROADCAST = "broadcast"
    REMOVE_EVERYWHERE = "remove-everywhere"
    PER_BRANCH = "per-branch"


@dataclass(frozen=True)
class Group:
    color: Color
    members: tuple[int, ...]
    liberties: int


def analyze_groups(board: Board) -> list[Group]:
    """Flood-fill partition of all stones with liberty counts."""
    seen = bytearray(board.n_points)
    groups: list[Group] = []
    for start, value in board.stones():
        if seen[start]:
            continue
        stack = [start]
        seen[start] = 1
        members = []
        liberties: set[int] = set()
        while stack:
            idx = stack.pop()
            members.append(idx)
            for nb in board.neighbors(idx):
                cell = board.cells[nb]
                if cell == UNOCCUPIED:
                    liberties.add(nb)
                elif cell == value and not seen[nb]:
                    seen[nb] = 1
                    stack.append(nb)
        groups.append(Group(Color.from_cell(value), tuple(sorted(members)), len(liberties)))
    return groups


def _dead_stones(board: Board, color: Color) -> list[int]:
    """Indices of `color` stones in groups with zero liberties."""
    out: list[int] = []
    for group in analyze_groups(board):
        if group.color is color and group.liberties == 0:
            out.extend(group.members)
    return out


def _group_dead_at(board: Board, idx: int) -> bool:
    """Zero liberties for the group containing the stone at `idx`."""
    for group in analyze_groups(board):
        if idx in group.members:
            return group.liberties == 0
    return False


def classical_capture(board: Board, placed: Point, color: Color) -> tuple[Board, list[tuple[int, Color]]]:
    """Place a stone and remove opponent groups left without liberties.

    Raises Forbidden on suicide (own group dead with nothing captured).
    """
    idx = board.index(placed)
    if board.cells[idx] != UNOCCUPIED:
        raise MoveRejected(Reason.OCCUPIED, f"{placed.label()} is occupied")
    board = board.with_cells({idx: color.cell})
    captured = _dead_stones(board, color.opposite)
    if captured:
        board = board.with_cells({i: UNOCCUPIED for i in captured})
    elif _group_dead_at(board, idx):
        raise MoveRejected(Reason.FORBIDDEN, f"{placed.label()} would be suicide")
    return board, [(i, color.opposite) for i in captured]


@dataclass(frozen=True)
class CaptureReport:
    """What a move captured and how it was resolved.

    `entries` is the branch-union of captured (point, color) pairs used by
    the broadcast and remove approaches; `per_branch` lists (branch hash,
    point, color) removals for the game-wise approach.
    """

    approach: CaptureApproach
    entries: tuple[tuple[Point, Color], ...] = ()
    per_branch: tuple[tuple[str, Point, Color], ...] = ()

    def happened(self) -> bool:
        return bool(self.entries or self.per_branch)

    def as_move(self) -> MandatoryCapture | None:
        return MandatoryCapture(self.entries) if self.entries else None


def quantum_capture(
    state: Superposition,
    mover: Color,
    approach: CaptureApproach,
    game_wise_allowed: bool = False,
) -> tuple[Superposition, CaptureReport, int]:
    """Resolve captures on the post-move superposition, once, without cascade.

    Detection runs per branch: every opponent group with zero liberties is
    captured in that branch. Returns (state, report, merge_count).
    """
    opponent = mover.opposite
    per_branch: list[tuple[str, int]] = []
    union: set[int] = set()
    for term in state.terms:
        dead = _dead_stones(term.board, opponent)
        if dead:
            digest = board_hash(term.board)
            per_branch.extend((digest, i) for i in dead)
            union.update(dead)
    if not union:
        return state, CaptureReport(approach), 0

    any_board = state.terms[0].board
    points = sorted(union)

    if approach is CaptureApproach.BROADCAST:
        merges = 0
        for idx in points:
            state, m = apply_gate(state, gate_x(opponent), (idx,))
            merges += m
        report = CaptureReport(
            approach, tuple((any_board.point(i), opponent) for i in points)
        )
        return state, report, merges

    if approach is CaptureApproach.REMOVE_EVERYWHERE:
        for idx in points:
            if any(t.board.cells[idx] != opponent.cell for t in state.terms):
                raise MoveRejected(
                    Reason.CAPTURE_INAPPLICABLE,
                    f"{any_board.point(idx).label()} is not a {opponent.value} stone in every branch",
                )
        merges = 0
        for idx in points:
            state, m = apply_gate(state, gate_x(opponent), (idx,))
            merges += m
        report = CaptureReport(
            approach, tuple((any_board.point(i), opponent) for i in points)
        )
        return state, report, merges

    # Per-branch removal: inspects each game separately (game-wise).
    if not game_wise_allowed:
        raise MoveRejected(
            Reason.GAME_WISE_NOT_ALLOWED, "per-branch capture is a game-wise operation"
        )
    dead_by_branch: dict[str, list[int]] = {}
    for digest, idx in per_branch:
        dead_by_branch.setdefault(digest, []).append(idx)
    new_terms = []
    for term in state.terms:
        digest = board_hash(term.board)
        dead = dead_by_branch.get(digest)
        board = (
            term.board.with_cells({i: UNOCCUPIED for i in dead}) if dead else term.board
        )
        new_terms.append((term.amp, board))
    merged = Superposition.from_terms(state.cols, state.rows, new_terms)
    merges = len(state.terms) - len(merged.terms)
    report = CaptureReport(
        approach,
        per_branch=tuple(
            (digest, any_board.point(i), opponent) for digest, i in per_branch
        ),
    )
    return merged, report, merges


def _suicide_in_board(board: Board, idx: int, color: Color) -> bool:
    """Would placing `color` at an unoccupied `idx` be suicide on this board?"""
    # Cheap necessary condition: a suicide point has no unoccupied neighbor.
    if any(board.cells[nb] == UNOCCUPIED for nb in board.neighbors(idx)):
        return False
    placed = board.with_cells({idx: color.cell})
    if _dead_stones(placed, color.opposite):
        return False
    own = placed.cells[idx]
    # Liberties of the group containing idx.
    for group in analyze_groups(placed):
        if idx in group.members:
            return group.liberties == 0 and own == color.cell
    return False


def forbidden_points(
    state: Superposition, color: Color, aggregate: str = "any"
) -> frozenset[Point]:
    """Points where placing `color` would be suicide, aggregated over branches.

    "any" (default, conservative): suicide in at least one branch where the
    point is unoccupied. "all": suicide in every branch where unoccupied.
    """
    if aggregate not in ("any", "all"):
        raise ValueError("aggregate must be 'any' or 'all'")
    if not state.terms:
        return frozenset()
    board0 = state.terms[0].board
    out = []
    for idx in range(state.n_points):
        verdicts = [
            _suicide_in_board(t.board, idx, color)
            for t in state.terms
            if t.board.cells[idx] == UNOCCUPIED
        ]
        if not verdicts:
            continue
        if (aggregate == "any" and any(verdicts)) or (aggregate == "all" and all(verdicts)):
            out.append(board0.point(idx))
    return frozenset(out)


@dataclass
class KoLedger:
    """Whole-superposition position history for ko enforcement.

    A capturing move may not restore any earlier branch-set position; this is
    a positional-superko superset of the classical immediate-recapture rule.
    Mutated only by its owning match (single writer).
    """

    history: list[str] = field(default_factory=list)

    @staticmethod
    def fresh(initial: Superposition) -> "KoLedger":
        return KoLedger([state_hash(initial)])

    def violates(self, state_after: Superposition, captured: bool) -> bool:
        return captured and state_hash(state_after) in self.history

    def push(self, state: Superposition) -> None:
        self.history.append(state_hash(state))
