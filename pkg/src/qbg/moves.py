"""Move vocabulary, compilation to gate programs, and legality.

Species: classical placement, two-point superposition placement, one- and
two-target counter moves (controlled on a stone of the countered color),
entangled pairs of counter legs, per-branch game-wise placement, and the
engine-injected mandatory capture bundle. Pass and resign are bookkeeping
moves. Every compiled program is a product of unitary gates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .board import UNOCCUPIED, Board, Color, Point, parse_point
from .errors import BadPoint, InvalidMoveGeometry, NotationError, Reason
from .gates import (
    Condition,
    Gate,
    gate_controlled_x,
    gate_counter_one,
    gate_counter_two,
    gate_h,
    gate_x,
)
from .state import Superposition

DEFAULT_P2_BUDGET = 6


class GameKind(str, Enum):
    FIR = "fir"
    WEIQI = "weiqi"


@dataclass(frozen=True)
class Classical:
    color: Color
    point: Point


@dataclass(frozen=True)
class SuperMove:
    """One stone on two points at once; sign is the relative phase."""

    color: Color
    sign: int
    p1: Point
    p2: Point


@dataclass(frozen=True)
class CounterLeg:
    """Controlled placement: fires where the control holds the countered
    stone. One target is a plain counter; two targets place a superposition
    with the leg's sign."""

    control: Point
    targets: tuple[Point, ...]
    sign: int = +1


@dataclass(frozen=True)
class CounterMove:
    """One leg: counter move (C/D). Two legs: entangled move (E/T/F).

    `color` is the color being placed; the countered color is its opposite.
    """

    color: Color
    legs: tuple[CounterLeg, ...]

    @property
    def countered(self) -> Color:
        return self.color.opposite

    @property
    def letter(self) -> str:
        shape = tuple(len(leg.targets) for leg in self.legs)
        return {(1,): "C", (2,): "D", (1, 1): "E", (1, 2): "T", (2, 1): "T", (2, 2): "F"}[shape]


@dataclass(frozen=True)
class GameWiseEntry:
    branch: str  # canonical board hash
    point: Point
    color: Color


@dataclass(frozen=True)
class GameWise:
    color: Color
    entries: tuple[GameWiseEntry, ...]


@dataclass(frozen=True)
class MandatoryCapture:
    """Engine-injected product of one-qutrit X gates after a weiqi capture."""

    entries: tuple[tuple[Point, Color], ...]


@dataclass(frozen=True)
class PassMove:
    color: Color


@dataclass(frozen=True)
class ResignMove:
    color: Color


Move = Union[Classical, SuperMove, CounterMove, GameWise, MandatoryCapture, PassMove, ResignMove]


def move_species(move: Move) -> str:
    if isinstance(move, Classical):
        return "classical"
    if isinstance(move, SuperMove):
        return "superposition"
    if isinstance(move, CounterMove):
        return "counter" if len(move.legs) == 1 else "entangled"
    if isinstance(move, GameWise):
        return "game_wise"
    if isinstance(move, MandatoryCapture):
        return "capture"
    if isinstance(move, PassMove):
        return "pass"
    return "resign"


def written_points(move: Move) -> tuple[Point, ...]:
    """Points the move writes (targets and placements, not controls)."""
    if isinstance(move, Classical):
        return (move.point,)
    if isinstance(move, SuperMove):
        return (move.p1, move.p2)
    if isinstance(move, CounterMove):
        return tuple(t for leg in move.legs for t in leg.targets)
    if isinstance(move, GameWise):
        return tuple(e.point for e in move.entries)
    if isinstance(move, MandatoryCapture):
        return tuple(p for p, _ in move.entries)
    return ()


def control_points(move: Move) -> tuple[Point, ...]:
    if isinstance(move, CounterMove):
        return tuple(leg.control for leg in move.legs)
    return ()


def validate_geometry(move: Move) -> None:
    """Raise InvalidMoveGeometry on malformed point arrangements."""
    if isinstance(move, SuperMove):
        if move.sign not in (+1, -1):
            raise InvalidMoveGeometry("superposition sign must be +1 or -1")
        if move.p1 == move.p2:
            raise InvalidMoveGeometry("superposition needs two distinct points")
    elif isinstance(move, CounterMove):
        if not 1 <= len(move.legs) <= 2:
            raise InvalidMoveGeometry("counter moves have one or two legs")
        controls = [leg.control for leg in move.legs]
        targets = [t for leg in move.legs for t in leg.targets]
        for leg in move.legs:
            if not 1 <= len(leg.targets) <= 2:
                raise InvalidMoveGeometry("a leg has one or two targets")
            if leg.sign not in (+1, -1):
                raise InvalidMoveGeometry("leg sign must be +1 or -1")
        if len(set(controls)) != len(controls) or len(set(targets)) != len(targets):
            raise InvalidMoveGeometry("controls and targets must be distinct")
        if set(controls) & set(targets):
            raise InvalidMoveGeometry("targets may not overlap controls")
    elif isinstance(move, GameWise):
        if not move.entries:
            raise InvalidMoveGeometry("game-wise move lists no branches")
        branches = [e.branch for e in move.entries]
        if len(set(branches)) != len(branches):
            raise InvalidMoveGeometry("duplicate branch reference")
    elif isinstance(move, MandatoryCapture):
        pts = [p for p, _ in move.entries]
        if len(set(pts)) != len(pts):
            raise InvalidMoveGeometry("duplicate capture point")


# ---------------------------------------------------------------------------
# Compilation


@dataclass(frozen=True)
class GateStep:
    gate: Gate
    points: tuple[Point, ...]


@dataclass(frozen=True)
class GateProgram:
    steps: tuple[GateStep, ...]


def compile_move(move: Move) -> GateProgram:
    """Compile a move to its ordered gate program.

    Game-wise moves are executed per branch by the match engine and do not
    compile to a single local gate product.
    """
    validate_geometry(move)
    if isinstance(move, Classical):
        return GateProgram((GateStep(gate_x(move.color), (move.point,)),))
    if isinstance(move, SuperMove):
        steps = []
        if move.sign == +1:
            steps.append(GateStep(gate_x(move.color), (move.p1,)))
        steps.append(GateStep(gate_h(move.color), (move.p1,)))
        steps.append(
            GateStep(
                gate_controlled_x(Condition.IS_UNOCCUPIED, move.color),
                (move.p1, move.p2),
            )
        )
        return GateProgram(tuple(steps))
    if isinstance(move, CounterMove):
        steps = []
        for leg in move.legs:
            if len(leg.targets) == 1:
                gate = gate_counter_one(move.countered)
                steps.append(GateStep(gate, (leg.control, leg.targets[0])))
            else:
                gate = gate_counter_two(move.countered, leg.sign)
                steps.append(GateStep(gate, (leg.control, *leg.targets)))
        return GateProgram(tuple(steps))
    if isinstance(move, MandatoryCapture):
        return GateProgram(
            tuple(GateStep(gate_x(color), (p,)) for p, color in move.entries)
        )
    if isinstance(move, (PassMove, ResignMove)):
        return GateProgram(())
    raise InvalidMoveGeometry("game-wise moves execute per branch, not as gates")


@dataclass(frozen=True)
class P2Report:
    ok: bool
    correlated_points: int
    budget: int


def validate_p2(program: GateProgram, budget: int = DEFAULT_P2_BUDGET) -> P2Report:
    """Bounded-correlation check: uncorrelated one-qutrit products always
    pass; anything containing a multi-qutrit gate is counted as one
    correlated move over all its distinct points."""
    if all(step.gate.arity == 1 for step in program.steps):
        return P2Report(True, min(1, len(program.steps)), budget)
    points = {p for step in program.steps for p in step.points}
    return P2Report(len(points) <= budget, len(points), budget)


# ---------------------------------------------------------------------------
# Legality


@dataclass(frozen=True)
class Rejection:
    reason: Reason
    message: str = ""


def leg_fires(leg: CounterLeg, board: Board, countered: Color) -> bool:
    return board.get(leg.control) == countered.cell


def legality(
    move: Move,
    state: Superposition,
    *,
    game: GameKind,
    to_move: Color,
    last_written: frozenset[Point] | None,
    game_wise_allowed: bool,
    forbidden: frozenset[Point] = frozenset(),
) -> Rejection | None:
    """Turn, occupancy, control, and forbidden-point checks.

    `last_written` holds the opponent's previous move's written points, or
    None when there is no previous move (fresh board or setup position);
    counter controls are restricted to it when present. Ko is checked by the
    engine after capture resolution.
    """
    color = getattr(move, "color", None)
    if color is not None and color != to_move:
        return Rejection(Reason.WRONG_TURN, f"{to_move.value} to move")
    try:
        validate_geometry(move)
        boards = [t.board for t in state.terms]
        for p in (*written_points(move), *control_points(move)):
            boards[0].index(p) if boards else None
    except (InvalidMoveGeometry, BadPoint) as exc:
        return Rejection(Reason.INVALID_GEOMETRY, str(exc))

    if isinstance(move, (PassMove, ResignMove)):
        if isinstance(move, PassMove) and game is not GameKind.WEIQI:
            return Rejection(Reason.INVALID_GEOMETRY, "pass is a weiqi move")
        return None

    if isinstance(move, MandatoryCapture):
        return Rejection(Reason.INVALID_GEOMETRY, "captures are engine-injected")

    if isinstance(move, GameWise):
        if not game_wise_allowed:
            return Rejection(Reason.GAME_WISE_NOT_ALLOWED, "branch limit not reached")
        for entry in move.entries:
            if entry.color != to_move:
                return Rejection(Reason.WRONG_TURN, "game-wise stones must be the mover's")
            term = state.branch_by_hash(entry.branch)
            if term is None:
                return Rejection(Reason.BAD_BRANCH_REF, f"unknown branch {entry.branch}")
            if term.board.get(entry.point) != UNOCCUPIED:
                return Rejection(
                    Reason.OCCUPIED, f"{entry.point.label()} occupied in branch {entry.branch}"
                )
        return None

    if isinstance(move, (Classical, SuperMove)):
        for p in written_points(move):
            if p in forbidden:
                return Rejection(Reason.FORBIDDEN, f"{p.label()} forbidden for {to_move.value}")
            for board in boards:
                if board.get(p) != UNOCCUPIED:
                    return Rejection(Reason.OCCUPIED, f"{p.label()} occupied in a branch")
        return None

    # Counter / entangled moves.
    assert isinstance(move, CounterMove)
    if last_written is not None:
        for leg in move.legs:
            if leg.control not in last_written:
                return Rejection(
                    Reason.BAD_CONTROL,
                    f"control {leg.control.label()} was not written by the previous move",
                )
    fired_any = False
    for leg in move.legs:
        for board in boards:
            if not leg_fires(leg, board, move.countered):
                continue
            fired_any = True
            for t in leg.targets:
                if board.get(t) != UNOCCUPIED:
                    return Rejection(Reason.OCCUPIED, f"{t.label()} occupied where the control fires")
        for t in leg.targets:
            if t in forbidden:
                return Rejection(Reason.FORBIDDEN, f"{t.label()} forbidden for {to_move.value}")
    if not fired_any:
        return Rejection(Reason.BAD_CONTROL, "no control fires in any branch")
    return None


# ---------------------------------------------------------------------------
# Notation

_POINT = r"[A-S]\d{1,2}"
_RE_CLASSICAL = re.compile(rf"^X\s+([bw])\s+({_POINT})$")
_RE_SUPER = re.compile(rf"^([BW])([+-])\s+({_POINT})\s+({_POINT})$")
_RE_COUNTER = re.compile(r"^([CDETF])(?:\s+([bw]))?\s*((?:\[[^\]]*\]\s*)+)$")
_RE_LEG = re.compile(rf"^\[({_POINT})(>|\+|-)({_POINT})(?:,({_POINT}))?\]$")
_RE_GAMEWISE = re.compile(r"^GW(?:\s+([bw]))?\s*\{([^}]*)\}$")
_RE_ENTRY = re.compile(rf"^([0-9a-f]+):({_POINT})$")


def format_move(move: Move) -> str:
    if isinstance(move, Classical):
        return f"X {move.color.value} {move.point.label()}"
    if isinstance(move, SuperMove):
        letter = "B" if move.color is Color.BLACK else "W"
        sign = "+" if move.sign == +1 else "-"
        return f"{letter}{sign} {move.p1.label()} {move.p2.label()}"
    if isinstance(move, CounterMove):
        legs = "".join(_format_leg(leg) for leg in move.legs)
        return f"{move.letter} {move.color.value} {legs}"
    if isinstance(move, GameWise):
        inner = ",".join(f"{e.branch}:{e.point.label()}" for e in move.entries)
        return f"GW {move.color.value} {{{inner}}}"
    if isinstance(move, MandatoryCapture):
        inner = " ".join(f"{c.value}{p.label()}" for p, c in move.entries)
        return f"CAP {inner}"
    if isinstance(move, PassMove):
        return "pass"
    return "resign"


def _format_leg(leg: CounterLeg) -> str:
    if len(leg.targets) == 1:
        return f"[{leg.control.label()}>{leg.targets[0].label()}]"
    sign = "+" if leg.sign == +1 else "-"
    return f"[{leg.control.label()}{sign}{leg.targets[0].label()},{leg.targets[1].label()}]"


def parse_move(text: str, default_color: Color | None = None) -> Move:
    """Parse move notation; `default_color` fills in when the color token is
    omitted (it is implied by whose turn it is)."""
    text = text.strip()
    lowered = text.lower()
    if lowered in ("pass", "resign"):
        if default_color is None:
            raise NotationError(f"{lowered} needs a mover color from context")
        return PassMove(default_color) if lowered == "pass" else ResignMove(default_color)

    m = _RE_CLASSICAL.match(text)
    if m:
        return Classical(Color(m.group(1)), parse_point(m.group(2)))

    m = _RE_SUPER.match(text)
    if m:
        color = Color.BLACK if m.group(1) == "B" else Color.WHITE
        sign = +1 if m.group(2) == "+" else -1
        return SuperMove(color, sign, parse_point(m.group(3)), parse_point(m.group(4)))

    m = _RE_COUNTER.match(text)
    if m:
        letter, color_token, legs_text = m.groups()
        color = Color(color_token) if color_token else default_color
        if color is None:
            raise NotationError("counter move needs a color token or context")
        legs = tuple(_parse_leg(part) for part in re.findall(r"\[[^\]]*\]", legs_text))
        move = CounterMove(color, legs)
        try:
            actual = move.letter
        except KeyError:
            raise NotationError(f"bad leg arrangement in {text!r}") from None
        if actual != letter:
            raise NotationError(f"legs spell a {actual} move, not {letter}")
        return move

    m = _RE_GAMEWISE.match(text)
    if m:
        color_token, inner = m.groups()
        color = Color(color_token) if color_token else default_color
        if color is None:
            raise NotationError("game-wise move needs a color token or context")
        entries = []
        for part in filter(None, (s.strip() for s in inner.split(","))):
            em = _RE_ENTRY.match(part)
            if not em:
                raise NotationError(f"bad game-wise entry {part!r}")
            entries.append(GameWiseEntry(em.group(1), parse_point(em.group(2)), color))
        return GameWise(color, tuple(entries))

    raise NotationError(f"unrecognized move {text!r}")


def _parse_leg(text: str) -> CounterLeg:
    m = _RE_LEG.match(text)
    if not m:
        raise NotationError(f"bad leg {text!r}")
    control, op, t1, t2 = m.groups()
    if op == ">":
        if t2 is not None:
            raise NotationError(f"one-target leg with two targets: {text!r}")
        return CounterLeg(parse_point(control), (parse_point(t1),))
    if t2 is None:
        raise NotationError(f"two-target leg needs two targets: {text!r}")
    sign = +1 if op == "+" else -1
    return CounterLeg(parse_point(control), (parse_point(t1), parse_point(t2)), sign)
