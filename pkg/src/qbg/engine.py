"""Match orchestration: the move pipeline, branch limit, records, and bots.

A match owns one superposition and serializes all mutations through
`submit`. The pipeline is: legality -> bounded-correlation check -> apply ->
branch-limit check -> capture resolution -> ko check -> outcome -> commit.
Once the branch count reaches the configured limit, only classical and
game-wise moves are accepted and game-wise moves become available.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator

import numpy as np

from .board import UNOCCUPIED, Board, Color, Point, board_hash
from .errors import InvalidMoveGeometry, MoveRejected, Reason
from .fir import Status, Witness, fir_outcome
from .moves import (
    Classical,
    CounterLeg,
    CounterMove,
    GameKind,
    GameWise,
    GameWiseEntry,
    Move,
    PassMove,
    ResignMove,
    SuperMove,
    compile_move,
    format_move,
    legality,
    move_species,
    parse_move,
    validate_p2,
    written_points,
)
from .state import Superposition, apply_gate, state_hash
from .weiqi import (
    CaptureApproach,
    CaptureReport,
    KoLedger,
    classical_capture,
    forbidden_points,
    quantum_capture,
)

BOARD_MIN, BOARD_MAX = 5, 19


@dataclass(frozen=True)
class MatchConfig:
    game: GameKind = GameKind.FIR
    board_size: int = 0  # 0 -> game default (15 for FIR, 9 for weiqi)
    j_limit: int = 8
    capture_approach: CaptureApproach = CaptureApproach.BROADCAST
    p2_budget: int = 6
    max_moves: int = 0  # 0 -> 4 * board_size^2
    seed: int = 0
    forbidden_aggregate: str = "any"

    def resolved(self) -> "MatchConfig":
        size = self.board_size or (15 if self.game is GameKind.FIR else 9)
        cap = self.max_moves or 4 * size * size
        cfg = replace(self, board_size=size, max_moves=cap)
        if not BOARD_MIN <= cfg.board_size <= BOARD_MAX:
            raise ValueError(f"board_size must be {BOARD_MIN}..{BOARD_MAX}")
        if cfg.j_limit < 1:
            raise ValueError("j_limit must be at least 1")
        if cfg.p2_budget < 1:
            raise ValueError("p2_budget must be at least 1")
        return cfg

    def to_json(self) -> dict:
        return {
            "game": self.game.value,
            "board_size": self.board_size,
            "j_limit": self.j_limit,
            "capture_approach": self.capture_approach.value,
            "p2_budget": self.p2_budget,
            "max_moves": self.max_moves,
            "seed": self.seed,
            "forbidden_aggregate": self.forbidden_aggregate,
        }

    @staticmethod
    def from_json(obj: dict) -> "MatchConfig":
        return MatchConfig(
            game=GameKind(obj.get("game", "fir")),
            board_size=int(obj.get("board_size", 0)),
            j_limit=int(obj.get("j_limit", 8)),
            capture_approach=CaptureApproach(obj.get("capture_approach", "broadcast")),
            p2_budget=int(obj.get("p2_budget", 6)),
            max_moves=int(obj.get("max_moves", 0)),
            seed=int(obj.get("seed", 0)),
            forbidden_aggregate=obj.get("forbidden_aggregate", "any"),
        )


@dataclass(frozen=True)
class Outcome:
    status: Status = Status.ONGOING
    reason: str = ""
    witness: Witness | None = None

    def to_json(self) -> dict:
        obj: dict = {"status": self.status.value, "reason": self.reason}
        if self.witness is not None:
            obj["witness"] = {
                "branch": self.witness.branch,
                "line": [p.label() for p in self.witness.line],
            }
        return obj


@dataclass(frozen=True)
class PlyEntry:
    ply: int
    player: Color
    move_text: str
    captures: CaptureReport | None
    state_hash: str
    note: str = ""


@dataclass
class GameRecord:
    """Classical coding of a match: config, optional setup, accepted moves."""

    config: MatchConfig
    setup: Superposition | None = None
    setup_to_move: Color = Color.BLACK
    plies: list[PlyEntry] = field(default_factory=list)
    outcome: Outcome = Outcome()


@dataclass(frozen=True)
class _Evaluation:
    state: Superposition
    report: CaptureReport | None
    merges: int
    outcome: Outcome
    note: str = ""


class Match:
    """Single-writer match state; distinct matches are independent."""

    def __init__(
        self,
        config: MatchConfig,
        setup: Superposition | None = None,
        setup_to_move: Color = Color.BLACK,
    ):
        self.config = config.resolved()
        n = self.config.board_size
        if setup is not None:
            if (setup.cols, setup.rows) != (n, n):
                raise ValueError("setup board size does not match config")
            self.state = setup
        else:
            self.state = Superposition.empty(n)
        self.to_move = setup_to_move
        self.ply = 0
        self.outcome = Outcome()
        self.game_wise_allowed = self.state.term_count() >= self.config.j_limit
        self.ko = KoLedger.fresh(self.state)
        self.last_written: frozenset[Point] | None = None
        self.pass_streak = 0
        self.interference_count = 0
        self.record = GameRecord(
            self.config, setup=setup, setup_to_move=setup_to_move
        )

    # -- queries ----------------------------------------------------------

    def state_digest(self) -> str:
        return state_hash(self.state)

    def board_template(self) -> Board:
        return self.state.terms[0].board

    def forbidden_for(self, color: Color) -> frozenset[Point]:
        if self.config.game is not GameKind.WEIQI:
            return frozenset()
        return forbidden_points(self.state, color, self.config.forbidden_aggregate)

    # -- pipeline ----------------------------------------------------------

    def submit(self, move: Move) -> PlyEntry:
        """Validate, apply, and commit a move; raises MoveRejected."""
        ev = self._evaluate(move)
        return self._commit(move, ev)

    def probe(self, move: Move) -> bool:
        """Dry-run the full pipeline without committing."""
        try:
            self._evaluate(move)
            return True
        except MoveRejected:
            return False

    def _evaluate(self, move: Move) -> _Evaluation:
        if self.outcome.status is not Status.ONGOING:
            raise MoveRejected(Reason.MATCH_FINISHED, "the match is over")
        species = move_species(move)
        if species == "capture":
            raise MoveRejected(Reason.INVALID_GEOMETRY, "captures are engine-injected")
        if self.game_wise_allowed and species in ("superposition", "counter", "entangled"):
            raise MoveRejected(
                Reason.J_LIMIT_EXCEEDED,
                "only classical and game-wise moves once the branch limit is reached",
            )

        forbidden = frozenset()
        if self.config.game is GameKind.WEIQI and species in (
            "classical",
            "superposition",
            "counter",
            "entangled",
        ):
            forbidden = self.forbidden_for(self.to_move)
        rejection = legality(
            move,
            self.state,
            game=self.config.game,
            to_move=self.to_move,
            last_written=self.last_written,
            game_wise_allowed=self.game_wise_allowed,
            forbidden=forbidden,
        )
        if rejection is not None:
            raise MoveRejected(rejection.reason, rejection.message)

        if isinstance(move, ResignMove):
            outcome = Outcome(Status.win_for(move.color.opposite), "resignation")
            return _Evaluation(self.state, None, 0, outcome)
        if isinstance(move, PassMove):
            if self.pass_streak >= 1:
                outcome = Outcome(Status.UNFINISHED, "agreement")
            else:
                outcome = Outcome()
            return _Evaluation(self.state, None, 0, outcome)

        note = ""
        if isinstance(move, GameWise):
            candidate = self._place_game_wise(move)
            merges = 0
            note = "p2-exempt: game-wise move sanctioned past the branch limit"
        else:
            program = compile_move(move)
            p2 = validate_p2(program, self.config.p2_budget)
            if not p2.ok:
                raise MoveRejected(
                    Reason.P2_VIOLATION,
                    f"{p2.correlated_points} correlated points exceed budget {p2.budget}",
                )
            board = self.board_template()
            candidate, merges = self.state, 0
            for step in program.steps:
                candidate, m = apply_gate(
                    candidate, step.gate, tuple(board.index(p) for p in step.points)
                )
                merges += m

        if candidate.term_count() > self.config.j_limit:
            raise MoveRejected(
                Reason.J_LIMIT_EXCEEDED,
                f"{candidate.term_count()} branches exceed the limit {self.config.j_limit}",
            )

        report: CaptureReport | None = None
        if self.config.game is GameKind.WEIQI:
            candidate, report, capture_merges = quantum_capture(
                candidate,
                self.to_move,
                self.config.capture_approach,
                self.game_wise_allowed,
            )
            merges += capture_merges
            if self.ko.violates(candidate, report.happened()):
                raise MoveRejected(
                    Reason.KO_VIOLATION, "capture restores an earlier position"
                )
            if not report.happened():
                report = None

        outcome = Outcome()
        if self.config.game is GameKind.FIR:
            fir = self._fir_after_move(candidate, move)
            if fir.status is not Status.ONGOING:
                outcome = Outcome(fir.status, "five_in_a_row", fir.witness)
        return _Evaluation(candidate, report, merges, outcome, note)

    def _fir_after_move(self, state: Superposition, move: Move):
        """Only a line of the mover's color through a written point can appear
        in five-in-a-row, so scan those lines instead of the full board."""
        from .fir import FirOutcome, line_win_through

        color = self.to_move
        written = written_points(move)
        for branch, term in enumerate(state.terms):
            for p in written:
                line = line_win_through(term.board, p, color)
                if line is not None:
                    return FirOutcome(Status.win_for(color), Witness(branch, line))
        return FirOutcome(Status.ONGOING)

    def _place_game_wise(self, move: GameWise) -> Superposition:
        chosen = {e.branch: e for e in move.entries}
        new_terms = []
        for term in self.state.terms:
            entry = chosen.get(board_hash(term.board))
            if entry is None:
                new_terms.append((term.amp, term.board))
                continue
            idx = term.board.index(entry.point)
            if self.config.game is GameKind.WEIQI:
                try:
                    placed, _ = classical_capture(term.board, entry.point, entry.color)
                except MoveRejected as exc:
                    raise MoveRejected(
                        exc.reason, f"branch {entry.branch}: {exc}"
                    ) from None
            else:
                placed = term.board.with_cells({idx: entry.color.cell})
            new_terms.append((term.amp, placed))
        boards = [b.cells for _, b in new_terms]
        if len(set(boards)) != len(boards):
            raise MoveRejected(
                Reason.INVALID_GEOMETRY,
                "game-wise placement would coalesce two branches",
            )
        return Superposition.from_terms(self.state.cols, self.state.rows, new_terms)

    def _commit(self, move: Move, ev: _Evaluation) -> PlyEntry:
        self.state = ev.state
        self.interference_count += ev.merges
        self.ply += 1
        self.pass_streak = self.pass_streak + 1 if isinstance(move, PassMove) else 0
        self.last_written = frozenset(written_points(move))
        self.to_move = self.to_move.opposite
        if self.state.term_count() >= self.config.j_limit:
            self.game_wise_allowed = True
        self.ko.push(self.state)
        self.outcome = ev.outcome
        if (
            self.outcome.status is Status.ONGOING
            and self.ply >= self.config.max_moves
        ):
            self.outcome = Outcome(Status.UNFINISHED, "move_cap")
        entry = PlyEntry(
            self.ply,
            self.to_move.opposite,
            format_move(move),
            ev.report,
            self.state_digest(),
            ev.note,
        )
        self.record.plies.append(entry)
        self.record.outcome = self.outcome
        return entry

    # -- enumeration and bots ----------------------------------------------

    def _masks(self) -> tuple[np.ndarray, np.ndarray]:
        """(open-in-every-branch, within-distance-2-of-a-stone) cell masks."""
        cols, rows = self.state.cols, self.state.rows
        occupied = np.zeros(cols * rows, dtype=bool)
        for term in self.state.terms:
            occupied |= np.frombuffer(term.board.cells, dtype=np.uint8) != UNOCCUPIED
        if not occupied.any():
            return ~occupied, np.ones(cols * rows, dtype=bool)
        grid = occupied.reshape(rows, cols)
        near = np.zeros_like(grid)
        for dr in range(-2, 3):
            for dc in range(-2, 3):
                src = grid[
                    max(0, -dr) : rows - max(0, dr), max(0, -dc) : cols - max(0, dc)
                ]
                near[
                    max(0, dr) : rows - max(0, -dr), max(0, dc) : cols - max(0, -dc)
                ] |= src
        return ~occupied, near.reshape(-1)

    def legal_moves(
        self, species: str | set[str] | None = None, cap: int = 64
    ) -> list[Move]:
        """Enumerate candidate moves under the bot cap policy.

        Every returned move passes `legality` by construction (candidates are
        built from open cells and firing controls); ko and branch-limit
        effects are still adjudicated at submission time.
        """
        wanted: set[str] | None
        if species is None:
            wanted = None
        elif isinstance(species, str):
            wanted = {species}
        else:
            wanted = set(species)
        want = lambda s: wanted is None or s in wanted

        out: list[Move] = []
        color = self.to_move
        post_limit = self.game_wise_allowed
        board = self.board_template()
        open_mask, zone_mask = self._masks()
        forbidden = self.forbidden_for(color)
        if forbidden:
            open_mask = open_mask.copy()
            for p in forbidden:
                open_mask[board.index(p)] = False
        open_points = [board.point(int(i)) for i in open_mask.nonzero()[0]]
        zone_open = [
            board.point(int(i)) for i in (open_mask & zone_mask).nonzero()[0]
        ]

        if want("classical"):
            out.extend(Classical(color, p) for p in open_points)
        may_double = 2 * self.state.term_count() <= self.config.j_limit
        if want("superposition") and not post_limit and may_double:
            pairs = 0
            for i, p in enumerate(zone_open):
                if pairs >= cap:
                    break
                for q in zone_open[i + 1 :]:
                    if pairs >= cap:
                        break
                    out.append(SuperMove(color, +1, p, q))
                    out.append(SuperMove(color, -1, p, q))
                    pairs += 1
        if (want("counter") or want("entangled")) and not post_limit:
            out.extend(self._counter_candidates(wanted, zone_open, cap))
        if want("game_wise") and post_limit:
            out.extend(self._game_wise_candidates(cap))
        if want("pass") and self.config.game is GameKind.WEIQI:
            out.append(PassMove(color))
        return out

    def _counter_candidates(
        self, wanted: set[str] | None, zone_open: list[Point], cap: int
    ) -> Iterator[Move]:
        if not self.last_written:
            return
        color = self.to_move
        countered = color.opposite
        controls = [
            p
            for p in sorted(self.last_written, key=lambda p: (p.row, p.col))
            if any(t.board.get(p) == countered.cell for t in self.state.terms)
        ]
        if not controls:
            return
        targets = [p for p in zone_open if p not in controls][: max(4, cap // 8)]
        count = 0
        if wanted is None or "counter" in wanted:
            for ctrl in controls:
                for t in targets:
                    yield CounterMove(color, (CounterLeg(ctrl, (t,)),))
                    count += 1
                    if count >= cap:
                        return
                for i, t1 in enumerate(targets):
                    for t2 in targets[i + 1 :]:
                        for sign in (+1, -1):
                            yield CounterMove(color, (CounterLeg(ctrl, (t1, t2), sign),))
                            count += 1
                            if count >= cap:
                                return
        if (wanted is None or "entangled" in wanted) and len(controls) >= 2:
            c1, c2 = controls[0], controls[1]
            count = 0
            for t1 in targets:
                for t2 in targets:
                    if t2 == t1:
                        continue
                    yield CounterMove(
                        color, (CounterLeg(c1, (t1,)), CounterLeg(c2, (t2,)))
                    )
                    count += 1
                    if count >= cap:
                        return
            for t1 in targets[:4]:
                rest = [t for t in targets if t != t1]
                for i, t2 in enumerate(rest):
                    for t3 in rest[i + 1 :]:
                        yield CounterMove(
                            color,
                            (CounterLeg(c1, (t1,)), CounterLeg(c2, (t2, t3), +1)),
                        )
                        count += 1
                        if count >= cap:
                            return

    def _game_wise_candidates(self, cap: int) -> Iterator[Move]:
        color = self.to_move
        entries = []
        for term in self.state.terms:
            board = term.board
            pick = None
            for idx in range(board.n_points):
                if board.cells[idx] != UNOCCUPIED:
                    continue
                p = board.point(idx)
                if self.config.game is GameKind.WEIQI:
                    try:
                        classical_capture(board, p, color)
                    except MoveRejected:
                        continue
                pick = p
                break
            if pick is None:
                return
            entries.append(GameWiseEntry(board_hash(board), pick, color))
        yield GameWise(color, tuple(entries))

    def bot_move(
        self,
        policy: str = "random",
        rng: random.Random | None = None,
        allowed_species: set[str] | None = None,
    ) -> Move:
        """Harness-grade move selection; deterministic under a seeded rng.

        Returns Pass (weiqi) or Resign (FIR) when no enumerated candidate
        survives the full pipeline.
        """
        rng = rng or random.Random(self.config.seed)
        candidates = self.legal_moves(species=allowed_species)
        candidates = [m for m in candidates if not isinstance(m, PassMove)]
        if policy == "greedy":
            move = self._greedy_choice(candidates)
            if move is not None and self._bot_acceptable(move):
                return move
        rng.shuffle(candidates)
        for move in candidates:
            if self._bot_acceptable(move):
                return move
        if self.config.game is GameKind.WEIQI:
            return PassMove(self.to_move)
        return ResignMove(self.to_move)

    def _bot_acceptable(self, move: Move) -> bool:
        """Probe only moves that could still fail after enumeration: in FIR,
        classical and superposition candidates cannot (no ko or captures, and
        doubling was pre-checked), so skip the pipeline dry-run for them."""
        if self.config.game is GameKind.FIR and isinstance(move, (Classical, SuperMove)):
            return True
        return self.probe(move)

    def _greedy_choice(self, candidates: list[Move]) -> Move | None:
        """Classical candidates scored per branch; FIR favours the longest own
        line through the point, weiqi the largest immediate capture."""
        best, best_score = None, -1.0
        color = self.to_move
        for move in candidates:
            if not isinstance(move, Classical):
                continue
            score = 0.0
            for term in self.state.terms:
                board = term.board
                idx = board.index(move.point)
                if board.cells[idx] != UNOCCUPIED:
                    continue
                if self.config.game is GameKind.FIR:
                    placed = board.with_cells({idx: color.cell})
                    score = max(score, _longest_line(placed, move.point, color))
                else:
                    try:
                        _, captured = classical_capture(board, move.point, color)
                        score += len(captured)
                    except MoveRejected:
                        continue
            if score > best_score:
                best, best_score = move, score
        return best


def _longest_line(board: Board, through: Point, color: Color) -> int:
    want = color.cell
    best = 1
    for dc, dr in ((1, 0), (0, 1), (1, 1), (1, -1)):
        run = 1
        for sign in (1, -1):
            c, r = through.col + sign * dc, through.row + sign * dr
            while 0 <= c < board.cols and 0 <= r < board.rows and board.cells[r * board.cols + c] == want:
                run += 1
                c += sign * dc
                r += sign * dr
        best = max(best, run)
    return best


def play_match(
    config: MatchConfig,
    policy_black: str = "random",
    policy_white: str = "random",
    seed: int | None = None,
    allowed_species: set[str] | None = None,
    ply_callback: Callable[[Match, PlyEntry], None] | None = None,
) -> Match:
    """Bot self-play until the match decides or hits the move cap."""
    match = Match(config)
    rng = random.Random(config.seed if seed is None else seed)
    while match.outcome.status is Status.ONGOING:
        policy = policy_black if match.to_move is Color.BLACK else policy_white
        move = match.bot_move(policy, rng, allowed_species)
        entry = match.submit(move)
        if ply_callback is not None:
            ply_callback(match, entry)
    return match


def replay(record: GameRecord) -> Match:
    """Deterministic reconstruction; verifies every recorded state hash."""
    match = Match(record.config, setup=record.setup, setup_to_move=record.setup_to_move)
    for entry in record.plies:
        move = parse_move(entry.move_text, default_color=entry.player)
        try:
            applied = match.submit(move)
        except MoveRejected as exc:
            from .errors import ReplayMismatch

            raise ReplayMismatch(entry.ply, f"ply {entry.ply} rejected: {exc}") from exc
        if applied.state_hash != entry.state_hash:
            from .errors import ReplayMismatch

            raise ReplayMismatch(entry.ply, f"state hash diverged at ply {entry.ply}")
    return match
