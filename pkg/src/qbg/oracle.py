"""Verification harnesses: dense-vs-sparse equivalence and interference
counting on randomized legal move sequences.

Trials run on boards small enough for the dense statevector (at most a dozen
points) and compare the sparse branch engine against exact state evolution
after every move. A deliberate fault can be injected to prove the harness
detects divergence.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .board import UNOCCUPIED, Color, Point
from .dense import DenseState, apply_embedded, dense_from_terms, fidelity, zero_state
from .moves import (
    Classical,
    CounterLeg,
    CounterMove,
    GameKind,
    Move,
    SuperMove,
    compile_move,
    legality,
    written_points,
)
from .state import Superposition, apply_gate

FIDELITY_TOL = 1e-9


def _open_points(state: Superposition) -> list[Point]:
    board = state.terms[0].board
    out = []
    for idx in range(state.n_points):
        if all(t.board.cells[idx] == UNOCCUPIED for t in state.terms):
            out.append(board.point(idx))
    return out


def random_legal_move(
    state: Superposition,
    to_move: Color,
    last_written: frozenset[Point] | None,
    rng: random.Random,
) -> Move | None:
    """Sample one legal move over the classical/superposition/counter/entangled
    vocabulary, or None when nothing is available."""
    board = state.terms[0].board
    open_pts = _open_points(state)
    candidates: list[Move] = [Classical(to_move, p) for p in open_pts]
    if len(open_pts) >= 2:
        for _ in range(min(8, len(open_pts))):
            p, q = rng.sample(open_pts, 2)
            candidates.append(SuperMove(to_move, rng.choice((+1, -1)), p, q))
    if last_written:
        controls = [
            p
            for p in last_written
            if any(t.board.get(p) == to_move.opposite.cell for t in state.terms)
        ]
        rng.shuffle(controls)
        for _ in range(8):
            if not controls:
                break
            legs = []
            used: set[Point] = set(controls)
            n_legs = min(len(controls), rng.choice((1, 1, 2)))
            pool = [p for p in open_pts if p not in used]
            ok = True
            for ctrl in controls[:n_legs]:
                n_targets = rng.choice((1, 1, 2))
                if len(pool) < n_targets:
                    ok = False
                    break
                targets = rng.sample(pool, n_targets)
                pool = [p for p in pool if p not in targets]
                legs.append(CounterLeg(ctrl, tuple(targets), rng.choice((+1, -1))))
            if ok and legs:
                candidates.append(CounterMove(to_move, tuple(legs)))
    rng.shuffle(candidates)
    for move in candidates:
        rejection = legality(
            move,
            state,
            game=GameKind.FIR,
            to_move=to_move,
            last_written=last_written,
            game_wise_allowed=False,
        )
        if rejection is None:
            return move
    return None


@dataclass
class TrialReport:
    trials: int
    moves: int
    min_fidelity: float
    merge_count: int
    failures: int

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.min_fidelity >= 1.0 - FIDELITY_TOL


def run_oracle_trials(
    cols: int,
    rows: int,
    trials: int,
    moves_per_trial: int = 8,
    seed: int = 0,
    inject_fault: bool = False,
) -> TrialReport:
    """Evolve random legal move sequences through both engines and compare.

    Fidelity |<dense|sparse>| must stay within 1e-9 of 1 after every move.
    """
    rng = random.Random(seed)
    min_fid = 1.0
    merges = 0
    failures = 0
    total_moves = 0
    for trial in range(trials):
        sparse = Superposition.empty(cols, rows)
        dense = zero_state(cols * rows)
        board = sparse.terms[0].board
        to_move = Color.BLACK
        last_written: frozenset[Point] | None = None
        for step in range(moves_per_trial):
            move = random_legal_move(sparse, to_move, last_written, rng)
            if move is None:
                break
            program = compile_move(move)
            for gate_step in program.steps:
                idx = tuple(board.index(p) for p in gate_step.points)
                sparse, m = apply_gate(sparse, gate_step.gate, idx)
                merges += m
                dense = apply_embedded(dense, gate_step.gate, idx)
            if inject_fault and trial == 0 and step == 0:
                import numpy as np

                dense = DenseState(dense.n, np.roll(dense.amps, 1))
            fid = fidelity(dense, dense_from_terms(sparse.branch_boards()))
            min_fid = min(min_fid, fid)
            if fid < 1.0 - FIDELITY_TOL:
                failures += 1
            total_moves += 1
            last_written = frozenset(written_points(move))
            to_move = to_move.opposite
    return TrialReport(trials, total_moves, min_fid, merges, failures)
