"""Quantum board games: superposed gomoku and weiqi playable by classical
computers, with every move compiled to local qutrit unitaries."""

from .board import BLACK, UNOCCUPIED, WHITE, Board, Color, Point, board_hash, parse_point
from .dense import (
    DenseState,
    apply_embedded,
    dense_from_terms,
    extract_terms,
    fidelity,
    kernel_backend,
    zero_state,
)
from .engine import GameRecord, Match, MatchConfig, Outcome, Status, play_match, replay
from .errors import MoveRejected, QbgError, Reason, ReplayMismatch
from .gates import Condition, Gate, gate_controlled_x, gate_h, gate_superposition, gate_x
from .moves import (
    Classical,
    CounterLeg,
    CounterMove,
    GameKind,
    GameWise,
    GameWiseEntry,
    MandatoryCapture,
    Move,
    PassMove,
    ResignMove,
    SuperMove,
    compile_move,
    format_move,
    parse_move,
    validate_p2,
)
from .state import Superposition, Term, apply_gate, marginals, merge_terms, serialize, state_hash
from .weiqi import CaptureApproach, KoLedger, analyze_groups, classical_capture, forbidden_points, quantum_capture

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
