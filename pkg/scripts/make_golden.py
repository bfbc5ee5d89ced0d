#!/usr/bin/env python3
"""Regenerate the golden gate matrices and regression records.

Gate files are flat row-major JSON arrays of [re, im] pairs. Records are
`.qbg` files whose replay must land on the positions the tests freeze.
"""

import json
import math
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from qbg.board import Board, Color, parse_point
from qbg.engine import Match, MatchConfig
from qbg.gates import as_golden, gate_controlled_x, gate_h, gate_x, Condition
from qbg.moves import GameKind, parse_move
from qbg.record import write_record
from qbg.state import Superposition


def write_gates() -> None:
    out = ROOT / "golden" / "gates"
    out.mkdir(parents=True, exist_ok=True)
    gates = {
        "xb": gate_x(Color.BLACK),
        "xw": gate_x(Color.WHITE),
        "hb": gate_h(Color.BLACK),
        "hw": gate_h(Color.WHITE),
        "b": gate_controlled_x(Condition.IS_UNOCCUPIED, Color.BLACK),
        "w": gate_controlled_x(Condition.IS_UNOCCUPIED, Color.WHITE),
    }
    for name, gate in gates.items():
        (out / f"{name}.json").write_text(json.dumps(as_golden(gate)) + "\n")
        print(f"wrote gates/{name}.json ({gate.label})")


def stones_board(n: int, stones: dict[str, str]) -> Board:
    board = Board.empty(n)
    updates = {board.index(parse_point(lbl)): Color(c).cell for lbl, c in stones.items()}
    return board.with_cells(updates)


def write_records() -> None:
    out = ROOT / "golden" / "records"
    out.mkdir(parents=True, exist_ok=True)

    # Two-branch opening: superposition move answered by an entangled move.
    m = Match(MatchConfig(game=GameKind.FIR, board_size=9, j_limit=8))
    m.submit(parse_move("B+ G3 G4"))
    m.submit(parse_move("E w [G3>C7][G4>C3]"))
    write_record(out / "superposition_entangled.qbg", m.record)

    # Single-stone capture.
    setup = Superposition.from_terms(
        9, 9, [(1.0, stones_board(9, {"E5": "b", "F6": "b", "G5": "b", "F5": "w"}))]
    )
    m = Match(
        MatchConfig(game=GameKind.WEIQI, board_size=9, j_limit=8),
        setup=setup,
        setup_to_move=Color.BLACK,
    )
    m.submit(parse_move("X b F4"))
    write_record(out / "capture_single.qbg", m.record)

    # Three-stone capture.
    setup = Superposition.from_terms(
        9,
        9,
        [
            (
                1.0,
                stones_board(
                    9,
                    {
                        "D4": "b", "E4": "b", "C5": "b", "D5": "w", "E5": "w",
                        "F5": "b", "C6": "b", "D6": "w", "D7": "b",
                    },
                ),
            )
        ],
    )
    m = Match(
        MatchConfig(game=GameKind.WEIQI, board_size=9, j_limit=8),
        setup=setup,
        setup_to_move=Color.BLACK,
    )
    m.submit(parse_move("X b E6"))
    write_record(out / "capture_multi.qbg", m.record)

    # Broadcast capture on a two-branch state.
    left = stones_board(
        9, {"C3": "b", "G7": "w", "C7": "b", "G3": "w", "F7": "b", "F6": "w", "E7": "b"}
    )
    right = stones_board(
        9, {"G4": "b", "G5": "w", "D3": "b", "H4": "w", "C7": "b", "G3": "w", "G7": "b"}
    )
    amp = 1.0 / math.sqrt(2.0)
    setup = Superposition.from_terms(9, 9, [(amp, left), (-amp, right)])
    m = Match(
        MatchConfig(game=GameKind.WEIQI, board_size=9, j_limit=4),
        setup=setup,
        setup_to_move=Color.WHITE,
    )
    m.submit(parse_move("E w [E7>E5][G7>F4]"))
    write_record(out / "broadcast_capture.qbg", m.record)
    print("wrote 4 records")


if __name__ == "__main__":
    write_gates()
    write_records()
