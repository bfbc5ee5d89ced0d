import json
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SQRT_HALF, one_term, stones_board
from qbg.board import Board, Color, parse_point
from qbg.dense import apply_embedded, dense_from_terms, fidelity, zero_state
from qbg.errors import TermExplosion
from qbg.gates import gate_superposition, gate_x
from qbg.state import (
    Superposition,
    Term,
    apply_gate,
    deserialize,
    marginals,
    merge_terms,
    serialize,
    state_hash,
)


def eq12_state() -> Superposition:
    state = Superposition.empty(9)
    board = state.terms[0].board
    pts = (board.index(parse_point("G3")), board.index(parse_point("G4")))
    out, merges = apply_gate(state, gate_superposition(Color.BLACK, +1), pts)
    assert merges == 0
    return out


def test_superposition_move_from_empty_board():
    state = eq12_state()
    assert state.term_count() == 2
    boards = {b.digits(): amp for amp, b in state.branch_boards()}
    g3 = stones_board(9, {"G3": "b"}).digits()
    g4 = stones_board(9, {"G4": "b"}).digits()
    assert abs(boards[g3] - SQRT_HALF) < 1e-12
    assert abs(boards[g4] - SQRT_HALF) < 1e-12


def test_classical_x_on_one_term():
    state = Superposition.empty(5)
    board = state.terms[0].board
    out, _ = apply_gate(state, gate_x(Color.BLACK), (7,))
    assert out.term_count() == 1
    assert out.terms[0].board.cells[7] == 0


def test_apply_matches_dense_oracle():
    rng = np.random.default_rng(3)
    state = Superposition.empty(3, 3)
    dense = zero_state(9)
    for step in range(6):
        k = int(rng.integers(1, 3))
        pts = tuple(int(p) for p in rng.choice(9, size=k, replace=False))
        gate = (
            gate_x(Color.BLACK)
            if k == 1
            else gate_superposition(Color.WHITE, -1)
        )
        state, _ = apply_gate(state, gate, pts)
        dense = apply_embedded(dense, gate, pts)
        assert fidelity(dense, dense_from_terms(state.branch_boards())) > 1 - 1e-9


def test_merge_destructive_interference():
    board = Board.empty(5)
    state = Superposition(
        5, 5, (Term(SQRT_HALF, board), Term(-SQRT_HALF, board))
    )
    merged, count = merge_terms(state)
    assert count == 1
    assert merged.terms == ()


def test_merge_distinct_untouched():
    state = eq12_state()
    merged, count = merge_terms(state)
    assert count == 0
    assert merged.terms == state.terms


def test_marginals_eq12():
    state = eq12_state()
    board = state.terms[0].board
    probs = marginals(state)
    g3, g4 = board.index(parse_point("G3")), board.index(parse_point("G4"))
    assert abs(probs[g3][0] - 0.5) < 1e-12
    assert abs(probs[g4][0] - 0.5) < 1e-12
    for idx in range(81):
        np.testing.assert_allclose(sum(probs[idx]), 1.0, atol=1e-9)
        if idx not in (g3, g4):
            assert abs(probs[idx][1] - 1.0) < 1e-9


def test_marginals_single_board_indicator():
    state = one_term(stones_board(5, {"C3": "b", "D4": "w"}))
    probs = marginals(state)
    board = state.terms[0].board
    assert probs[board.index(parse_point("C3"))].tolist() == [1.0, 0.0, 0.0]
    assert probs[board.index(parse_point("D4"))].tolist() == [0.0, 0.0, 1.0]


def test_marginals_match_dense_oracle():
    rng = np.random.default_rng(9)
    state = Superposition.empty(3, 3)
    for _ in range(4):
        pts = tuple(int(p) for p in rng.choice(9, size=2, replace=False))
        state, _ = apply_gate(state, gate_superposition(Color.BLACK, +1), pts)
    from qbg.dense import point_probabilities

    dense = dense_from_terms(state.branch_boards())
    np.testing.assert_allclose(marginals(state), point_probabilities(dense), atol=1e-9)


def test_term_count_doubles_per_disjoint_superposition():
    state = Superposition.empty(3, 3)
    assert state.term_count() == 1
    for k, pts in enumerate([(0, 1), (2, 3), (4, 5), (6, 7)], start=1):
        state, _ = apply_gate(state, gate_superposition(Color.BLACK, +1), pts)
        assert state.term_count() == 2**k


def test_serialization_deterministic():
    state = eq12_state()
    assert serialize(state) == serialize(state)
    # Construction order must not matter.
    reordered = Superposition.from_terms(
        9, 9, list(reversed(state.branch_boards()))
    )
    assert serialize(reordered) == serialize(state)
    assert state_hash(reordered) == state_hash(state)


def test_serialize_round_trip():
    state = eq12_state()
    again = deserialize(serialize(state))
    assert again == state
    obj = json.loads(serialize(state))
    assert obj["v"] == 1
    assert obj["board_size"] == 9
    assert all(set(t) == {"re", "im", "cells"} for t in obj["terms"])


def test_rectangular_serialization():
    state = Superposition.empty(3, 4)
    obj = json.loads(serialize(state))
    assert obj["board_size"] == [3, 4]
    assert deserialize(serialize(state)) == state


def test_term_ceiling():
    state = Superposition.empty(4, 3)
    with pytest.raises(TermExplosion):
        for pts in [(0, 1), (2, 3), (4, 5), (6, 7), (8, 9), (10, 11)]:
            state, _ = apply_gate(
                state, gate_superposition(Color.BLACK, +1), pts, term_ceiling=16
            )


def test_norm_conserved_across_random_applications():
    rng = random.Random(21)
    state = Superposition.empty(4, 3)
    for _ in range(10):
        pts = rng.sample(range(12), 2)
        state, _ = apply_gate(state, gate_superposition(Color.WHITE, -1), tuple(pts))
        assert abs(state.norm() - 1.0) < 1e-9


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=9, max_size=9), st.integers(0, 8))
def test_x_is_self_inverse_on_any_board(cells, point):
    board = Board(3, 3, bytes(cells))
    state = one_term(board)
    once, _ = apply_gate(state, gate_x(Color.WHITE), (point,))
    twice, _ = apply_gate(once, gate_x(Color.WHITE), (point,))
    assert twice == state
