import itertools
import json
import math

import numpy as np
import pytest

from conftest import GOLDEN_GATES
from qbg.board import BLACK, UNOCCUPIED, WHITE, Color
from qbg.gates import (
    Condition,
    Gate,
    gate_controlled_x,
    gate_counter_one,
    gate_counter_two,
    gate_h,
    gate_superposition,
    gate_x,
)

KET_BLACK = np.array([1, 0, 0], dtype=complex)
KET_U = np.array([0, 1, 0], dtype=complex)
KET_WHITE = np.array([0, 0, 1], dtype=complex)
SQRT_HALF = 1 / math.sqrt(2)


def load_golden(name: str) -> np.ndarray:
    pairs = json.loads((GOLDEN_GATES / f"{name}.json").read_text())
    dim = round(math.isqrt(len(pairs)))
    return np.array([complex(re, im) for re, im in pairs]).reshape(dim, dim)


def all_constructed_gates() -> list[Gate]:
    gates = []
    for color in Color:
        gates.append(gate_x(color))
        gates.append(gate_h(color))
        gates.append(gate_counter_one(color))
        for sign in (+1, -1):
            gates.append(gate_superposition(color, sign))
            gates.append(gate_counter_two(color, sign))
    for condition in Condition:
        for color in Color:
            gates.append(gate_controlled_x(condition, color))
    return gates


def test_all_constructed_gates_unitary():
    for gate in all_constructed_gates():
        assert gate.unitarity_defect() < 1e-12, gate.label


def test_x_and_h_are_involutions():
    for color in Color:
        for gate in (gate_x(color), gate_h(color)):
            product = gate.matrix @ gate.matrix
            assert np.max(np.abs(product - np.eye(3))) < 1e-15, gate.label


def test_x_black_places_and_removes():
    xb = gate_x(Color.BLACK).matrix
    assert np.array_equal(xb @ KET_U, KET_BLACK)
    assert np.array_equal(xb @ KET_BLACK, KET_U)


def test_x_white_fixes_black():
    xw = gate_x(Color.WHITE).matrix
    assert np.array_equal(xw @ KET_BLACK, KET_BLACK)
    assert np.array_equal(xw @ KET_U, KET_WHITE)


def test_h_black_on_unoccupied():
    hb = gate_h(Color.BLACK).matrix
    np.testing.assert_allclose(hb @ KET_U, SQRT_HALF * (KET_BLACK - KET_U), atol=1e-15)
    np.testing.assert_allclose(hb @ KET_BLACK, SQRT_HALF * (KET_BLACK + KET_U), atol=1e-15)


def test_h_black_fixes_white():
    hb = gate_h(Color.BLACK).matrix
    np.testing.assert_allclose(hb @ KET_WHITE, KET_WHITE, atol=1e-15)


def test_h_white_on_white():
    hw = gate_h(Color.WHITE).matrix
    np.testing.assert_allclose(hw @ KET_WHITE, SQRT_HALF * (KET_WHITE + KET_U), atol=1e-15)
    np.testing.assert_allclose(hw @ KET_U, SQRT_HALF * (KET_WHITE - KET_U), atol=1e-15)


def test_controlled_b_matches_golden_exactly():
    constructed = gate_controlled_x(Condition.IS_UNOCCUPIED, Color.BLACK).matrix
    assert np.array_equal(constructed, load_golden("b"))
    # Identity with rows 4 and 5 (1-indexed) swapped.
    expected = np.eye(9, dtype=complex)
    expected[[3, 4]] = expected[[4, 3]]
    assert np.array_equal(constructed, expected)


def test_controlled_w_matches_golden_exactly():
    constructed = gate_controlled_x(Condition.IS_UNOCCUPIED, Color.WHITE).matrix
    assert np.array_equal(constructed, load_golden("w"))
    expected = np.eye(9, dtype=complex)
    expected[[4, 5]] = expected[[5, 4]]
    assert np.array_equal(constructed, expected)


@pytest.mark.parametrize("name,builder", [
    ("xb", lambda: gate_x(Color.BLACK)),
    ("xw", lambda: gate_x(Color.WHITE)),
    ("hb", lambda: gate_h(Color.BLACK)),
    ("hw", lambda: gate_h(Color.WHITE)),
])
def test_one_qutrit_golden_files(name, builder):
    np.testing.assert_allclose(builder().matrix, load_golden(name), atol=1e-12)


def test_controlled_on_black_places_white():
    gate = gate_controlled_x(Condition.IS_BLACK, Color.WHITE).matrix
    ket = np.kron(KET_BLACK, KET_U)
    expected = np.kron(KET_BLACK, KET_WHITE)
    np.testing.assert_allclose(gate @ ket, expected, atol=1e-15)


def test_controlled_exhaustive_basis_action():
    """Every controlled gate acts as advertised on all 9 basis states."""
    kets = {BLACK: KET_BLACK, UNOCCUPIED: KET_U, WHITE: KET_WHITE}
    for condition in Condition:
        for action in Color:
            gate = gate_controlled_x(condition, action).matrix
            x = gate_x(action).matrix
            for ctrl, tgt in itertools.product((BLACK, UNOCCUPIED, WHITE), repeat=2):
                ket = np.kron(kets[ctrl], kets[tgt])
                expected_target = (x @ kets[tgt]) if condition.matches(ctrl) else kets[tgt]
                expected = np.kron(kets[ctrl], expected_target)
                np.testing.assert_allclose(gate @ ket, expected, atol=1e-15)


def test_superposition_composite_action():
    for color in Color:
        stone = KET_BLACK if color is Color.BLACK else KET_WHITE
        for sign in (+1, -1):
            gate = gate_superposition(color, sign).matrix
            ket = np.kron(KET_U, KET_U)
            expected = SQRT_HALF * (
                np.kron(stone, KET_U) + sign * np.kron(KET_U, stone)
            )
            np.testing.assert_allclose(gate @ ket, expected, atol=1e-14)


def test_counter_two_is_controlled_superposition():
    d = gate_counter_two(Color.BLACK, +1).matrix
    s = gate_superposition(Color.WHITE, +1).matrix
    # Fires on a black control stone.
    ket = np.kron(KET_BLACK, np.kron(KET_U, KET_U))
    expected = np.kron(KET_BLACK.reshape(3), (s @ np.kron(KET_U, KET_U)))
    np.testing.assert_allclose(d @ ket, expected, atol=1e-14)
    # Inert on white and unoccupied controls.
    for ctrl in (KET_U, KET_WHITE):
        ket = np.kron(ctrl, np.kron(KET_U, KET_U))
        np.testing.assert_allclose(d @ ket, ket, atol=1e-14)


def test_random_gate_products_stay_unitary():
    rng = np.random.default_rng(7)
    pool = [g for g in all_constructed_gates() if g.arity == 1]
    for _ in range(50):
        product = np.eye(3, dtype=complex)
        for _ in range(rng.integers(1, 6)):
            product = pool[rng.integers(len(pool))].matrix @ product
        defect = np.max(np.abs(product.conj().T @ product - np.eye(3)))
        assert defect < 1e-12


def test_gate_arity_cap():
    with pytest.raises(ValueError):
        Gate("too-big", np.eye(3**7, dtype=complex))
