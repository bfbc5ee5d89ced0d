"""Qutrit gate algebra: stone placement, ternary Hadamards, controlled gates.

Matrices act on the fixed basis (black, unoccupied, white) = (0, 1, 2); a
black stone is the column vector (1,0,0). Multi-qutrit gates follow the
convention that the first point of a gate's point list is the most
significant trit, so a two-qutrit gate's index is 3*control + target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .board import BLACK, UNOCCUPIED, WHITE, Color

MAX_GATE_ARITY = 6

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class Condition(Enum):
    """Control-qutrit predicates for controlled-X gates."""

    IS_UNOCCUPIED = "is-unoccupied"
    IS_BLACK = "is-black"
    IS_WHITE = "is-white"
    IS_ANY_STONE = "is-any-stone"

    def matches(self, cell: int) -> bool:
        if self is Condition.IS_UNOCCUPIED:
            return cell == UNOCCUPIED
        if self is Condition.IS_BLACK:
            return cell == BLACK
        if self is Condition.IS_WHITE:
            return cell == WHITE
        return cell != UNOCCUPIED


def stone_condition(color: Color) -> Condition:
    return Condition.IS_BLACK if color is Color.BLACK else Condition.IS_WHITE


@dataclass(frozen=True)
class Gate:
    """A unitary on `arity` qutrits with a display label."""

    label: str
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        dim = self.matrix.shape[0]
        if self.matrix.shape != (dim, dim):
            raise ValueError("gate matrix must be square")
        arity = round(math.log(dim, 3))
        if 3**arity != dim:
            raise ValueError("gate dimension must be a power of 3")
        if arity > MAX_GATE_ARITY:
            raise ValueError(f"gate arity {arity} exceeds {MAX_GATE_ARITY}")
        self.matrix.setflags(write=False)

    @property
    def arity(self) -> int:
        return round(math.log(self.matrix.shape[0], 3))

    def unitarity_defect(self) -> float:
        dim = self.matrix.shape[0]
        return float(np.max(np.abs(self.matrix.conj().T @ self.matrix - np.eye(dim))))


_X_BLACK = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)
_X_WHITE = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex)
_H_BLACK = _INV_SQRT2 * np.array(
    [[1, 1, 0], [1, -1, 0], [0, 0, math.sqrt(2.0)]], dtype=complex
)
_H_WHITE = _INV_SQRT2 * np.array(
    [[math.sqrt(2.0), 0, 0], [0, -1, 1], [0, 1, 1]], dtype=complex
)


def gate_x(color: Color) -> Gate:
    """Place or remove a stone of `color`; self-inverse."""
    if color is Color.BLACK:
        return Gate("Xb", _X_BLACK.copy())
    return Gate("Xw", _X_WHITE.copy())


def gate_h(color: Color) -> Gate:
    """Ternary Hadamard mixing `color` with unoccupied; self-inverse."""
    if color is Color.BLACK:
        return Gate("Hb", _H_BLACK.copy())
    return Gate("Hw", _H_WHITE.copy())


def gate_controlled_x(condition: Condition, action_color: Color) -> Gate:
    """Two-qutrit gate: apply X(action_color) to the target when the control
    cell satisfies `condition`, identity otherwise. Control is the first
    (most significant) qutrit.

    (IS_UNOCCUPIED, black) is the gate B; (IS_UNOCCUPIED, white) is W.
    """
    action = gate_x(action_color).matrix
    blocks = [
        action if condition.matches(cell) else np.eye(3, dtype=complex)
        for cell in (BLACK, UNOCCUPIED, WHITE)
    ]
    matrix = np.zeros((9, 9), dtype=complex)
    for cell, block in enumerate(blocks):
        matrix[3 * cell : 3 * cell + 3, 3 * cell : 3 * cell + 3] = block
    label = {Condition.IS_UNOCCUPIED: {"b": "B", "w": "W"}}.get(condition, {}).get(
        action_color.value, f"CX[{condition.value}->{action_color.value}]"
    )
    return Gate(label, matrix)


def gate_superposition(color: Color, sign: int) -> Gate:
    """Two-qutrit composite placing one `color` stone on two points at once.

    Built as controlled-X . H . X on the first point (the X is omitted for
    the minus sign), which maps |UU> to (|stone,U> +/- |U,stone>)/sqrt(2).
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    ctrl = gate_controlled_x(Condition.IS_UNOCCUPIED, color).matrix
    h_first = np.kron(gate_h(color).matrix, np.eye(3, dtype=complex))
    matrix = ctrl @ h_first
    if sign == +1:
        x_first = np.kron(gate_x(color).matrix, np.eye(3, dtype=complex))
        matrix = matrix @ x_first
    label = f"S{color.value}{'+' if sign == +1 else '-'}"
    return Gate(label, matrix)


def gate_counter_one(countered: Color) -> Gate:
    """One-to-one counter: control holds a `countered` stone -> place the
    opposite color on the target."""
    gate = gate_controlled_x(stone_condition(countered), countered.opposite)
    return Gate(f"C[{countered.value}]", gate.matrix.copy())


def gate_counter_two(countered: Color, sign: int) -> Gate:
    """One-to-two counter: control holds a `countered` stone -> superpose the
    opposite color over the two targets. Three-qutrit gate, control first."""
    placed = gate_superposition(countered.opposite, sign).matrix
    eye9 = np.eye(9, dtype=complex)
    matrix = np.zeros((27, 27), dtype=complex)
    for cell in (BLACK, UNOCCUPIED, WHITE):
        block = placed if stone_condition(countered).matches(cell) else eye9
        matrix[9 * cell : 9 * cell + 9, 9 * cell : 9 * cell + 9] = block
    return Gate(f"D[{countered.value}{'+' if sign == +1 else '-'}]", matrix)


def as_golden(gate: Gate) -> list[list[float]]:
    """Row-major [re, im] pairs, the golden-file layout."""
    return [[float(v.real), float(v.imag)] for v in gate.matrix.ravel()]
