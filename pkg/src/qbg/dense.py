"""Dense statevector oracle over all 3^n board configurations.

Exact but exponential; intended for boards of at most a dozen points, where
it cross-checks the sparse branch engine. The gate-application kernel is the
compiled extension when built, otherwise the pure-numpy fallback; set
QBG_KERNEL=py or QBG_KERNEL=cy to force one.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _dense_py
from .board import Board
from .errors import BadPoint, InvalidMoveGeometry, OracleTooLarge
from .gates import Gate

ORACLE_POINT_CAP = 12

try:
    from . import _dense_kernel  # type: ignore[attr-defined]
except ImportError:
    _dense_kernel = None

_forced = os.environ.get("QBG_KERNEL", "").strip().lower()
if _forced == "py":
    _BACKEND = "py"
elif _forced == "cy":
    if _dense_kernel is None:
        raise ImportError("QBG_KERNEL=cy but qbg._dense_kernel is not built")
    _BACKEND = "cy"
else:
    _BACKEND = "cy" if _dense_kernel is not None else "py"


def kernel_backend() -> str:
    """Name of the active kernel: 'cy' (compiled) or 'py' (numpy fallback)."""
    return _BACKEND


@dataclass
class DenseState:
    """Amplitudes over the full 3^n configuration space of n board points."""

    n: int
    amps: np.ndarray

    def copy(self) -> "DenseState":
        return DenseState(self.n, self.amps.copy())

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))


def zero_state(n: int, point_cap: int = ORACLE_POINT_CAP) -> DenseState:
    """All-unoccupied board: unit amplitude on the all-ones trit string."""
    if n > point_cap:
        raise OracleTooLarge(f"{n} points exceed the {point_cap}-point oracle cap")
    amps = np.zeros(3**n, dtype=np.complex128)
    amps[Board.empty(1, n).basis_index()] = 1.0
    return DenseState(n, amps)


def dense_from_terms(
    terms: Iterable[tuple[complex, Board]], point_cap: int = ORACLE_POINT_CAP
) -> DenseState:
    """Embed (amplitude, classical board) pairs as a dense statevector."""
    terms = list(terms)
    if not terms:
        raise ValueError("need at least one term")
    n = terms[0][1].n_points
    if any(b.n_points != n for _, b in terms):
        raise ValueError("boards must share a size")
    if n > point_cap:
        raise OracleTooLarge(f"{n} points exceed the {point_cap}-point oracle cap")
    amps = np.zeros(3**n, dtype=np.complex128)
    for amp, board in terms:
        amps[board.basis_index()] += amp
    return DenseState(n, amps)


def extract_terms(state: DenseState, cols: int, rows: int, tol: float = 1e-12) -> list[tuple[complex, Board]]:
    """Nonzero basis amplitudes as (amplitude, board) pairs, index order."""
    if cols * rows != state.n:
        raise ValueError("geometry does not match point count")
    out = []
    for idx in np.flatnonzero(np.abs(state.amps) > tol):
        digits = np.base_repr(int(idx), base=3).zfill(state.n)
        out.append((complex(state.amps[idx]), Board.from_digits(cols, rows, digits)))
    return out


def _check_points(points: Sequence[int], arity: int, n: int) -> tuple[int, ...]:
    pts = tuple(int(p) for p in points)
    if len(set(pts)) != len(pts):
        raise InvalidMoveGeometry(f"duplicate points {pts}")
    if len(pts) != arity:
        raise InvalidMoveGeometry(f"gate arity {arity} but {len(pts)} points")
    for p in pts:
        if not 0 <= p < n:
            raise BadPoint(f"point index {p} outside {n}-point board")
    return pts


def _axis_offsets(strides: np.ndarray) -> np.ndarray:
    offsets = np.zeros(1, dtype=np.int64)
    for s in strides:
        offsets = (offsets[:, None] + np.arange(3, dtype=np.int64) * s).ravel()
    return offsets


def apply_embedded(state: DenseState, gate: Gate, points: Sequence[int]) -> DenseState:
    """Apply `gate` to the listed point indices, identity elsewhere.

    points[0] is the most significant trit of the gate index, matching the
    base-3 big-endian board encoding. The full 3^n x 3^n operator is never
    materialized.
    """
    pts = _check_points(points, gate.arity, state.n)
    if _BACKEND == "cy":
        strides = 3 ** (state.n - 1 - np.array(pts, dtype=np.int64))
        rest = np.array([p for p in range(state.n) if p not in pts], dtype=np.int64)
        rest_strides = 3 ** (state.n - 1 - rest)
        out = _dense_kernel.apply_gate(
            state.amps,
            np.ascontiguousarray(gate.matrix, dtype=np.complex128),
            _axis_offsets(rest_strides),
            _axis_offsets(strides),
        )
    else:
        out = _dense_py.apply_gate(state.amps, gate.matrix, pts, state.n)
    return DenseState(state.n, out)


def fidelity(a: DenseState, b: DenseState) -> float:
    """|<a|b>|; 1.0 for identical normalized states."""
    if a.n != b.n:
        raise ValueError("point counts differ")
    return float(abs(np.vdot(a.amps, b.amps)))


def point_probabilities(state: DenseState) -> np.ndarray:
    """(n, 3) array of per-point probabilities for (black, unoccupied, white)."""
    probs = np.abs(state.amps.reshape((3,) * state.n)) ** 2
    out = np.empty((state.n, 3), dtype=np.float64)
    for p in range(state.n):
        axes = tuple(ax for ax in range(state.n) if ax != p)
        out[p] = probs.sum(axis=axes)
    return out
