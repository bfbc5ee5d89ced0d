"""Sparse board wavefunction: a bounded list of (amplitude, board) branches.

Each branch is one classical game in the superposition. Applying a local
k-qutrit gate expands every branch over the gate's action on its local cells
(at most two images for every constructed move), then merges equal boards.
A nonzero merge count is an interference event; the legal move vocabulary
never produces one.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .board import Board, board_hash
from .errors import BadPoint, InvalidMoveGeometry, QbgError, TermExplosion
from .gates import Gate

TERM_CEILING = 4096
AMPLITUDE_EPS = 1e-12
NORM_TOL = 1e-9


class Term(NamedTuple):
    amp: complex
    board: Board


@dataclass(frozen=True)
class Superposition:
    """Canonical branch list: boards distinct, sorted by base-3 encoding."""

    cols: int
    rows: int
    terms: tuple[Term, ...]

    @staticmethod
    def empty(cols: int, rows: int | None = None) -> "Superposition":
        rows = cols if rows is None else rows
        return Superposition(cols, rows, (Term(1.0 + 0.0j, Board.empty(cols, rows)),))

    @staticmethod
    def from_terms(
        cols: int, rows: int, terms: Iterable[tuple[complex, Board]]
    ) -> "Superposition":
        merged, _ = _merge(terms)
        return Superposition(cols, rows, merged)

    @property
    def n_points(self) -> int:
        return self.cols * self.rows

    def term_count(self) -> int:
        return len(self.terms)

    def branch_boards(self) -> list[tuple[complex, Board]]:
        return [(t.amp, t.board) for t in self.terms]

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(t.amp) ** 2 for t in self.terms)))

    def branch_by_hash(self, digest: str) -> Term | None:
        for t in self.terms:
            if board_hash(t.board) == digest:
                return t
        return None


def _merge(terms: Iterable[tuple[complex, Board]]) -> tuple[tuple[Term, ...], int]:
    acc: dict[bytes, list] = {}
    merge_count = 0
    for amp, board in terms:
        entry = acc.get(board.cells)
        if entry is None:
            acc[board.cells] = [amp, board]
        else:
            entry[0] += amp
            merge_count += 1
    kept = [
        Term(amp, board) for amp, board in acc.values() if abs(amp) > AMPLITUDE_EPS
    ]
    kept.sort(key=lambda t: t.board.cells)
    return tuple(kept), merge_count


def merge_terms(state: Superposition) -> tuple[Superposition, int]:
    """Coalesce equal boards; the count of coalesced pairs detects interference."""
    merged, count = _merge((t.amp, t.board) for t in state.terms)
    return Superposition(state.cols, state.rows, merged), count


def apply_gate(
    state: Superposition,
    gate: Gate,
    points: Sequence[int],
    term_ceiling: int = TERM_CEILING,
) -> tuple[Superposition, int]:
    """Apply a local gate at the given cell indices; returns (state, merges).

    points[0] is the most significant trit of the gate index. Branches are
    expanded column-wise, merged, and re-sorted; relative norm is preserved
    to 1e-9 or the application is rejected as inconsistent.
    """
    pts = tuple(int(p) for p in points)
    if len(set(pts)) != len(pts):
        raise InvalidMoveGeometry(f"duplicate points {pts}")
    if len(pts) != gate.arity:
        raise InvalidMoveGeometry(f"gate arity {gate.arity} with {len(pts)} points")
    n = state.n_points
    for p in pts:
        if not 0 <= p < n:
            raise BadPoint(f"point index {p} outside {n}-point board")

    matrix = gate.matrix
    dim = matrix.shape[0]
    # Column sparsity once per call; every constructed move has <= 2 images.
    column_images: list[list[tuple[int, complex]]] = []
    for c in range(dim):
        col = matrix[:, c]
        column_images.append(
            [(int(r), complex(col[r])) for r in np.flatnonzero(np.abs(col) > 0.0)]
        )
    digit_cache = [_digits(r, len(pts)) for r in range(dim)]

    expanded: list[tuple[complex, Board]] = []
    for amp, board in state.terms:
        cells = board.cells
        c = 0
        for p in pts:
            c = c * 3 + cells[p]
        for r, weight in column_images[c]:
            if r == c:
                expanded.append((amp * weight, board))
            else:
                updates = {
                    p: d for p, d in zip(pts, digit_cache[r]) if cells[p] != d
                }
                expanded.append((amp * weight, board.with_cells(updates)))

    merged, merge_count = _merge(expanded)
    if len(merged) > term_ceiling:
        raise TermExplosion(f"{len(merged)} terms exceed ceiling {term_ceiling}")
    out = Superposition(state.cols, state.rows, merged)
    before, after = state.norm(), out.norm()
    if abs(after - before) > NORM_TOL:
        raise QbgError(f"norm drifted {before} -> {after}")
    return out, merge_count


def _digits(value: int, k: int) -> tuple[int, ...]:
    out = [0] * k
    for i in range(k - 1, -1, -1):
        out[i] = value % 3
        value //= 3
    return tuple(out)


def marginals(state: Superposition) -> np.ndarray:
    """(n, 3) per-point probabilities for (black, unoccupied, white)."""
    out = np.zeros((state.n_points, 3), dtype=np.float64)
    idx = np.arange(state.n_points)
    for amp, board in state.terms:
        w = abs(amp) ** 2
        out[idx, np.frombuffer(board.cells, dtype=np.uint8)] += w
    return out


def serialize(state: Superposition) -> bytes:
    """Canonical JSON bytes; identical states serialize identically."""
    size = state.cols if state.cols == state.rows else [state.cols, state.rows]
    obj = {
        "v": 1,
        "board_size": size,
        "terms": [
            {"re": t.amp.real, "im": t.amp.imag, "cells": t.board.digits()}
            for t in state.terms
        ],
    }
    return json.dumps(obj, separators=(",", ":")).encode("ascii")


def deserialize(data: bytes | str) -> Superposition:
    obj = json.loads(data)
    size = obj["board_size"]
    cols, rows = (size, size) if isinstance(size, int) else (size[0], size[1])
    terms = [
        (complex(t["re"], t["im"]), Board.from_digits(cols, rows, t["cells"]))
        for t in obj["terms"]
    ]
    return Superposition.from_terms(cols, rows, terms)


def state_hash(state: Superposition) -> str:
    return hashlib.sha256(serialize(state)).hexdigest()
