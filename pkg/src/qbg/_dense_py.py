"""Pure-numpy dense kernel: reference implementation of local gate application.

Used when the compiled extension is unavailable (or forced via QBG_KERNEL=py).
Reshapes the statevector into a rank-n qutrit tensor and contracts the gate
over the target axes.
"""

from __future__ import annotations

import numpy as np


def apply_gate(amps: np.ndarray, gate: np.ndarray, points: tuple[int, ...], n: int) -> np.ndarray:
    """Apply a 3^k x 3^k gate to the listed qutrits of a 3^n statevector.

    points[0] is the most significant trit of the gate index. Returns a new
    array; the input is not modified.
    """
    k = len(points)
    tensor = amps.reshape((3,) * n)
    moved = np.moveaxis(tensor, points, range(k))
    block = np.ascontiguousarray(moved).reshape(3**k, -1)
    block = gate @ block
    restored = np.moveaxis(block.reshape((3,) * n), range(k), points)
    return np.ascontiguousarray(restored).reshape(-1)
