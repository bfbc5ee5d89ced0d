# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense kernel: gather/scatter application of a local qutrit gate.

Hot loop of the dense oracle. For each offset of the non-target qutrits the
3^k amplitudes addressed by the target strides are gathered, multiplied by
the gate matrix, and scattered back. Gate arity is capped at 6 (dim 729).
"""

import numpy as np

cimport cython


def apply_gate(const double complex[::1] amps,
               const double complex[:, ::1] gate,
               const long long[::1] rest_offsets,
               const long long[::1] local_offsets):
    """Return gate applied to `amps` at the precomputed index offsets."""
    cdef Py_ssize_t dim = local_offsets.shape[0]
    if dim > 729:
        raise ValueError("gate arity above 6 not supported")
    out_arr = np.empty(amps.shape[0], dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef double complex buf[729]
    cdef Py_ssize_t nrest = rest_offsets.shape[0]
    cdef Py_ssize_t i, r, c
    cdef long long base
    cdef double complex acc
    with nogil:
        for i in range(nrest):
            base = rest_offsets[i]
            for c in range(dim):
                buf[c] = amps[base + local_offsets[c]]
            for r in range(dim):
                acc = 0
                for c in range(dim):
                    acc = acc + gate[r, c] * buf[c]
                out[base + local_offsets[r]] = acc
    return out_arr
