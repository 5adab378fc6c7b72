# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the batched state kernels (see ``_pykernels``)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, rint

cnp.import_array()

BACKEND = "cython"

ctypedef double complex cplx


def apply_1q(cplx[:, ::1] states, int width, int qubit, u, long ctrl_mask=0):
    cdef Py_ssize_t rows = states.shape[0]
    cdef Py_ssize_t dim = states.shape[1]
    cdef long bit = 1 << (width - 1 - qubit)
    cdef cplx u00 = u[0, 0], u01 = u[0, 1], u10 = u[1, 0], u11 = u[1, 1]
    out_arr = np.array(states, copy=True)
    cdef cplx[:, ::1] out = out_arr
    cdef Py_ssize_t r, i, j
    cdef cplx a, b
    with nogil:
        for r in range(rows):
            for i in range(dim):
                if i & bit:
                    continue
                if (i & ctrl_mask) != ctrl_mask:
                    continue
                j = i | bit
                a = states[r, i]
                b = states[r, j]
                out[r, i] = u00 * a + u01 * b
                out[r, j] = u10 * a + u11 * b
    return out_arr


def apply_2q(cplx[:, ::1] states, int width, int q0, int q1, u, long ctrl_mask=0):
    cdef Py_ssize_t rows = states.shape[0]
    cdef Py_ssize_t dim = states.shape[1]
    cdef long b0 = 1 << (width - 1 - q0)
    cdef long b1 = 1 << (width - 1 - q1)
    cdef cplx[:, ::1] m = np.ascontiguousarray(u, dtype=np.complex128)
    out_arr = np.array(states, copy=True)
    cdef cplx[:, ::1] out = out_arr
    cdef Py_ssize_t r, i, k, l
    cdef Py_ssize_t idx[4]
    cdef cplx v[4]
    cdef cplx acc
    with nogil:
        for r in range(rows):
            for i in range(dim):
                if i & (b0 | b1):
                    continue
                if (i & ctrl_mask) != ctrl_mask:
                    continue
                idx[0] = i
                idx[1] = i | b1
                idx[2] = i | b0
                idx[3] = i | b0 | b1
                for k in range(4):
                    v[k] = states[r, idx[k]]
                for k in range(4):
                    acc = 0
                    for l in range(4):
                        acc = acc + m[k, l] * v[l]
                    out[r, idx[k]] = acc
    return out_arr


def canonical_quantize(cplx[:, ::1] states, double tol, bint fix_phase=True,
                       double threshold=1e-9):
    cdef Py_ssize_t rows = states.shape[0]
    cdef Py_ssize_t dim = states.shape[1]
    canon_arr = np.empty((rows, dim), dtype=np.complex128)
    keys_arr = np.empty((rows, 2 * dim), dtype=np.int64)
    cdef cplx[:, ::1] canon = canon_arr
    cdef cnp.int64_t[:, ::1] keys = keys_arr
    cdef Py_ssize_t r, i
    cdef cplx ph, z
    cdef double mod, inv = 1.0 / tol
    with nogil:
        for r in range(rows):
            ph = 1
            if fix_phase:
                for i in range(dim):
                    z = states[r, i]
                    mod = sqrt(z.real * z.real + z.imag * z.imag)
                    if mod > threshold:
                        ph = z.conjugate() / mod
                        break
            for i in range(dim):
                z = states[r, i] * ph
                canon[r, i] = z
                keys[r, 2 * i] = <cnp.int64_t>rint(z.real * inv)
                keys[r, 2 * i + 1] = <cnp.int64_t>rint(z.imag * inv)
    return canon_arr, keys_arr
