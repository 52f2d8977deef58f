# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled reflection-chain kernels; see fallback.py for the shared contract."""

import numpy as np


def fused_forward(double[:, ::1] ut, double[::1] sq, double[:, ::1] h):
    cdef Py_ssize_t mc = ut.shape[0]
    cdef Py_ssize_t n = ut.shape[1]
    cdef Py_ssize_t nb = h.shape[1]
    states_np = np.empty((mc + 1, n, nb))
    coeffs_np = np.empty((mc, nb))
    cdef double[:, :, ::1] states = states_np
    cdef double[:, ::1] coeffs = coeffs_np
    cdef Py_ssize_t i, j, b
    cdef double uji, twoinv
    for i in range(n):
        for b in range(nb):
            states[mc, i, b] = h[i, b]
    for j in range(mc - 1, -1, -1):
        for b in range(nb):
            coeffs[j, b] = 0.0
        for i in range(j, n):
            uji = ut[j, i]
            for b in range(nb):
                coeffs[j, b] += uji * states[j + 1, i, b]
        twoinv = 2.0 / sq[j]
        for b in range(nb):
            coeffs[j, b] *= twoinv
        for i in range(n):
            uji = ut[j, i]
            for b in range(nb):
                states[j, i, b] = states[j + 1, i, b] - coeffs[j, b] * uji
    return states_np, coeffs_np


def fused_backward(double[:, ::1] ut, double[::1] sq, double[:, :, ::1] states,
                   double[:, ::1] coeffs, double[:, ::1] gc,
                   double[:, ::1] g_out, double[:, ::1] gsum_out,
                   double[:, ::1] cc_out):
    cdef Py_ssize_t mc = ut.shape[0]
    cdef Py_ssize_t n = ut.shape[1]
    cdef Py_ssize_t nb = gc.shape[1]
    cdef Py_ssize_t i, j, b
    cdef double uji, twoinv, acc
    for i in range(n):
        for b in range(nb):
            g_out[i, b] = gc[i, b]
    for j in range(mc):
        for b in range(nb):
            cc_out[j, b] = 0.0
        for i in range(j, n):
            uji = ut[j, i]
            for b in range(nb):
                cc_out[j, b] += uji * g_out[i, b]
        twoinv = 2.0 / sq[j]
        for b in range(nb):
            cc_out[j, b] *= twoinv
        for i in range(j, n):
            uji = ut[j, i]
            for b in range(nb):
                g_out[i, b] -= cc_out[j, b] * uji
        for i in range(n):
            acc = 0.0
            for b in range(nb):
                acc += coeffs[j, b] * g_out[i, b] + cc_out[j, b] * states[j + 1, i, b]
            gsum_out[j, i] -= acc


def apply_chain(double[:, ::1] ut, double[::1] sq, double[:, ::1] x):
    cdef Py_ssize_t mc = ut.shape[0]
    cdef Py_ssize_t n = ut.shape[1]
    cdef Py_ssize_t nb = x.shape[1]
    cc_np = np.empty(nb)
    cdef double[::1] cc = cc_np
    cdef Py_ssize_t i, j, b
    cdef double uji, twoinv
    for j in range(mc - 1, -1, -1):
        for b in range(nb):
            cc[b] = 0.0
        for i in range(j, n):
            uji = ut[j, i]
            for b in range(nb):
                cc[b] += uji * x[i, b]
        twoinv = 2.0 / sq[j]
        for b in range(nb):
            cc[b] *= twoinv
        for i in range(j, n):
            uji = ut[j, i]
            for b in range(nb):
                x[i, b] -= cc[b] * uji
    return np.asarray(x)
