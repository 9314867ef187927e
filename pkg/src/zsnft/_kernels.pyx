# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: initializedcheck=False
"""Compiled propagation kernels: per-point transfer-matrix accumulation.

Hot loops of the direct O(N*M) pipeline.  Spectral points are independent,
so the outer loop parallelises; each point writes only its own output slot,
which keeps results identical for any thread count.
"""

import numpy as np

from cython.parallel cimport prange


cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex csqrt(double complex)
    double complex ccosh(double complex)
    double complex csinh(double complex)
    double cabs(double complex)

ctypedef double complex cplx

cdef double SERIES_W2 = 1e-6  # |w|^2 threshold matching |w| < 1e-3
cdef cplx IM = 1j


cdef inline void exp_traceless(cplx d, cplx b, cplx c,
                               cplx* m11, cplx* m12, cplx* m21, cplx* m22) noexcept nogil:
    cdef cplx w2 = d * d + b * c
    cdef cplx w, cw, sw
    if cabs(w2) < SERIES_W2:
        cw = 1.0 + w2 / 2.0 + w2 * w2 / 24.0
        sw = 1.0 + w2 / 6.0 + w2 * w2 / 120.0
    else:
        w = csqrt(w2)
        cw = ccosh(w)
        sw = csinh(w) / w
    m11[0] = cw + sw * d
    m12[0] = sw * b
    m21[0] = sw * c
    m22[0] = cw - sw * d


def propagate_magnus(int kind, cplx[:, ::1] params, cplx[::1] zetas,
                     double h, double t1, int num_threads):
    """Exponential-scheme accumulation; kinds 0, 1, 2 as in the fallback."""
    if kind not in (0, 1, 2):
        raise ValueError(f"unknown kernel kind {kind}")
    cdef Py_ssize_t nz = zetas.shape[0]
    cdef Py_ssize_t ns = params.shape[0]
    cdef double t2 = t1 + ns * h
    a = np.empty(nz, dtype=np.complex128)
    b = np.empty(nz, dtype=np.complex128)
    cdef cplx[::1] av = a
    cdef cplx[::1] bv = b
    cdef Py_ssize_t j, k
    cdef cplx z, izh, v1, v2, tmp
    cdef cplx m11, m12, m21, m22
    cdef cplx p11, p12, p21, p22, q11, q12, q21, q22
    cdef int nt = num_threads if num_threads > 0 else 1
    for j in prange(nz, nogil=True, schedule='static', num_threads=nt):
        z = zetas[j]
        izh = IM * z * h
        v1 = cexp(-IM * z * t1)
        v2 = 0.0
        for k in range(ns):
            if kind == 0:
                exp_traceless(-izh, params[k, 0], params[k, 1],
                              &m11, &m12, &m21, &m22)
            elif kind == 1:
                exp_traceless(params[k, 2] - izh,
                              params[k, 0] + izh * params[k, 3],
                              params[k, 1] + izh * params[k, 4],
                              &m11, &m12, &m21, &m22)
            else:
                exp_traceless(-izh / 2.0, params[k, 0], params[k, 1],
                              &p11, &p12, &p21, &p22)
                exp_traceless(-izh / 2.0, params[k, 2], params[k, 3],
                              &q11, &q12, &q21, &q22)
                m11 = p11 * q11 + p12 * q21
                m12 = p11 * q12 + p12 * q22
                m21 = p21 * q11 + p22 * q21
                m22 = p21 * q12 + p22 * q22
            tmp = m11 * v1 + m12 * v2
            v2 = m21 * v1 + m22 * v2
            v1 = tmp
        av[j] = v1 * cexp(IM * z * t2)
        bv[j] = v2 * cexp(-IM * z * t2)
    return a, b


def propagate_poly(cplx[:, :, :, ::1] coeffs, cplx[:, ::1] deltas, cplx[::1] zetas,
                   double h, double t1, double xarg_scale, double pref_scale,
                   int num_threads):
    """Polynomial-scheme accumulation via Horner evaluation per point."""
    cdef Py_ssize_t nz = zetas.shape[0]
    cdef Py_ssize_t ns = coeffs.shape[0]
    cdef Py_ssize_t nc = coeffs.shape[3]
    cdef Py_ssize_t nd = deltas.shape[1]
    if deltas.shape[0] != ns:
        raise ValueError("coefficient and denominator stacks disagree on step count")
    cdef double t2 = t1 + ns * h
    a = np.empty(nz, dtype=np.complex128)
    b = np.empty(nz, dtype=np.complex128)
    cdef cplx[::1] av = a
    cdef cplx[::1] bv = b
    cdef Py_ssize_t j, k, c
    cdef cplx z, x, pref, v1, v2, tmp, den, scale
    cdef cplx m11, m12, m21, m22
    cdef bint has_pref = pref_scale != 0.0
    cdef int nt = num_threads if num_threads > 0 else 1
    for j in prange(nz, nogil=True, schedule='static', num_threads=nt):
        z = zetas[j]
        x = cexp(IM * z * (h * xarg_scale))
        pref = cexp(IM * z * (h * pref_scale)) if has_pref else 1.0
        v1 = cexp(-IM * z * t1)
        v2 = 0.0
        for k in range(ns):
            m11 = coeffs[k, 0, 0, nc - 1]
            m12 = coeffs[k, 0, 1, nc - 1]
            m21 = coeffs[k, 1, 0, nc - 1]
            m22 = coeffs[k, 1, 1, nc - 1]
            for c in range(nc - 2, -1, -1):
                m11 = m11 * x + coeffs[k, 0, 0, c]
                m12 = m12 * x + coeffs[k, 0, 1, c]
                m21 = m21 * x + coeffs[k, 1, 0, c]
                m22 = m22 * x + coeffs[k, 1, 1, c]
            den = deltas[k, nd - 1]
            for c in range(nd - 2, -1, -1):
                den = den * x + deltas[k, c]
            scale = pref / den
            tmp = scale * (m11 * v1 + m12 * v2)
            v2 = scale * (m21 * v1 + m22 * v2)
            v1 = tmp
        av[j] = v1 * cexp(IM * z * t2)
        bv[j] = v2 * cexp(-IM * z * t2)
    return a, b
