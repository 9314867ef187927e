"""Pure-numpy propagation kernels; fallback for the compiled extension.

Both kernels sweep all spectral points at once per step, so memory is
O(number of points) and the arithmetic is vectorised.  Signatures match
the compiled module exactly; ``num_threads`` is accepted for parity and
ignored (numpy runs the vector ops serially here).
"""

from __future__ import annotations

import numpy as np

_SERIES_W2 = 1e-6  # |w|^2 threshold matching |w| < 1e-3


def _exp_step(d, b, c):
    """Entries of exp([[d, b], [c, -d]]) for conforming arrays."""
    w2 = d * d + b * c
    small = np.abs(w2) < _SERIES_W2
    w = np.sqrt(np.where(small, 1.0, w2))
    cw = np.where(small, 1.0 + w2 / 2.0 + w2 * w2 / 24.0, np.cosh(w))
    sw = np.where(small, 1.0 + w2 / 6.0 + w2 * w2 / 120.0, np.sinh(w) / w)
    return cw + sw * d, sw * b, sw * c, cw - sw * d


def propagate_magnus(kind, params, zetas, h, t1, num_threads=0):
    """Accumulate exponential one-step factors across the grid.

    kind 0: one-point generator, params columns (qm, rm).
    kind 1: fourth-order generator, params columns (g, h, xi, dq6, dr6).
    kind 2: two-exponential scheme, params columns (gp, hp, gm, hm).
    """
    params = np.asarray(params, dtype=np.complex128)
    z = np.asarray(zetas, dtype=np.complex128)
    ns = params.shape[0]
    t2 = t1 + ns * h
    izh = 1j * z * h
    v1 = np.exp(-1j * z * t1)
    v2 = np.zeros_like(v1)
    for k in range(ns):
        p = params[k]
        if kind == 0:
            m11, m12, m21, m22 = _exp_step(-izh, p[0], p[1])
        elif kind == 1:
            m11, m12, m21, m22 = _exp_step(
                p[2] - izh, p[0] + izh * p[3], p[1] + izh * p[4]
            )
        elif kind == 2:
            a11, a12, a21, a22 = _exp_step(-izh / 2.0, p[0], p[1])
            b11, b12, b21, b22 = _exp_step(-izh / 2.0, p[2], p[3])
            m11 = a11 * b11 + a12 * b21
            m12 = a11 * b12 + a12 * b22
            m21 = a21 * b11 + a22 * b21
            m22 = a21 * b12 + a22 * b22
        else:
            raise ValueError(f"unknown kernel kind {kind}")
        v1, v2 = m11 * v1 + m12 * v2, m21 * v1 + m22 * v2
    a = v1 * np.exp(1j * z * t2)
    b = v2 * np.exp(-1j * z * t2)
    return a, b


def propagate_poly(coeffs, deltas, zetas, h, t1, xarg_scale, pref_scale, num_threads=0):
    """Accumulate polynomial transfer factors evaluated per spectral point.

    ``coeffs`` has shape (ns, 2, 2, C) in the step variable
    ``x = exp(1j*zeta*h*xarg_scale)``; ``deltas`` (ns, D) holds denominator
    coefficients in the same variable; each step also applies the phase
    ``exp(1j*zeta*h*pref_scale)``.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    deltas = np.asarray(deltas, dtype=np.complex128)
    z = np.asarray(zetas, dtype=np.complex128)
    ns, _, _, nc = coeffs.shape
    nd = deltas.shape[1]
    t2 = t1 + ns * h
    x = np.exp(1j * z * (h * xarg_scale))
    pref = np.exp(1j * z * (h * pref_scale)) if pref_scale != 0.0 else None
    v1 = np.exp(-1j * z * t1)
    v2 = np.zeros_like(v1)
    for k in range(ns):
        ck = coeffs[k]
        m11 = np.full_like(x, ck[0, 0, nc - 1])
        m12 = np.full_like(x, ck[0, 1, nc - 1])
        m21 = np.full_like(x, ck[1, 0, nc - 1])
        m22 = np.full_like(x, ck[1, 1, nc - 1])
        for c in range(nc - 2, -1, -1):
            m11 = m11 * x + ck[0, 0, c]
            m12 = m12 * x + ck[0, 1, c]
            m21 = m21 * x + ck[1, 0, c]
            m22 = m22 * x + ck[1, 1, c]
        if nd == 1:
            den = deltas[k, 0]
        else:
            den = np.full_like(x, deltas[k, nd - 1])
            for c in range(nd - 2, -1, -1):
                den = den * x + deltas[k, c]
        scale = (pref / den) if pref is not None else (1.0 / den)
        v1, v2 = scale * (m11 * v1 + m12 * v2), scale * (m21 * v1 + m22 * v2)
    a = v1 * np.exp(1j * z * t2)
    b = v2 * np.exp(-1j * z * t2)
    return a, b
