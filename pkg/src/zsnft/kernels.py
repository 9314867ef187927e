"""Kernel dispatch: compiled extension when available, numpy fallback otherwise.

Set ``NFT_PURE_PYTHON=1`` to force the fallback; ``NFT_THREADS`` caps the
worker count of the compiled kernels.
"""

from __future__ import annotations

import os

import numpy as np

_force_py = os.environ.get("NFT_PURE_PYTHON", "").strip() not in ("", "0")

if _force_py:
    from . import _kernels_py as _impl

    USING_COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        USING_COMPILED = True
    except ImportError:
        from . import _kernels_py as _impl

        USING_COMPILED = False


def thread_count(requested: int | None = None) -> int:
    """Worker count: explicit request, else NFT_THREADS, else the CPU count."""
    if requested is not None and requested > 0:
        limit = requested
    else:
        env = os.environ.get("NFT_THREADS", "").strip()
        if env:
            try:
                limit = max(1, int(env))
            except ValueError:
                limit = 1
        else:
            limit = os.cpu_count() or 1
    return limit


def propagate_magnus(kind: int, params, zetas, h: float, t1: float,
                     num_threads: int | None = None):
    params = np.ascontiguousarray(params, dtype=np.complex128)
    zetas = np.ascontiguousarray(zetas, dtype=np.complex128)
    return _impl.propagate_magnus(kind, params, zetas, float(h), float(t1),
                                  thread_count(num_threads))


def propagate_poly(coeffs, deltas, zetas, h: float, t1: float,
                   xarg_scale: float, pref_scale: float,
                   num_threads: int | None = None):
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    deltas = np.ascontiguousarray(deltas, dtype=np.complex128)
    zetas = np.ascontiguousarray(zetas, dtype=np.complex128)
    return _impl.propagate_poly(coeffs, deltas, zetas, float(h), float(t1),
                                float(xarg_scale), float(pref_scale),
                                thread_count(num_threads))
