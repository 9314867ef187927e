"""Complex polynomial and 2x2 matrix-polynomial arithmetic.

Products of long factor chains are the performance core of the fast
scattering pipeline: a balanced binary tree of pairwise products, each
product done by pointwise multiplication in the Fourier domain, gives
O(K log^2 K) total coefficient work for K factors of bounded degree.

Coefficient conventions: ``coeffs[j]`` multiplies ``x**j``; trailing zero
coefficients are legal and are never trimmed (the callers track exact
degree bounds themselves).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

#: result lengths below this use direct convolution instead of the FFT
FFT_THRESHOLD = 64


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def _next_pow2(n: int) -> int:
    return 1 << max(n - 1, 0).bit_length() if n > 1 else 1


def fft(values, inverse: bool = False) -> np.ndarray:
    """Radix-2 discrete Fourier transform of a power-of-two length vector.

    Forward: ``X[k] = sum_j x[j] * exp(-2j*pi*j*k/L)``.  The inverse is
    normalised by ``1/L`` so that a round trip is the identity.
    """
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {arr.shape}")
    if not _is_pow2(arr.shape[0]):
        raise ValueError(f"length {arr.shape[0]} is not a power of two")
    return np.fft.ifft(arr) if inverse else np.fft.fft(arr)


@dataclass(frozen=True)
class ComplexPoly:
    """Dense polynomial with complex coefficients; ``degree = len(coeffs) - 1``."""

    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=np.complex128))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @classmethod
    def constant(cls, value: complex) -> "ComplexPoly":
        return cls(np.array([value], dtype=np.complex128))

    def __call__(self, x):
        """Horner evaluation at a scalar or array argument."""
        x = np.asarray(x, dtype=np.complex128)
        acc = np.full_like(x, self.coeffs[-1])
        for c in self.coeffs[-2::-1]:
            acc = acc * x + c
        return acc


ONE = ComplexPoly.constant(1.0)


def poly_add(p: ComplexPoly, q: ComplexPoly) -> ComplexPoly:
    la, lb = p.coeffs.shape[0], q.coeffs.shape[0]
    out = np.zeros(max(la, lb), dtype=np.complex128)
    out[:la] += p.coeffs
    out[:lb] += q.coeffs
    return ComplexPoly(out)


def poly_mul(p: ComplexPoly, q: ComplexPoly) -> ComplexPoly:
    """Coefficient convolution; FFT above ``FFT_THRESHOLD``, direct below.

    Both paths compute the same product; the threshold is a speed knob
    only, and the two paths are required to agree to roundoff.
    """
    la, lb = p.coeffs.shape[0], q.coeffs.shape[0]
    lout = la + lb - 1
    if lout < FFT_THRESHOLD:
        return ComplexPoly(np.convolve(p.coeffs, q.coeffs))
    nfft = _next_pow2(lout)
    fa = np.fft.fft(p.coeffs, nfft)
    fb = np.fft.fft(q.coeffs, nfft)
    return ComplexPoly(np.fft.ifft(fa * fb)[:lout])


@dataclass(frozen=True)
class MatPoly2:
    """2x2 matrix with polynomial entries, all stored at a common length."""

    e11: ComplexPoly
    e12: ComplexPoly
    e21: ComplexPoly
    e22: ComplexPoly

    @property
    def degree(self) -> int:
        return max(e.degree for e in (self.e11, self.e12, self.e21, self.e22))

    @classmethod
    def identity(cls) -> "MatPoly2":
        zero = ComplexPoly.constant(0.0)
        return cls(ONE, zero, zero, ONE)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "MatPoly2":
        """Build from a coefficient tensor of shape (2, 2, L)."""
        return cls(
            ComplexPoly(arr[0, 0]),
            ComplexPoly(arr[0, 1]),
            ComplexPoly(arr[1, 0]),
            ComplexPoly(arr[1, 1]),
        )

    def to_array(self) -> np.ndarray:
        length = max(e.coeffs.shape[0] for e in (self.e11, self.e12, self.e21, self.e22))
        out = np.zeros((2, 2, length), dtype=np.complex128)
        for (i, j), e in (((0, 0), self.e11), ((0, 1), self.e12),
                          ((1, 0), self.e21), ((1, 1), self.e22)):
            out[i, j, : e.coeffs.shape[0]] = e.coeffs
        return out

    def __call__(self, x) -> np.ndarray:
        """Evaluate all entries at a scalar, returning a numeric 2x2 matrix."""
        return np.array(
            [[complex(self.e11(x)), complex(self.e12(x))],
             [complex(self.e21(x)), complex(self.e22(x))]]
        )


def matpoly_mul(a: MatPoly2, b: MatPoly2) -> MatPoly2:
    """Standard 2x2 product with convolution entries; degree bound adds."""
    return MatPoly2(
        poly_add(poly_mul(a.e11, b.e11), poly_mul(a.e12, b.e21)),
        poly_add(poly_mul(a.e11, b.e12), poly_mul(a.e12, b.e22)),
        poly_add(poly_mul(a.e21, b.e11), poly_mul(a.e22, b.e21)),
        poly_add(poly_mul(a.e21, b.e12), poly_mul(a.e22, b.e22)),
    )


def _pair_level_mat(arr: np.ndarray) -> np.ndarray:
    """One tree level: multiply adjacent factor pairs, later factor on the left.

    ``arr`` has shape (K, 2, 2, L); the result stacks ``arr[2i+1] @ arr[2i]``
    for each pair, with a trailing unpaired factor carried through unchanged
    (zero-padded to the new length).
    """
    k, _, _, length = arr.shape
    pairs = k // 2
    lout = 2 * length - 1
    nfft = _next_pow2(lout)
    fa = np.fft.fft(arr[1 : 2 * pairs : 2], n=nfft, axis=-1)
    fb = np.fft.fft(arr[0 : 2 * pairs : 2], n=nfft, axis=-1)
    vals = np.einsum("bikf,bkjf->bijf", fa, fb)
    prod = np.fft.ifft(vals, axis=-1)[..., :lout]
    if k % 2 == 0:
        return prod
    carry = np.zeros((1, 2, 2, lout), dtype=np.complex128)
    carry[..., :length] = arr[-1]
    return np.concatenate([prod, carry], axis=0)


def _pair_level_scalar(arr: np.ndarray) -> np.ndarray:
    """Scalar-polynomial analogue of :func:`_pair_level_mat`; shape (K, L)."""
    k, length = arr.shape
    pairs = k // 2
    lout = 2 * length - 1
    nfft = _next_pow2(lout)
    fa = np.fft.fft(arr[1 : 2 * pairs : 2], n=nfft, axis=-1)
    fb = np.fft.fft(arr[0 : 2 * pairs : 2], n=nfft, axis=-1)
    prod = np.fft.ifft(fa * fb, axis=-1)[..., :lout]
    if k % 2 == 0:
        return prod
    carry = np.zeros((1, lout), dtype=np.complex128)
    carry[..., :length] = arr[-1]
    return np.concatenate([prod, carry], axis=0)


def tree_product_batch(arr: np.ndarray) -> np.ndarray:
    """Ordered product ``arr[K-1] @ ... @ arr[0]`` by balanced pairing.

    Input shape (K, 2, 2, L), output shape (2, 2, L'); the stored length
    grows as pair sums, so L' - 1 is an upper bound on the true degree.
    """
    if arr.ndim != 4 or arr.shape[0] == 0:
        raise ValueError("expected a non-empty factor stack of shape (K, 2, 2, L)")
    work = np.ascontiguousarray(arr, dtype=np.complex128)
    while work.shape[0] > 1:
        work = _pair_level_mat(work)
    return work[0]


def poly_tree_product_batch(arr: np.ndarray) -> np.ndarray:
    """Scalar version of :func:`tree_product_batch`; shape (K, L) to (L',)."""
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("expected a non-empty factor stack of shape (K, L)")
    work = np.ascontiguousarray(arr, dtype=np.complex128)
    while work.shape[0] > 1:
        work = _pair_level_scalar(work)
    return work[0]


def tree_product(factors: Sequence[MatPoly2]) -> MatPoly2:
    """Ordered product of matrix polynomials, last factor leftmost."""
    if len(factors) == 0:
        raise ValueError("cannot form the product of an empty factor list")
    length = max(f.to_array().shape[-1] for f in factors)
    stack = np.zeros((len(factors), 2, 2, length), dtype=np.complex128)
    for idx, f in enumerate(factors):
        a = f.to_array()
        stack[idx, ..., : a.shape[-1]] = a
    return MatPoly2.from_array(tree_product_batch(stack))


def eval_roots_of_unity(p: ComplexPoly, nprime: int) -> np.ndarray:
    """Evaluate ``p`` at ``exp(2j*pi*j/nprime)`` for ``j = 0..nprime-1``.

    Implemented as a zero-padded inverse transform scaled by ``nprime``,
    which matches the positive-frequency orientation of the nodes.
    """
    if nprime < p.degree + 1:
        raise ValueError(
            f"nprime={nprime} is too small for a degree-{p.degree} polynomial"
        )
    if not _is_pow2(nprime):
        raise ValueError(f"nprime={nprime} is not a power of two")
    return np.fft.ifft(p.coeffs, n=nprime) * nprime
