"""One-step propagation builders for the six schemes.

Three schemes (ERK34, IRK34, SCF24) admit transfer matrices whose entries
are polynomials in a unit-circle step variable and therefore support the
fast accumulation pipeline; the step builders for those return a
:class:`StepFactor`.  The other three (M12, M34, CF24) are matrix
exponentials of traceless generators and are evaluated numerically per
spectral point.

All builders take the three raw step samples (start, midpoint, end) of the
scaled signal ``Q = h*q`` and its partner ``R``, keeping them independent
of any grid indexing.  The partner samples are consumed as given rather
than reconstructed as ``kappa*conj(Q)``, so a mismatched pair is caught at
sampling time, not silently repaired here.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import StepSingularityError
from .polyalg import ComplexPoly, MatPoly2

#: below this |w|, cosh(w) and sinh(w)/w use their two-term series
_SERIES_W = 1e-3
_THETA_TOL = 1e-12


class PolyVar(enum.Enum):
    """Meaning of the step variable x of a polynomial transfer factor."""

    Z_SQUARED = "z2"   # x = exp(1j*zeta*h)
    Z = "z"            # x = exp(1j*zeta*h/4)


@dataclass(frozen=True)
class StepFactor:
    """Polynomial one-step transfer factor.

    The step action on the solution vector is
    ``v -> z**prefactor_power * m(x) @ v / delta(x)`` with ``z`` the
    half-step (or quarter-step) phase named by ``var``.  ``delta`` is the
    denominator polynomial (already multiplied by x where the raw
    denominator is a Laurent polynomial, and constant for the schemes that
    have no denominator); ``theta`` is the normalisation constant divided
    out of both numerator and denominator.
    """

    m: MatPoly2
    delta: ComplexPoly
    theta: complex
    var: PolyVar
    prefactor_power: int


@dataclass(frozen=True)
class MagnusStep:
    """Traceless generator(s) of an exponential one-step scheme.

    Single-exponential schemes fill ``generator``; the two-exponential
    scheme fills ``generator_plus`` and ``generator_minus`` (the plus
    factor acts last).  ``q_avg``/``r_avg`` keep the quadrature averages
    the generator was built from.
    """

    generator: np.ndarray | None = None
    generator_plus: np.ndarray | None = None
    generator_minus: np.ndarray | None = None
    q_avg: complex | None = None
    r_avg: complex | None = None
    comm_diag: complex | None = None


# ---------------------------------------------------------------------------
# batch coefficient builders (vectorised over steps); the scalar public
# functions below wrap these with single-element arrays
# ---------------------------------------------------------------------------

def erk34_coeff_batch(q0, qm, q1, r0, rm, r1) -> np.ndarray:
    """Transfer-matrix coefficients of the explicit scheme, shape (K, 2, 2, 3).

    Entries are degree <= 2 polynomials in x = exp(1j*zeta*h); the step
    carries an overall z**-2 phase that is tracked separately.
    """
    q0, qm, q1, r0, rm, r1 = np.broadcast_arrays(q0, qm, q1, r0, rm, r1)
    k = q0.shape[0]
    g = 1.0 + qm * rm / 6.0
    hh = 1.0 + qm * rm / 2.0
    c = np.zeros((k, 2, 2, 3), dtype=np.complex128)
    c[:, 0, 0, 0] = g
    c[:, 0, 0, 1] = (qm * r0 + q1 * rm) / 6.0
    c[:, 0, 0, 2] = qm * q1 * r0 * rm / 24.0
    c[:, 1, 1, 0] = q0 * qm * rm * r1 / 24.0
    c[:, 1, 1, 1] = (q0 * rm + qm * r1) / 6.0
    c[:, 1, 1, 2] = g
    c[:, 0, 1, 0] = q0 * hh / 6.0
    c[:, 0, 1, 1] = 2.0 * qm / 3.0
    c[:, 0, 1, 2] = q1 * hh / 6.0
    c[:, 1, 0, 0] = r1 * hh / 6.0
    c[:, 1, 0, 1] = 2.0 * rm / 3.0
    c[:, 1, 0, 2] = r0 * hh / 6.0
    return c


def _matpoly_batch_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Batched 2x2 polynomial matrix product for short coefficient vectors."""
    k, _, _, la = a.shape
    lb = b.shape[-1]
    out = np.zeros((k, 2, 2, la + lb - 1), dtype=np.complex128)
    for i in range(2):
        for j in range(2):
            for m in range(2):
                for ca in range(la):
                    out[:, i, j, ca : ca + lb] += a[:, i, m, ca, None] * b[:, m, j, :]
    return out


def irk34_coeff_batch(q0, qm, q1, r0, rm, r1):
    """Transfer data of the implicit scheme, normalised by theta.

    Returns ``(m, xdelta, theta)``: numerator coefficients (K, 2, 2, 3),
    denominator-times-x coefficients (K, 3), and the raw normalisation
    constants (K,).  Raises if any step's theta degenerates.
    """
    q0, qm, q1, r0, rm, r1 = np.broadcast_arrays(q0, qm, q1, r0, rm, r1)
    k = q0.shape[0]
    fa = np.zeros((k, 2, 2, 2), dtype=np.complex128)
    fa[:, 0, 0, 0] = 1.0
    fa[:, 0, 0, 1] = q1 * rm / 12.0
    fa[:, 0, 1, 0] = qm / 3.0
    fa[:, 0, 1, 1] = q1 / 6.0
    fa[:, 1, 0, 0] = r1 / 6.0
    fa[:, 1, 0, 1] = rm / 3.0
    fa[:, 1, 1, 0] = r1 * qm / 12.0
    fa[:, 1, 1, 1] = 1.0
    fb = np.zeros((k, 2, 2, 2), dtype=np.complex128)
    fb[:, 0, 0, 0] = 1.0
    fb[:, 0, 0, 1] = r0 * qm / 12.0
    fb[:, 0, 1, 0] = q0 / 6.0
    fb[:, 0, 1, 1] = qm / 3.0
    fb[:, 1, 0, 0] = rm / 3.0
    fb[:, 1, 0, 1] = r0 / 6.0
    fb[:, 1, 1, 0] = q0 * rm / 12.0
    fb[:, 1, 1, 1] = 1.0
    m = _matpoly_batch_mul(fa, fb)
    theta = 1.0 + (q1 * r1) * (qm * rm) / 144.0 - (q1 * r1 + 4.0 * qm * rm) / 36.0
    bad = np.abs(theta) < _THETA_TOL
    if np.any(bad):
        idx = int(np.flatnonzero(bad)[0])
        raise StepSingularityError(
            f"implicit stage solve degenerate, |theta|={abs(theta[idx]):.3e}", idx
        )
    xdelta = np.stack([qm * r1 / 36.0, theta, q1 * rm / 36.0], axis=-1)
    m = m / theta[:, None, None, None]
    xdelta = xdelta / theta[:, None]
    return m, xdelta, theta


def scf24_coeff_batch(q0, qm, q1, r0, rm, r1):
    """Split two-exponential factors, shape (K, 2, 2, 9), plus scalar denominators.

    The numerator is the product of two degree-4 factors in z =
    exp(1j*zeta*h/4); the returned denominators are the per-step scalar
    products of the two splitting constants.  Only kappa=+1 inputs can
    degenerate; the principal square root is used throughout.
    """
    q0, qm, q1, r0, rm, r1 = np.broadcast_arrays(q0, qm, q1, r0, rm, r1)
    gp = (3.0 * q1 + 4.0 * qm - q0) / 12.0
    gm = (3.0 * q0 + 4.0 * qm - q1) / 12.0
    hp = (3.0 * r1 + 4.0 * rm - r0) / 12.0
    hm = (3.0 * r0 + 4.0 * rm - r1) / 12.0

    def factor(g, h):
        gh = g * h
        theta = 1.0 - gh
        bad = np.abs(theta) < _THETA_TOL
        if np.any(bad):
            idx = int(np.flatnonzero(bad)[0])
            raise StepSingularityError(
                f"splitting constant degenerate, |1 - g*h|={abs(theta[idx]):.3e}", idx
            )
        dl = (12.0 - 3.0 * gh) / 16.0
        c = dl / (3.0 * np.sqrt(theta.astype(np.complex128)))
        k = g.shape[0]
        f = np.zeros((k, 2, 2, 5), dtype=np.complex128)
        f[:, 0, 0, 0] = 1.0 - c
        f[:, 0, 0, 2] = gh / 4.0
        f[:, 1, 1, 2] = gh / 4.0
        f[:, 1, 1, 4] = 1.0 - c
        f[:, 0, 1, 1] = g / 2.0
        f[:, 0, 1, 2] = -c * g
        f[:, 0, 1, 3] = g / 2.0
        f[:, 1, 0, 1] = h / 2.0
        f[:, 1, 0, 2] = -c * h
        f[:, 1, 0, 3] = h / 2.0
        return f, dl

    fplus, dplus = factor(gp, hp)
    fminus, dminus = factor(gm, hm)
    m = _matpoly_batch_mul(fplus, fminus)
    return m, (dplus * dminus).astype(np.complex128)


def m12_param_batch(qm, rm) -> np.ndarray:
    """Midpoint samples packed for the one-point exponential scheme, (K, 2)."""
    qm, rm = np.broadcast_arrays(qm, rm)
    return np.ascontiguousarray(np.stack([qm, rm], axis=-1).astype(np.complex128))


def m34_param_batch(q0, qm, q1, r0, rm, r1) -> np.ndarray:
    """Quadrature data for the fourth-order exponential scheme, (K, 5).

    Columns: Simpson averages of Q and R, the commutator diagonal, and the
    two endpoint-difference couplings that multiply 1j*zeta*h.
    """
    q0, qm, q1, r0, rm, r1 = np.broadcast_arrays(q0, qm, q1, r0, rm, r1)
    g = (q0 + 4.0 * qm + q1) / 6.0
    h = (r0 + 4.0 * rm + r1) / 6.0
    xi = ((q1 - q0) * h - (r1 - r0) * g) / 12.0
    dq6 = (q1 - q0) / 6.0
    dr6 = (r0 - r1) / 6.0
    return np.ascontiguousarray(np.stack([g, h, xi, dq6, dr6], axis=-1).astype(np.complex128))


def cf24_param_batch(q0, qm, q1, r0, rm, r1) -> np.ndarray:
    """Weighted averages for the two-exponential scheme, (K, 4).

    Columns: plus-factor Q and R averages, then the minus-factor pair; the
    plus factor multiplies on the left.
    """
    q0, qm, q1, r0, rm, r1 = np.broadcast_arrays(q0, qm, q1, r0, rm, r1)
    gp = (3.0 * q1 + 4.0 * qm - q0) / 12.0
    gm = (3.0 * q0 + 4.0 * qm - q1) / 12.0
    hp = (3.0 * r1 + 4.0 * rm - r0) / 12.0
    hm = (3.0 * r0 + 4.0 * rm - r1) / 12.0
    return np.ascontiguousarray(np.stack([gp, hp, gm, hm], axis=-1).astype(np.complex128))


# ---------------------------------------------------------------------------
# scalar step builders
# ---------------------------------------------------------------------------

def _as1(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=np.complex128))


def step_erk34(q0, qm, q1, r0, rm, r1) -> StepFactor:
    """Explicit fourth-order step as a polynomial transfer factor."""
    c = erk34_coeff_batch(_as1(q0), _as1(qm), _as1(q1), _as1(r0), _as1(rm), _as1(r1))
    return StepFactor(
        m=MatPoly2.from_array(c[0]),
        delta=ComplexPoly.constant(1.0),
        theta=1.0 + 0j,
        var=PolyVar.Z_SQUARED,
        prefactor_power=-2,
    )


def step_irk34(q0, qm, q1, r0, rm, r1) -> StepFactor:
    """Implicit (Lobatto) fourth-order step as a polynomial transfer factor.

    The raw per-step phase z**-2 cancels against the x multiplying the
    denominator, so the stored prefactor power is zero.
    """
    m, xdelta, theta = irk34_coeff_batch(
        _as1(q0), _as1(qm), _as1(q1), _as1(r0), _as1(rm), _as1(r1)
    )
    return StepFactor(
        m=MatPoly2.from_array(m[0]),
        delta=ComplexPoly(xdelta[0]),
        theta=complex(theta[0]),
        var=PolyVar.Z_SQUARED,
        prefactor_power=0,
    )


def step_scf24(q0, qm, q1, r0, rm, r1) -> StepFactor:
    """Split two-exponential step as a degree-8 polynomial transfer factor."""
    m, dscal = scf24_coeff_batch(
        _as1(q0), _as1(qm), _as1(q1), _as1(r0), _as1(rm), _as1(r1)
    )
    return StepFactor(
        m=MatPoly2.from_array(m[0]),
        delta=ComplexPoly.constant(complex(dscal[0])),
        theta=1.0 + 0j,
        var=PolyVar.Z,
        prefactor_power=-4,
    )


def exp_traceless_2x2(mat) -> np.ndarray:
    """Exponential of a traceless 2x2 complex matrix in closed form.

    Uses ``exp(L) = cosh(w) I + sinh(w)/w L`` with ``w**2 = L00**2 +
    L01*L10``; for ``|w| < 1e-3`` the hyperbolic ratios switch to their
    series with two correction terms, which keeps the relative error at
    the 1e-14 level through the branch point.
    """
    mat = np.asarray(mat, dtype=np.complex128)
    if mat.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {mat.shape}")
    norm = float(np.max(np.abs(mat)))
    if abs(mat[0, 0] + mat[1, 1]) > 1e-12 * max(norm, 1e-300):
        raise ValueError(
            f"matrix is not traceless: trace = {mat[0, 0] + mat[1, 1]!r}"
        )
    d, b, c = mat[0, 0], mat[0, 1], mat[1, 0]
    w2 = d * d + b * c
    if abs(w2) < _SERIES_W * _SERIES_W:
        cw = 1.0 + w2 / 2.0 + w2 * w2 / 24.0
        sw = 1.0 + w2 / 6.0 + w2 * w2 / 120.0
    else:
        w = np.sqrt(w2)
        cw = np.cosh(w)
        sw = np.sinh(w) / w
    return np.array([[cw + sw * d, sw * b], [sw * c, cw - sw * d]])


def magnus_m12(qmid, rmid, zeta: complex, h: float) -> MagnusStep:
    """One-point quadrature generator; second-order accurate."""
    gen = np.array(
        [[-1j * zeta * h, qmid], [rmid, 1j * zeta * h]], dtype=np.complex128
    )
    return MagnusStep(generator=gen, q_avg=complex(qmid), r_avg=complex(rmid))


def magnus_m34(q0, qm, q1, r0, rm, r1, zeta: complex, h: float) -> MagnusStep:
    """Three-node quadrature generator with commutator correction; fourth order."""
    p = m34_param_batch(_as1(q0), _as1(qm), _as1(q1), _as1(r0), _as1(rm), _as1(r1))[0]
    g, hh, xi, dq6, dr6 = p
    izh = 1j * zeta * h
    gen = np.array(
        [[xi - izh, g + izh * dq6], [hh + izh * dr6, -xi + izh]], dtype=np.complex128
    )
    return MagnusStep(
        generator=gen, q_avg=complex(g), r_avg=complex(hh), comm_diag=complex(xi)
    )


def magnus_cf24(q0, qm, q1, r0, rm, r1, zeta: complex, h: float) -> MagnusStep:
    """Commutator-free pair of generators; the plus factor acts last."""
    p = cf24_param_batch(_as1(q0), _as1(qm), _as1(q1), _as1(r0), _as1(rm), _as1(r1))[0]
    gp, hp, gm, hm = p
    izh2 = 1j * zeta * h / 2.0
    gen_p = np.array([[-izh2, gp], [hp, izh2]], dtype=np.complex128)
    gen_m = np.array([[-izh2, gm], [hm, izh2]], dtype=np.complex128)
    return MagnusStep(generator_plus=gen_p, generator_minus=gen_m)


def step_m12(qmid, rmid, zeta: complex, h: float) -> np.ndarray:
    """Numeric one-step matrix of the one-point exponential scheme."""
    return exp_traceless_2x2(magnus_m12(qmid, rmid, zeta, h).generator)


def step_m34(q0, qm, q1, r0, rm, r1, zeta: complex, h: float) -> np.ndarray:
    """Numeric one-step matrix of the fourth-order exponential scheme."""
    return exp_traceless_2x2(magnus_m34(q0, qm, q1, r0, rm, r1, zeta, h).generator)


def step_cf24(q0, qm, q1, r0, rm, r1, zeta: complex, h: float) -> np.ndarray:
    """Numeric one-step matrix of the two-exponential scheme."""
    ms = magnus_cf24(q0, qm, q1, r0, rm, r1, zeta, h)
    return exp_traceless_2x2(ms.generator_plus) @ exp_traceless_2x2(ms.generator_minus)
