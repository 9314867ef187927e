"""Scattering coefficients of a sampled signal, computed two ways.

The fast pipeline multiplies all one-step polynomial transfer factors in a
balanced tree and evaluates the accumulated polynomials at roots of unity
in O(N log^2 N); the direct pipeline accumulates numeric step matrices per
spectral point in O(N) each, O(N*M) for M points.  In exact arithmetic the
two agree wherever both are defined, which is the backbone cross-check of
this package.

Boundary phases with possibly negative exponents are applied as exact
unit-modulus factors at the evaluation nodes, never as polynomial shifts.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigurationError, SignalFileError
from .grid import Grid, Method, SampledPotential, SpectralGrid
from .integrators import (
    PolyVar,
    cf24_param_batch,
    erk34_coeff_batch,
    irk34_coeff_batch,
    m12_param_batch,
    m34_param_batch,
    scf24_coeff_batch,
)
from .polyalg import (
    ComplexPoly,
    eval_roots_of_unity,
    poly_tree_product_batch,
    tree_product_batch,
)

_DENOM_TOL = 1e-14
_OVERFLOW = 1e300


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class DiscreteScattering:
    """Accumulated scattering polynomials and evaluation metadata.

    ``p1``/``p2`` are the components of the propagated boundary vector,
    ``d`` the accumulated denominator (constant one where the scheme has
    none).  ``prefactor_power`` is the total per-step phase power in the
    variable named by ``var``.
    """

    p1: ComplexPoly
    p2: ComplexPoly
    d: ComplexPoly
    var: PolyVar
    ell_minus: int
    ell_plus: int
    h: float
    method: Method
    prefactor_power: int

    @property
    def ns(self) -> int:
        return self.ell_minus + self.ell_plus


@dataclass(frozen=True)
class ContinuousSpectrum:
    """Arrays of a, b and rho = b/a over a real spectral grid.

    ``nan_count`` is the number of nodes flagged unusable (degenerate
    denominator, vanishing a, or overflow in the direct pipeline);
    flagged nodes carry NaN instead of aborting a sweep.
    """

    xi: np.ndarray
    a: np.ndarray
    b: np.ndarray
    rho: np.ndarray
    nan_count: int = 0

    def __post_init__(self):
        for name in ("xi", "a", "b", "rho"):
            arr = np.asarray(getattr(self, name))
            object.__setattr__(self, name, _freeze(arr.copy()))


def _step_samples(pot: SampledPotential, ns: int):
    q, r = pot.Q, pot.R
    return (
        q[0 : 2 * ns : 2], q[1 : 2 * ns : 2], q[2 : 2 * ns + 1 : 2],
        r[0 : 2 * ns : 2], r[1 : 2 * ns : 2], r[2 : 2 * ns + 1 : 2],
    )


def scatter_fast(method: Method, pot: SampledPotential, grid: Grid) -> DiscreteScattering:
    """Tree-accumulate the polynomial transfer factors of a fast-capable scheme.

    Step k consumes samples 2k, 2k+1, 2k+2; factors multiply in step order
    with later steps on the left.  The propagated vector starts at (1, 0),
    so the product's first column is the polynomial pair.
    """
    if not method.has_fast_pipeline:
        raise ConfigurationError(
            f"method {method.value} has no polynomial transfer matrix; "
            "use the direct pipeline"
        )
    ns = grid.ns
    q0, qm, q1, r0, rm, r1 = _step_samples(pot, ns)
    if method is Method.ERK34:
        coeffs = erk34_coeff_batch(q0, qm, q1, r0, rm, r1)
        dpoly = ComplexPoly.constant(1.0)
        var, pref, bound = PolyVar.Z_SQUARED, -2 * ns, 2 * ns
    elif method is Method.IRK34:
        coeffs, xdelta, _ = irk34_coeff_batch(q0, qm, q1, r0, rm, r1)
        dcoeffs = poly_tree_product_batch(xdelta)
        dpoly = ComplexPoly(dcoeffs[: 2 * ns + 1])
        var, pref, bound = PolyVar.Z_SQUARED, 0, 2 * ns
    else:
        coeffs, dscal = scf24_coeff_batch(q0, qm, q1, r0, rm, r1)
        # fold the per-step scalar denominators into the numerators right
        # away; their plain product underflows for long grids
        coeffs = coeffs / dscal[:, None, None, None]
        dpoly = ComplexPoly.constant(1.0)
        var, pref, bound = PolyVar.Z, -4 * ns, 8 * ns
    total = tree_product_batch(coeffs)[..., : bound + 1]
    return DiscreteScattering(
        p1=ComplexPoly(total[0, 0]),
        p2=ComplexPoly(total[1, 0]),
        d=dpoly,
        var=var,
        ell_minus=grid.ell_minus,
        ell_plus=grid.ell_plus,
        h=grid.h,
        method=method,
        prefactor_power=pref,
    )


def _node_spacing(h: float, mout: int, xarg_scale: float) -> float:
    return (2.0 * math.pi) / ((mout * h) * xarg_scale)


def _next_pow2(n: int) -> int:
    return 1 << max(n - 1, 0).bit_length() if n > 1 else 1


def evaluate_spectrum(ds: DiscreteScattering, mout: int | None = None) -> ContinuousSpectrum:
    """Evaluate the discrete scattering polynomials on the uniform node set.

    The node count defaults to twice (step variable x = z**2) or eight
    times (x = z) the sample count, rounded up to a power of two; node j
    of the output runs over -m/2 .. m/2-1 in ascending spectral order.
    Boundary and prefactor phases are exact integer powers of the node
    phase and are applied in modular integer arithmetic.
    """
    ns = ds.ns
    n = 2 * ns
    if ds.var is PolyVar.Z_SQUARED:
        scale, nominal = 1.0, 2 * n
    else:
        scale, nominal = 0.25, 8 * n
    m = nominal if mout is None else int(mout)
    deg = max(ds.p1.degree, ds.p2.degree, ds.d.degree)
    m = _next_pow2(max(m, deg + 1))
    vals1 = np.fft.fftshift(eval_roots_of_unity(ds.p1, m))
    vals2 = np.fft.fftshift(eval_roots_of_unity(ds.p2, m))
    j = np.arange(-(m // 2), m // 2, dtype=np.int64)
    xi = j * _node_spacing(ds.h, m, scale)

    if ds.var is PolyVar.Z_SQUARED:
        # node phase z_j = exp(1j*pi*j/m)
        unit, modulus = math.pi / m, 2 * m
        power_a = 2 * ns + ds.prefactor_power
        power_b = 2 * (ds.ell_minus - ds.ell_plus) + ds.prefactor_power
    else:
        # node phase z_j = exp(2j*pi*j/m)
        unit, modulus = 2.0 * math.pi / m, m
        power_a = 4 * ns + ds.prefactor_power
        power_b = 4 * (ds.ell_minus - ds.ell_plus) + ds.prefactor_power
    phase_a = np.exp(1j * unit * ((j * power_a) % modulus))
    phase_b = np.exp(1j * unit * ((j * power_b) % modulus))

    nan = complex(np.nan, np.nan)
    if ds.d.degree == 0:
        dval = ds.d.coeffs[0]
        if abs(dval) < _DENOM_TOL:
            raise ConfigurationError("constant denominator polynomial is degenerate")
        a = phase_a * vals1 / dval
        b = phase_b * vals2 / dval
    else:
        dvals = np.fft.fftshift(eval_roots_of_unity(ds.d, m))
        bad = np.abs(dvals) < _DENOM_TOL
        safe = np.where(bad, 1.0, dvals)
        a = np.where(bad, nan, phase_a * vals1 / safe)
        b = np.where(bad, nan, phase_b * vals2 / safe)
    rho = _reflection_values(a, b)
    return ContinuousSpectrum(
        xi=xi, a=a, b=b, rho=rho, nan_count=int(np.count_nonzero(~np.isfinite(rho)))
    )


def _reflection_values(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    nan = complex(np.nan, np.nan)
    with np.errstate(invalid="ignore"):
        tiny = np.abs(a) < _DENOM_TOL
    safe = np.where(tiny, 1.0, a)
    return np.where(tiny, nan, b / safe)


def scatter_direct(method: Method, pot: SampledPotential, grid: Grid, zetas,
                   num_threads: int | None = None) -> ContinuousSpectrum:
    """Accumulate numeric one-step matrices at each requested spectral point.

    Works for all six schemes; the polynomial schemes are evaluated by
    Horner at each point, which makes this the O(N^2) reference path for
    the fast pipeline.  Points whose propagation overflows are flagged
    NaN rather than aborting (only reachable far off the real axis).
    """
    z = np.atleast_1d(np.asarray(zetas, dtype=np.complex128))
    ns = grid.ns
    q0, qm, q1, r0, rm, r1 = _step_samples(pot, ns)
    if method.is_exponential:
        kind = {Method.M12: 0, Method.M34: 1, Method.CF24: 2}[method]
        if method is Method.M12:
            params = m12_param_batch(qm, rm)
        elif method is Method.M34:
            params = m34_param_batch(q0, qm, q1, r0, rm, r1)
        else:
            params = cf24_param_batch(q0, qm, q1, r0, rm, r1)
        a, b = kernels.propagate_magnus(kind, params, z, grid.h, grid.t1, num_threads)
    else:
        if method is Method.ERK34:
            coeffs = erk34_coeff_batch(q0, qm, q1, r0, rm, r1)
            deltas = np.ones((ns, 1), dtype=np.complex128)
            scale, pref = 1.0, -1.0
        elif method is Method.IRK34:
            coeffs, deltas, _ = irk34_coeff_batch(q0, qm, q1, r0, rm, r1)
            scale, pref = 1.0, 0.0
        else:
            coeffs, dscal = scf24_coeff_batch(q0, qm, q1, r0, rm, r1)
            deltas = dscal[:, None]
            scale, pref = 0.25, -1.0
        a, b = kernels.propagate_poly(coeffs, deltas, z, grid.h, grid.t1,
                                      scale, pref, num_threads)
    with np.errstate(invalid="ignore", over="ignore"):
        bad = (~np.isfinite(a)) | (~np.isfinite(b)) \
            | (np.abs(a) > _OVERFLOW) | (np.abs(b) > _OVERFLOW)
    if np.any(bad):
        nan = complex(np.nan, np.nan)
        a = np.where(bad, nan, a)
        b = np.where(bad, nan, b)
    rho = _reflection_values(a, b)
    return ContinuousSpectrum(
        xi=z.real.astype(float), a=a, b=b, rho=rho,
        nan_count=int(np.count_nonzero(~np.isfinite(rho))),
    )


def reflection(spec: ContinuousSpectrum) -> ContinuousSpectrum:
    """Fill rho = b/a, NaN where a is numerically zero."""
    rho = _reflection_values(spec.a, spec.b)
    return ContinuousSpectrum(
        xi=spec.xi, a=spec.a, b=spec.b, rho=rho,
        nan_count=int(np.count_nonzero(~np.isfinite(rho))),
    )


def principal_branch_nodes(grid: Grid) -> SpectralGrid:
    """The n+1 uniform nodes spanning the faithful window [-pi/2h, pi/2h].

    These are exactly the nodes of the default fast-pipeline output that
    fall inside the window, so restriction is float-for-float consistent.
    """
    n = grid.n
    spacing = _node_spacing(grid.h, 2 * n, 1.0)
    j = np.arange(-(n // 2), n // 2 + 1, dtype=np.int64)
    return SpectralGrid(xi=j * spacing, h=grid.h)


def restrict_to_principal(spec: ContinuousSpectrum, h: float) -> ContinuousSpectrum:
    """Keep only nodes inside the faithful window of step size h."""
    limit = math.pi / (2.0 * h) * (1.0 + 1e-12)
    mask = np.abs(spec.xi) <= limit
    rho = spec.rho[mask]
    return ContinuousSpectrum(
        xi=spec.xi[mask], a=spec.a[mask], b=spec.b[mask], rho=rho,
        nan_count=int(np.count_nonzero(~np.isfinite(rho))),
    )


SPECTRUM_HEADER = ("xi", "re_a", "im_a", "re_b", "im_b", "re_rho", "im_rho")


def write_spectrum_csv(path, spec: ContinuousSpectrum) -> None:
    """Write the spectrum in the interchange format, full double precision."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SPECTRUM_HEADER)
        for i in range(spec.xi.shape[0]):
            row = [f"{spec.xi[i]:.17g}"]
            for arr in (spec.a, spec.b, spec.rho):
                row.append(f"{arr[i].real:.17g}")
                row.append(f"{arr[i].imag:.17g}")
            writer.writerow(row)


def read_spectrum_csv(path) -> ContinuousSpectrum:
    """Read a spectrum interchange file back into arrays."""
    xi, a, b, rho = [], [], [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if lineno == 1:
                if tuple(c.strip() for c in row) != SPECTRUM_HEADER:
                    raise SignalFileError(
                        f"expected header {','.join(SPECTRUM_HEADER)!r}", line=1
                    )
                continue
            if not row:
                continue
            if len(row) != 7:
                raise SignalFileError(f"expected 7 columns, got {len(row)}", line=lineno)
            try:
                vals = [float(c) for c in row]
            except ValueError as exc:
                raise SignalFileError(f"could not parse row: {exc}", line=lineno) from None
            xi.append(vals[0])
            a.append(complex(vals[1], vals[2]))
            b.append(complex(vals[3], vals[4]))
            rho.append(complex(vals[5], vals[6]))
    rho_arr = np.asarray(rho, dtype=np.complex128)
    return ContinuousSpectrum(
        xi=np.asarray(xi), a=np.asarray(a, dtype=np.complex128),
        b=np.asarray(b, dtype=np.complex128), rho=rho_arr,
        nan_count=int(np.count_nonzero(~np.isfinite(rho_arr))),
    )
