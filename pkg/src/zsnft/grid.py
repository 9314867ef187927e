"""Time grid, signal sampling conventions, spectral grid, and shared domain types.

The computational domain [t1, t2] is split into ``ns`` equal steps of width
``h``.  Every step needs its two endpoints and its midpoint, so the stored
node set is the half-step grid ``t_n = t1 + n*h/2`` for ``n = 0..N`` with
``N = 2*ns``; neighbouring steps share endpoint nodes.
"""

from __future__ import annotations

import csv
import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, SignalFileError

_ELL_TOL = 1e-9
_BOUNDARY_RATIO = 1e-12


class Method(enum.Enum):
    """The six supported one-step schemes."""

    ERK34 = "erk34"
    IRK34 = "irk34"
    M12 = "m12"
    M34 = "m34"
    CF24 = "cf24"
    SCF24 = "scf24"

    @classmethod
    def from_string(cls, name: str) -> "Method":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ConfigurationError(f"unknown method {name!r}; expected one of: {valid}") from None

    @property
    def has_fast_pipeline(self) -> bool:
        """True for schemes whose transfer matrix is a matrix polynomial."""
        return self in (Method.ERK34, Method.IRK34, Method.SCF24)

    @property
    def is_exponential(self) -> bool:
        """True for the matrix-exponential schemes (direct pipeline only)."""
        return self in (Method.M12, Method.M34, Method.CF24)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Grid:
    """Equispaced half-step time grid.

    Attributes
    ----------
    t1, t2 : domain boundaries, with ``t2 > t1``.
    h : step size, ``(t2 - t1)/ns``.
    ns : number of steps.
    n : number of half-step intervals, ``2*ns``; the node count is ``n + 1``.
    ell_minus, ell_plus : integer boundary indices ``-t1/h`` and ``t2/h``.
    times : the ``n + 1`` node locations ``t1 + k*h/2``.
    """

    t1: float
    t2: float
    h: float
    ns: int
    n: int
    ell_minus: int
    ell_plus: int
    times: np.ndarray = field(repr=False)


def build_grid(t1: float, t2: float, ns: int) -> Grid:
    """Construct the half-step grid over [t1, t2] with ``ns`` steps.

    Both boundaries must be integer multiples of the resulting step size
    (within 1e-9), otherwise the boundary phase bookkeeping of the
    scattering formulas breaks down.
    """
    if not t2 > t1:
        raise ConfigurationError(f"need t2 > t1, got t1={t1}, t2={t2}")
    if ns < 1:
        raise ConfigurationError(f"need at least one step, got ns={ns}")
    h = (t2 - t1) / ns
    ell_minus_f = -t1 / h
    ell_plus_f = t2 / h
    ell_minus = round(ell_minus_f)
    ell_plus = round(ell_plus_f)
    if abs(ell_minus_f - ell_minus) > _ELL_TOL:
        raise ConfigurationError(
            f"t1={t1} is not an integer multiple of h={h} (t1/h = {-ell_minus_f})"
        )
    if abs(ell_plus_f - ell_plus) > _ELL_TOL:
        raise ConfigurationError(
            f"t2={t2} is not an integer multiple of h={h} (t2/h = {ell_plus_f})"
        )
    n = 2 * ns
    # fused formula, not repeated addition, to avoid drift
    times = t1 + np.arange(n + 1, dtype=float) * (h / 2.0)
    return Grid(
        t1=float(t1),
        t2=float(t2),
        h=h,
        ns=ns,
        n=n,
        ell_minus=ell_minus,
        ell_plus=ell_plus,
        times=_freeze(times),
    )


@dataclass(frozen=True)
class SampledPotential:
    """Step-scaled samples of the signal and its conjugate partner.

    ``Q[k] = h*q(times[k])`` and ``R[k] = kappa*conj(Q[k])``; ``kappa = -1``
    is the focusing sign (unitary propagation on the real spectral line),
    ``kappa = +1`` the defocusing one.  ``boundary_warning`` records whether
    the signal was non-negligible at the left boundary, where the scattering
    normalisation assumes it has decayed.
    """

    Q: np.ndarray
    R: np.ndarray
    kappa: int
    boundary_warning: bool = False


def sample_potential(q, grid: Grid, kappa: int) -> SampledPotential:
    """Sample a signal onto the grid; ``q`` is a callable or an array of node values."""
    if kappa not in (+1, -1):
        raise ConfigurationError(f"kappa must be +1 or -1, got {kappa}")
    if callable(q):
        values = np.asarray([q(t) for t in grid.times], dtype=np.complex128)
    else:
        values = np.asarray(q, dtype=np.complex128)
        if values.shape != (grid.n + 1,):
            raise ValueError(
                f"signal array has {values.shape[0] if values.ndim == 1 else values.shape} "
                f"values, grid has {grid.n + 1} nodes"
            )
    if not np.all(np.isfinite(values.real)) or not np.all(np.isfinite(values.imag)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise ValueError(f"non-finite signal sample at node {bad} (t={grid.times[bad]})")
    Q = grid.h * values
    R = kappa * np.conj(Q)
    qmax = float(np.max(np.abs(Q)))
    boundary = qmax > 0 and abs(Q[0]) > _BOUNDARY_RATIO * qmax
    if boundary:
        warnings.warn(
            f"signal is not negligible at t1 (|q(t1)|/max|q| = {abs(Q[0]) / qmax:.2e}); "
            "scattering coefficients assume a decayed left boundary",
            RuntimeWarning,
            stacklevel=2,
        )
    return SampledPotential(Q=_freeze(Q), R=_freeze(R), kappa=kappa, boundary_warning=boundary)


@dataclass(frozen=True)
class SpectralGrid:
    """Real spectral nodes restricted to the faithful window [-pi/2h, pi/2h]."""

    xi: np.ndarray
    h: float

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        object.__setattr__(self, "xi", _freeze(xi.copy()))
        limit = math.pi / (2.0 * self.h) * (1.0 + 1e-12)
        if xi.size and float(np.max(np.abs(xi))) > limit:
            raise ConfigurationError(
                f"spectral node |xi|={np.max(np.abs(xi)):.6g} outside the faithful window "
                f"[-{limit:.6g}, {limit:.6g}]"
            )


SIGNAL_HEADER = ("t", "re_q", "im_q")


def read_signal_csv(path, grid: Grid) -> np.ndarray:
    """Read a ``t,re_q,im_q`` signal file and check it against the grid.

    The time column must match the constructed grid nodes to within
    ``1e-9*h``; returns the complex node values (unscaled by ``h``).
    """
    rows: list[tuple[float, float, float]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if lineno == 1:
                if tuple(c.strip() for c in row) != SIGNAL_HEADER:
                    raise SignalFileError(
                        f"expected header {','.join(SIGNAL_HEADER)!r}, got {','.join(row)!r}",
                        line=1,
                    )
                continue
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise SignalFileError(f"expected 3 columns, got {len(row)}", line=lineno)
            try:
                rows.append((float(row[0]), float(row[1]), float(row[2])))
            except ValueError as exc:
                raise SignalFileError(f"could not parse row: {exc}", line=lineno) from None
    if len(rows) != grid.n + 1:
        raise SignalFileError(
            f"signal file has {len(rows)} data rows, grid needs {grid.n + 1}"
        )
    t = np.array([r[0] for r in rows])
    if np.any(np.diff(t) <= 0):
        bad = int(np.flatnonzero(np.diff(t) <= 0)[0])
        raise SignalFileError("time column is not strictly increasing", line=bad + 3)
    dev = np.abs(t - grid.times)
    if float(np.max(dev)) > 1e-9 * grid.h:
        bad = int(np.argmax(dev))
        raise SignalFileError(
            f"time node {t[bad]!r} deviates from grid node {grid.times[bad]!r}",
            line=bad + 2,
        )
    return np.array([complex(r[1], r[2]) for r in rows])


def write_signal_csv(path, grid: Grid, values) -> None:
    """Write node values in the ``t,re_q,im_q`` signal format."""
    values = np.asarray(values, dtype=np.complex128)
    if values.shape != (grid.n + 1,):
        raise ValueError(f"need {grid.n + 1} values, got {values.shape}")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SIGNAL_HEADER)
        for t, v in zip(grid.times, values):
            writer.writerow([f"{t:.17g}", f"{v.real:.17g}", f"{v.imag:.17g}"])
