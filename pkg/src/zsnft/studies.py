"""Benchmark studies: convergence, accuracy-vs-cost trade-off, and the
error growth with per-step signal strength, plus the one-shot spectrum
computation behind the command line front end.

Every study emits a CSV table first and renders its SVG figure from that
file, never from in-memory state, so figures can always be regenerated.
Study cells run serially; the point-level parallelism of the kernels is
where the cores are used, and serial cells keep wall-clock timings clean.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass

import numpy as np

from .analytic import SechSpec, rel_error, sech_analytic_ab, sech_signal
from .errors import ConfigurationError, ZsnftError
from .grid import Grid, Method, SampledPotential, build_grid
from .scattering import (
    ContinuousSpectrum,
    evaluate_spectrum,
    principal_branch_nodes,
    restrict_to_principal,
    scatter_direct,
    scatter_fast,
)
from .svgplot import loglog_plot

DEFAULT_METHODS = tuple(Method)


@dataclass(frozen=True)
class StudyConfig:
    """Shared configuration of the benchmark studies."""

    methods: tuple[Method, ...] = DEFAULT_METHODS
    amplitude: float = 4.4
    kappa: int = -1
    t1: float = -30.0
    t2: float = 30.0
    n_list: tuple[int, ...] = (2**10, 2**11, 2**12)
    target: str = "b"
    output_dir: str = "."
    repeats: int = 3
    amplitudes: tuple[float, ...] = ()

    def __post_init__(self):
        if list(self.n_list) != sorted(self.n_list):
            raise ConfigurationError("n_list must be sorted ascending")
        if any(n < 2 or n % 2 for n in self.n_list):
            raise ConfigurationError("every N must be an even sample count >= 2")
        if self.target not in ("b", "rho"):
            raise ConfigurationError(f"target must be 'b' or 'rho', got {self.target!r}")
        if self.kappa not in (+1, -1):
            raise ConfigurationError(f"kappa must be +1 or -1, got {self.kappa}")


@dataclass
class StudyRow:
    """One (method, configuration) cell of a study table."""

    method: Method
    n: int
    e_rel: float = math.nan
    wall_time: float = math.nan
    observed_order: float | None = None
    amplitude: float | None = None
    qmax: float | None = None
    status: str = "ok"


def _sech_setup(amplitude: float, kappa: int, t1: float, t2: float, n: int):
    grid = build_grid(t1, t2, n // 2)
    pot = sech_signal(SechSpec(amplitude=amplitude, kappa=kappa), grid)
    return grid, pot


def principal_spectrum(method: Method, pot: SampledPotential, grid: Grid,
                       pipeline: str = "auto",
                       num_threads: int | None = None) -> tuple[ContinuousSpectrum, float]:
    """Spectrum on the faithful-window nodes, with the wall time spent.

    Fast-capable methods use the polynomial pipeline (restricted to the
    window) unless ``pipeline='direct'`` forces the per-point path; the
    exponential methods always propagate per point.  Timing covers the
    spectrum computation only.
    """
    if pipeline not in ("auto", "fast", "direct"):
        raise ConfigurationError(f"unknown pipeline {pipeline!r}")
    use_fast = method.has_fast_pipeline and pipeline != "direct"
    if pipeline == "fast" and not method.has_fast_pipeline:
        raise ConfigurationError(
            f"method {method.value} has no polynomial transfer matrix; "
            "use the direct pipeline"
        )
    if use_fast:
        start = time.perf_counter()
        spec = evaluate_spectrum(scatter_fast(method, pot, grid))
        wall = time.perf_counter() - start
        return restrict_to_principal(spec, grid.h), wall
    nodes = principal_branch_nodes(grid).xi
    start = time.perf_counter()
    spec = scatter_direct(method, pot, grid, nodes, num_threads=num_threads)
    wall = time.perf_counter() - start
    return spec, wall


def full_output_nodes(grid: Grid, method: Method) -> np.ndarray:
    """The method's full evaluation node set (what the fast pipeline emits)."""
    if method is Method.SCF24:
        m = 8 * grid.n
        spacing = (2.0 * math.pi) / ((m * grid.h) * 0.25)
    else:
        m = 2 * grid.n
        spacing = (2.0 * math.pi) / ((m * grid.h) * 1.0)
    j = np.arange(-(m // 2), m // 2, dtype=np.int64)
    return j * spacing


def compute_spectrum(method: Method, pot: SampledPotential, grid: Grid,
                     pipeline: str = "auto",
                     num_threads: int | None = None) -> tuple[ContinuousSpectrum, float]:
    """Spectrum on the method's full node set, with the wall time spent."""
    if pipeline not in ("auto", "fast", "direct"):
        raise ConfigurationError(f"unknown pipeline {pipeline!r}")
    if pipeline == "fast" and not method.has_fast_pipeline:
        raise ConfigurationError(
            f"method {method.value} has no polynomial transfer matrix; "
            "use the direct pipeline"
        )
    if method.has_fast_pipeline and pipeline != "direct":
        start = time.perf_counter()
        spec = evaluate_spectrum(scatter_fast(method, pot, grid))
        return spec, time.perf_counter() - start
    nodes = full_output_nodes(grid, method)
    start = time.perf_counter()
    spec = scatter_direct(method, pot, grid, nodes, num_threads=num_threads)
    return spec, time.perf_counter() - start


def _reference_on(grid: Grid, amplitude: float, kappa: int) -> ContinuousSpectrum:
    nodes = principal_branch_nodes(grid).xi
    return sech_analytic_ab(SechSpec(amplitude=amplitude, kappa=kappa), nodes)


def run_convergence(cfg: StudyConfig) -> list[StudyRow]:
    """Error against the closed form over a ladder of sample counts."""
    rows: list[StudyRow] = []
    for method in cfg.methods:
        prev: StudyRow | None = None
        for n in cfg.n_list:
            row = StudyRow(method=method, n=n, amplitude=cfg.amplitude)
            try:
                grid, pot = _sech_setup(cfg.amplitude, cfg.kappa, cfg.t1, cfg.t2, n)
                spec, wall = principal_spectrum(method, pot, grid)
                ref = _reference_on(grid, cfg.amplitude, cfg.kappa)
                row.e_rel = rel_error(spec, ref, cfg.target, h=grid.h).e_rel
                row.wall_time = wall
                if prev is not None and prev.status == "ok" and row.e_rel > 0:
                    row.observed_order = math.log2(prev.e_rel / row.e_rel) / math.log2(
                        n / prev.n
                    )
            except (ZsnftError, ValueError) as exc:
                row.status = str(exc) or type(exc).__name__
            rows.append(row)
            prev = row
    return rows


def run_tradeoff(cfg: StudyConfig) -> list[StudyRow]:
    """Error against median wall time; one warm run, then timed repeats."""
    if cfg.repeats < 3:
        raise ConfigurationError(
            f"trade-off timings need at least 3 repeats, got {cfg.repeats}"
        )
    rows: list[StudyRow] = []
    for method in cfg.methods:
        for n in cfg.n_list:
            row = StudyRow(method=method, n=n, amplitude=cfg.amplitude)
            try:
                grid, pot = _sech_setup(cfg.amplitude, cfg.kappa, cfg.t1, cfg.t2, n)
                spec, _ = principal_spectrum(method, pot, grid)  # warm
                walls = []
                for _ in range(cfg.repeats):
                    spec, wall = principal_spectrum(method, pot, grid)
                    walls.append(wall)
                ref = _reference_on(grid, cfg.amplitude, cfg.kappa)
                row.e_rel = rel_error(spec, ref, cfg.target, h=grid.h).e_rel
                row.wall_time = float(np.median(walls))
            except (ZsnftError, ValueError) as exc:
                row.status = str(exc) or type(exc).__name__
            rows.append(row)
    return rows


def run_errmax(cfg: StudyConfig) -> list[StudyRow]:
    """Error growth with the per-step signal strength h*max|q| at fixed N."""
    amplitudes = cfg.amplitudes or (cfg.amplitude,)
    n = cfg.n_list[0] if cfg.n_list else 2**10
    rows: list[StudyRow] = []
    for method in cfg.methods:
        for amp in amplitudes:
            row = StudyRow(method=method, n=n, amplitude=amp)
            try:
                grid, pot = _sech_setup(amp, cfg.kappa, cfg.t1, cfg.t2, n)
                row.qmax = grid.h * amp
                spec, wall = principal_spectrum(method, pot, grid)
                ref = _reference_on(grid, amp, cfg.kappa)
                row.e_rel = rel_error(spec, ref, cfg.target, h=grid.h).e_rel
                row.wall_time = wall
            except (ZsnftError, ValueError) as exc:
                row.status = str(exc) or type(exc).__name__
            rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# table and figure output
# ---------------------------------------------------------------------------

_COLS = ("method", "n", "amplitude", "qmax", "e_rel", "wall_time_s",
         "observed_order", "status")


def write_study_csv(path, rows: list[StudyRow]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_COLS)
        for r in rows:
            writer.writerow([
                r.method.value,
                r.n,
                "" if r.amplitude is None else f"{r.amplitude:.17g}",
                "" if r.qmax is None else f"{r.qmax:.17g}",
                f"{r.e_rel:.17g}",
                f"{r.wall_time:.17g}",
                "" if r.observed_order is None else f"{r.observed_order:.17g}",
                r.status,
            ])


def read_study_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def plot_study_csv(csv_path, svg_path, x_col: str, xlabel: str, title: str) -> None:
    """Render the study figure from its CSV table (never from memory)."""
    records = read_study_csv(csv_path)
    series = {}
    for rec in records:
        if rec["status"] != "ok":
            continue
        try:
            x = float(rec[x_col])
            y = float(rec["e_rel"])
        except (TypeError, ValueError):
            continue
        series.setdefault(rec["method"], ([], []))
        series[rec["method"]][0].append(x)
        series[rec["method"]][1].append(y)
    data = [(name, xs, ys) for name, (xs, ys) in series.items() if xs]
    if not data:
        return
    loglog_plot(svg_path, data, xlabel, "relative L2 error", title)
