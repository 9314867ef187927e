"""Command line front end.

Subcommands: ``convergence``, ``tradeoff``, ``errmax`` (the benchmark
studies), ``compute`` (one spectrum to CSV), and ``oracle`` (generate and
cross-check frozen reference values).  Exit codes: 0 on success, 1 on
configuration or input errors, 2 when a sweep completed with annotated
(failed) rows or a cross-check exceeded its tolerance.

``NFT_THREADS`` caps the kernel worker count.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time

import numpy as np

from .analytic import (
    SechSpec,
    oracle_propagate,
    sech_analytic_ab,
    sech_signal,
    write_golden_csv,
)
from .errors import ConfigurationError, ZsnftError
from .grid import Method, build_grid, read_signal_csv, sample_potential
from .scattering import write_spectrum_csv
from .studies import (
    StudyConfig,
    compute_spectrum,
    plot_study_csv,
    run_convergence,
    run_errmax,
    run_tradeoff,
    write_study_csv,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep argparse from sys.exit(2) on bad flags
        raise ConfigurationError(message)


def _methods_arg(text: str) -> tuple[Method, ...]:
    return tuple(Method.from_string(tok) for tok in text.split(",") if tok.strip())


def _ints_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ConfigurationError(f"expected a comma-separated integer list, got {text!r}")


def _floats_arg(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ConfigurationError(f"expected a comma-separated number list, got {text!r}")


def _add_domain_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t1", type=float, default=-30.0, help="left boundary of the domain")
    p.add_argument("--t2", type=float, default=30.0, help="right boundary of the domain")
    p.add_argument("--kappa", type=int, default=-1, choices=(-1, 1),
                   help="sign in r = kappa*conj(q)")


def _add_study_flags(p: argparse.ArgumentParser) -> None:
    _add_domain_flags(p)
    p.add_argument("--method", type=_methods_arg, default=tuple(Method),
                   metavar="M1,M2,...",
                   help="comma-separated methods (default: all six)")
    p.add_argument("--target", choices=("b", "rho"), default="b",
                   help="coefficient the error is measured on")
    p.add_argument("--out", required=True, help="output directory")


def _build_parser() -> _Parser:
    parser = _Parser(prog="zsnft",
                     description="Continuous-spectrum nonlinear Fourier transform "
                                 "benchmarks and computations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convergence", help="error versus sample count")
    _add_study_flags(p)
    p.add_argument("--amplitude", type=float, default=4.4)
    p.add_argument("--nlist", type=_ints_arg, default=(1024, 2048, 4096),
                   metavar="N1,N2,...", help="ascending sample counts")

    p = sub.add_parser("tradeoff", help="error versus median wall time")
    _add_study_flags(p)
    p.add_argument("--amplitude", type=float, default=4.4)
    p.add_argument("--nlist", type=_ints_arg, default=(1024, 2048, 4096),
                   metavar="N1,N2,...")
    p.add_argument("--repeats", type=int, default=3,
                   help="timing repetitions per cell (median reported)")

    p = sub.add_parser("errmax", help="error versus per-step signal strength")
    _add_study_flags(p)
    p.add_argument("--amplitude", type=_floats_arg, default=(2.4, 4.4, 8.4, 12.4),
                   metavar="A1,A2,...", help="amplitudes sweeping h*max|q|")
    p.add_argument("--nlist", type=_ints_arg, default=(1024,),
                   help="fixed sample count (first entry used)")

    p = sub.add_parser("compute", help="compute one spectrum and write it to CSV")
    _add_domain_flags(p)
    p.add_argument("--method", type=Method.from_string, required=True)
    p.add_argument("--steps", type=int, required=True, help="number of grid steps")
    p.add_argument("--signal", help="signal CSV file (t,re_q,im_q); "
                                    "omit to use the built-in sech signal")
    p.add_argument("--amplitude", type=float, default=4.4,
                   help="built-in signal amplitude (ignored with --signal)")
    p.add_argument("--pipeline", choices=("auto", "fast", "direct"), default="auto")
    p.add_argument("--out", required=True, help="output spectrum CSV")

    p = sub.add_parser("oracle", help="generate cross-checked reference values")
    _add_domain_flags(p)
    p.add_argument("--amplitude", type=float, default=4.4)
    p.add_argument("--steps", type=int, default=512, help="base grid steps")
    p.add_argument("--refine", type=int, default=64, help="oracle grid refinement")
    p.add_argument("--points", type=int, default=16, help="number of spectral points")
    p.add_argument("--ximax", type=float, default=2.0,
                   help="spectral points span [-ximax, ximax]")
    p.add_argument("--target", choices=("a", "b"), default="b")
    p.add_argument("--tol", type=float, default=1e-6,
                   help="allowed relative closed-form/propagation deviation")
    p.add_argument("--out", required=True, help="output reference CSV")
    return parser


def _print_rows(rows) -> None:
    print(f"{'method':8s} {'N':>7s} {'e_rel':>12s} {'time_s':>10s} {'order':>7s}  status")
    for r in rows:
        order = "" if r.observed_order is None else f"{r.observed_order:7.2f}"
        print(f"{r.method.value:8s} {r.n:7d} {r.e_rel:12.4e} {r.wall_time:10.4f} "
              f"{order:>7s}  {r.status}")


def _run_study(args, kind: str) -> int:
    cfg = StudyConfig(
        methods=args.method,
        amplitude=args.amplitude if kind != "errmax" else args.amplitude[0],
        amplitudes=args.amplitude if kind == "errmax" else (),
        kappa=args.kappa,
        t1=args.t1,
        t2=args.t2,
        n_list=args.nlist,
        target=args.target,
        output_dir=args.out,
        repeats=getattr(args, "repeats", 3),
    )
    os.makedirs(args.out, exist_ok=True)
    if kind == "convergence":
        rows = run_convergence(cfg)
        x_col, xlabel = "n", "sample count N"
    elif kind == "tradeoff":
        rows = run_tradeoff(cfg)
        x_col, xlabel = "wall_time_s", "median wall time [s]"
    else:
        rows = run_errmax(cfg)
        x_col, xlabel = "qmax", "h*max|q|"
    csv_path = os.path.join(args.out, f"{kind}.csv")
    svg_path = os.path.join(args.out, f"{kind}.svg")
    write_study_csv(csv_path, rows)
    plot_study_csv(csv_path, svg_path, x_col, xlabel, f"{kind} study")
    _print_rows(rows)
    print(f"wrote {csv_path} and {svg_path}")
    return 0 if all(r.status == "ok" for r in rows) else 2


def _run_compute(args) -> int:
    grid = build_grid(args.t1, args.t2, args.steps)
    if args.signal:
        values = read_signal_csv(args.signal, grid)
        pot = sample_potential(values, grid, args.kappa)
    else:
        pot = sech_signal(SechSpec(amplitude=args.amplitude, kappa=args.kappa), grid)
    spec, wall = compute_spectrum(args.method, pot, grid, pipeline=args.pipeline)
    write_spectrum_csv(args.out, spec)
    print(f"method={args.method.value} N={grid.n} h={grid.h:.6g} "
          f"nodes={spec.xi.shape[0]} nan={spec.nan_count} time={wall:.4f}s")
    print(f"wrote {args.out}")
    return 0


def _run_oracle(args) -> int:
    spec = SechSpec(amplitude=args.amplitude, kappa=args.kappa)
    grid = build_grid(args.t1, args.t2, args.steps)
    limit = math.pi / (2.0 * grid.h)
    if args.ximax > limit:
        raise ConfigurationError(
            f"ximax={args.ximax} is outside the faithful window (max {limit:.4g})"
        )
    xi = np.linspace(-args.ximax, args.ximax, args.points)
    closed = sech_analytic_ab(spec, xi)
    start = time.perf_counter()
    a_prop, b_prop = oracle_propagate(spec, args.t1, args.t2, args.steps, xi,
                                      refine_factor=args.refine, kappa=args.kappa)
    wall = time.perf_counter() - start
    dev_a = np.max(np.abs(a_prop - closed.a) / np.abs(closed.a))
    dev_b = np.max(np.abs(b_prop - closed.b) / np.abs(closed.b))
    dev = float(max(dev_a, dev_b))
    values = closed.a if args.target == "a" else closed.b
    write_golden_csv(
        args.out,
        op=f"sech_analytic_{args.target}",
        params={
            "amplitude": args.amplitude,
            "kappa": args.kappa,
            "t1": args.t1,
            "t2": args.t2,
            "steps": args.steps,
            "refine": args.refine,
            "max_rel_dev": f"{dev:.3e}",
        },
        xi=xi,
        values=values,
    )
    print(f"closed form vs propagation: max relative deviation {dev:.3e} "
          f"(tolerance {args.tol:g}, propagation {wall:.2f}s)")
    print(f"wrote {args.out}")
    if dev > args.tol:
        print("WARNING: deviation exceeds tolerance; values not trustworthy",
              file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command in ("convergence", "tradeoff", "errmax"):
            return _run_study(args, args.command)
        if args.command == "compute":
            return _run_compute(args)
        return _run_oracle(args)
    except (ZsnftError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
