"""Continuous-spectrum nonlinear Fourier transform of sampled signals.

Computes the scattering coefficients a, b and the reflection coefficient
rho = b/a of the Zakharov-Shabat problem for a signal sampled on an
equispaced grid, with six one-step schemes of order 2 to 4, a fast
O(N log^2 N) polynomial pipeline, and an O(N^2) direct pipeline.
"""

from .analytic import (
    ErrorReport,
    SechSpec,
    log_gamma,
    oracle_propagate,
    read_golden_csv,
    rel_error,
    sech_analytic_ab,
    sech_signal,
    write_golden_csv,
)
from .errors import (
    ConfigurationError,
    DegenerateNormError,
    SignalFileError,
    StepSingularityError,
    ZsnftError,
)
from .grid import (
    Grid,
    Method,
    SampledPotential,
    SpectralGrid,
    build_grid,
    read_signal_csv,
    sample_potential,
    write_signal_csv,
)
from .integrators import (
    MagnusStep,
    PolyVar,
    StepFactor,
    exp_traceless_2x2,
    magnus_cf24,
    magnus_m12,
    magnus_m34,
    step_cf24,
    step_erk34,
    step_irk34,
    step_m12,
    step_m34,
    step_scf24,
)
from .kernels import USING_COMPILED
from .polyalg import (
    ComplexPoly,
    MatPoly2,
    eval_roots_of_unity,
    fft,
    matpoly_mul,
    poly_add,
    poly_mul,
    tree_product,
)
from .scattering import (
    ContinuousSpectrum,
    DiscreteScattering,
    evaluate_spectrum,
    principal_branch_nodes,
    read_spectrum_csv,
    reflection,
    restrict_to_principal,
    scatter_direct,
    scatter_fast,
    write_spectrum_csv,
)
from .studies import (
    StudyConfig,
    StudyRow,
    compute_spectrum,
    full_output_nodes,
    principal_spectrum,
    run_convergence,
    run_errmax,
    run_tradeoff,
)

__version__ = "0.1.0"

__all__ = [
    "ComplexPoly",
    "ConfigurationError",
    "ContinuousSpectrum",
    "DegenerateNormError",
    "DiscreteScattering",
    "ErrorReport",
    "Grid",
    "MagnusStep",
    "MatPoly2",
    "Method",
    "PolyVar",
    "SampledPotential",
    "SechSpec",
    "SignalFileError",
    "SpectralGrid",
    "StepFactor",
    "StepSingularityError",
    "StudyConfig",
    "StudyRow",
    "USING_COMPILED",
    "ZsnftError",
    "build_grid",
    "compute_spectrum",
    "eval_roots_of_unity",
    "evaluate_spectrum",
    "exp_traceless_2x2",
    "fft",
    "full_output_nodes",
    "log_gamma",
    "magnus_cf24",
    "magnus_m12",
    "magnus_m34",
    "matpoly_mul",
    "oracle_propagate",
    "poly_add",
    "poly_mul",
    "principal_branch_nodes",
    "principal_spectrum",
    "read_golden_csv",
    "read_signal_csv",
    "read_spectrum_csv",
    "reflection",
    "rel_error",
    "restrict_to_principal",
    "run_convergence",
    "run_errmax",
    "run_tradeoff",
    "sample_potential",
    "scatter_direct",
    "scatter_fast",
    "sech_analytic_ab",
    "sech_signal",
    "step_cf24",
    "step_erk34",
    "step_irk34",
    "step_m12",
    "step_m34",
    "step_scf24",
    "tree_product",
    "write_golden_csv",
    "write_signal_csv",
    "write_spectrum_csv",
]
