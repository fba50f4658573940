"""Relativistic two-particle superradiance pipeline.

The package follows the computation end to end: a retarded coherence
kernel evaluated by adaptive quadrature (``kernel``), coupled propagator
equations integrated along the decay clock (``propagators``), density
matrix diagonals and the emission rate assembled by convolution
(``density``), a velocity-coherence scan with width extraction
(``coherence``), and the single-particle Doppler line shape
(``spectrum``).  ``validate`` bundles the cross-checks the physics must
satisfy and ``cli`` exposes everything as subcommands.
"""

__version__ = "0.1.0"

from .coherence import (
    CoherenceScan,
    HalfMaximumNotBracketedError,
    default_delta_grid,
    fwhm_from_scan,
    g_metric,
    scan_fwhm,
)
from .density import (
    BlockSet,
    DensityTransient,
    assemble_density,
    build_blocks,
    emission_transient,
    independent_rate,
    trapezoid_convolution,
)
from .kernel import (
    DEFAULT_TOL,
    KernelQuadratureError,
    KernelTable,
    build_kernel_table,
    eval_kernel,
    half_max_crossing,
    kernel_beta0_closed_form,
    kernel_sq_profile,
    self_energy_angular_integral,
)
from .params import (
    DEFAULT_DQ,
    DEFAULT_Q_MAX,
    ParameterError,
    QGrid,
    SampleParams,
    beta_from_gamma,
    default_grid,
    make_params,
    q_from_time,
)
from .propagators import PropagatorSet, analytic_solution, integrate_rk4
from .spectrum import (
    ORIENTATIONS,
    EmissionConfig,
    angular_factors,
    default_omega_window,
    detuning,
    doppler_peak,
    emission_amplitude,
    line_shape,
    survival_probability,
)
from .validate import CheckResult, ValidationConfig, run_checks

__all__ = [
    "__version__",
    "BlockSet",
    "CheckResult",
    "CoherenceScan",
    "DEFAULT_DQ",
    "DEFAULT_Q_MAX",
    "DEFAULT_TOL",
    "DensityTransient",
    "EmissionConfig",
    "HalfMaximumNotBracketedError",
    "KernelQuadratureError",
    "KernelTable",
    "ORIENTATIONS",
    "ParameterError",
    "PropagatorSet",
    "QGrid",
    "SampleParams",
    "ValidationConfig",
    "analytic_solution",
    "angular_factors",
    "assemble_density",
    "beta_from_gamma",
    "build_blocks",
    "build_kernel_table",
    "default_delta_grid",
    "default_grid",
    "default_omega_window",
    "detuning",
    "doppler_peak",
    "emission_amplitude",
    "emission_transient",
    "eval_kernel",
    "fwhm_from_scan",
    "g_metric",
    "half_max_crossing",
    "independent_rate",
    "integrate_rk4",
    "kernel_beta0_closed_form",
    "kernel_sq_profile",
    "line_shape",
    "make_params",
    "q_from_time",
    "run_checks",
    "scan_fwhm",
    "self_energy_angular_integral",
    "survival_probability",
    "trapezoid_convolution",
]
