"""Numerical study of Fourier multipliers with rapidly oscillating symbols.

The package samples the planar and spatial oscillating symbols, computes
their kernels two independent ways, checks the kernel asymptotics, bounds
the L_p operator norms from below and evaluates the dyadic Besov norms
that bound them from above.
"""

__version__ = "0.1.0"

from .bumps import (  # noqa: E402
    PeriodicPhase,
    SmoothBump,
    SphereCutoff,
    SphericalPhase,
    eval_bump,
    eval_phase_periodic,
    eval_phase_sphere,
    eval_sphere_cutoff,
)
from .errors import ConfigError, CoverageError, OscillintError, ResolutionError  # noqa: E402
from .grid import FOURIER_SIDE, SPACE_SIDE, GridField, GridSpec, load_field, save_field  # noqa: E402
from .scaling import ScalingReport, fit_exponent  # noqa: E402
from .symbol import SymbolSpec, planar_spec, sample_symbol, spatial_spec  # noqa: E402
from .transform import kernel_fft, kernel_reduction_1d, oscillatory_integral_d3, profile_fourier  # noqa: E402

__all__ = [
    "PeriodicPhase", "SmoothBump", "SphereCutoff", "SphericalPhase",
    "eval_bump", "eval_phase_periodic", "eval_phase_sphere", "eval_sphere_cutoff",
    "ConfigError", "CoverageError", "OscillintError", "ResolutionError",
    "FOURIER_SIDE", "SPACE_SIDE", "GridField", "GridSpec", "load_field", "save_field",
    "ScalingReport", "fit_exponent",
    "SymbolSpec", "planar_spec", "sample_symbol", "spatial_spec",
    "kernel_fft", "kernel_reduction_1d", "oscillatory_integral_d3", "profile_fourier",
]
