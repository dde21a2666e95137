"""Oscillating multiplier symbols sampled on regular frequency grids.

Two constructions are provided:

* planar (d = 2): ``exp(i lam phi(theta)) chi(theta) Phi(rho) / rho`` in polar
  coordinates ``xi = rho cos(theta)``, ``eta = rho sin(theta)``;
* spatial (d = 3): ``exp(2 pi i lam phi(zeta)) Phi(|xi|) chi(zeta)`` with
  ``zeta = xi/|xi|`` and ``phi(zeta) = 2 - 2 zeta_1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bumps import (
    PeriodicPhase,
    SmoothBump,
    SphereCutoff,
    SphericalPhase,
    default_angular_bump,
    default_radial_bump,
)
from .errors import ResolutionError
from .grid import FOURIER_SIDE, GridField, GridSpec

PLAIN = "plain"  # exp(i lam phi)
TWO_PI = "two_pi"  # exp(2 pi i lam phi)

DEFAULT_BOX_HALF_SIDE = 2.0
DEFAULT_POINTS_PER_WAVELENGTH = 8.0  # h <= 1/(8 lam)
DEFAULT_CAP_RADIUS = 0.5


@dataclass(frozen=True)
class SymbolSpec:
    dimension: int
    lam: float
    radial: SmoothBump = field(default_factory=default_radial_bump)
    angular: object = None
    phase: object = None
    phase_convention: str = None

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise ValueError("dimension must be 2 or 3")
        if not math.isfinite(self.lam):
            raise ValueError("lambda must be finite")
        if self.dimension == 2:
            defaults = (default_angular_bump(), PeriodicPhase(), PLAIN)
        else:
            defaults = (SphereCutoff(3, DEFAULT_CAP_RADIUS), SphericalPhase(3), TWO_PI)
        for name, value in zip(("angular", "phase", "phase_convention"), defaults):
            if getattr(self, name) is None:
                object.__setattr__(self, name, value)
        expected = PLAIN if self.dimension == 2 else TWO_PI
        if self.phase_convention != expected:
            raise ValueError(f"dimension {self.dimension} uses the {expected!r} phase convention")
        if self.dimension == 2 and not isinstance(self.angular, SmoothBump):
            raise ValueError("planar symbol needs a SmoothBump angular cutoff")
        if self.dimension == 3 and not isinstance(self.angular, SphereCutoff):
            raise ValueError("spatial symbol needs a SphereCutoff")

    @property
    def phase_factor(self) -> float:
        """Multiplier of ``lam * phi`` inside the exponential."""
        return 1.0 if self.phase_convention == PLAIN else 2.0 * math.pi

    def with_lambda(self, lam: float) -> "SymbolSpec":
        return SymbolSpec(self.dimension, lam, self.radial, self.angular, self.phase, self.phase_convention)

    def max_phase_gradient(self) -> float:
        """Upper bound for ``|grad (phase_factor * lam * phi)| / |lam|`` on the support."""
        rho_min = self.radial.support_lo
        if self.dimension == 2:
            # the angular cutoff keeps us inside the linear window of phi
            return self.phase.linear_slope / rho_min
        return 2.0 * self.phase_factor * math.sin(self.angular.angular_radius) / rho_min

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "lambda": self.lam,
            "radial": self.radial.to_dict(),
            "angular": self.angular.to_dict(),
            "phase": self.phase.to_dict(),
            "phase_convention": self.phase_convention,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SymbolSpec":
        dim = int(d["dimension"])
        radial = SmoothBump.from_dict(d["radial"]) if "radial" in d else default_radial_bump()
        angular = phase = None
        if "angular" in d:
            angular = SmoothBump.from_dict(d["angular"]) if dim == 2 else SphereCutoff.from_dict(d["angular"])
        if "phase" in d:
            phase = PeriodicPhase.from_dict(d["phase"]) if dim == 2 else SphericalPhase(**d["phase"])
        return cls(dim, float(d["lambda"]), radial, angular, phase, d.get("phase_convention"))


def planar_spec(lam: float, **kw) -> SymbolSpec:
    return SymbolSpec(2, lam, **kw)


def spatial_spec(lam: float, cap_radius: float = DEFAULT_CAP_RADIUS, **kw) -> SymbolSpec:
    return SymbolSpec(3, lam, angular=SphereCutoff(3, cap_radius), **kw)


def points_for(lam: float, box_half_side: float = DEFAULT_BOX_HALF_SIDE,
               points_per_wavelength: float = DEFAULT_POINTS_PER_WAVELENGTH) -> int:
    """Smallest power of two with ``h = 2L/N <= 1/(points_per_wavelength * lam)``."""
    need = 2.0 * box_half_side * points_per_wavelength * max(abs(lam), 1.0)
    return 1 << max(3, math.ceil(math.log2(need - 1e-9)))


def grid_for(spec: SymbolSpec, box_half_side: float = DEFAULT_BOX_HALF_SIDE,
             points_per_wavelength: float = DEFAULT_POINTS_PER_WAVELENGTH) -> GridSpec:
    n = points_for(spec.lam, box_half_side, points_per_wavelength)
    return GridSpec(spec.dimension, box_half_side, n, FOURIER_SIDE)


def check_resolution(spec: SymbolSpec, grid: GridSpec,
                     points_per_wavelength: float = DEFAULT_POINTS_PER_WAVELENGTH,
                     gradient: float | None = None) -> float:
    """Validate the grid against the spacing rule; return the phase-increment bound.

    The returned number bounds the change of the symbol's phase between
    neighbouring nodes (radians).  Grids are rejected when the spacing
    exceeds ``1/(points_per_wavelength * |lam|)`` or when that bound
    reaches pi.
    """
    if grid.side != FOURIER_SIDE:
        raise ValueError("symbols live on the fourier side")
    if grid.dimension != spec.dimension:
        raise ValueError("grid and symbol dimensions differ")
    if grid.box_half_side < spec.radial.support_hi:
        raise ResolutionError(f"box half side {grid.box_half_side} does not cover the support")
    lam = abs(spec.lam)
    gradient = spec.max_phase_gradient() if gradient is None else gradient
    increment = grid.spacing * gradient * lam
    if lam > 0 and grid.spacing > 1.0 / (points_per_wavelength * lam) * (1 + 1e-12):
        raise ResolutionError(
            f"grid spacing {grid.spacing:.4g} exceeds 1/({points_per_wavelength:g}*lambda) "
            f"= {1.0 / (points_per_wavelength * lam):.4g}"
        )
    if increment >= math.pi:
        raise ResolutionError(f"phase increment bound {increment:.3f} rad >= pi")
    return increment


def _planar_values(spec: SymbolSpec, xi, eta, lam):
    rho = np.hypot(xi, eta)
    theta = np.arctan2(eta, xi)
    radial = spec.radial(rho)
    with np.errstate(divide="ignore", invalid="ignore"):
        amp = np.where(radial != 0, radial / rho, 0.0) * spec.angular(theta)
    out = np.zeros(amp.shape, dtype=complex)
    nz = amp != 0
    out[nz] = np.exp(1j * (spec.phase_factor * lam) * spec.phase(theta[nz])) * amp[nz]
    return out


def sample_symbol(spec: SymbolSpec, grid: GridSpec | None = None,
                  points_per_wavelength: float = DEFAULT_POINTS_PER_WAVELENGTH) -> GridField:
    """Sample the symbol on a centred fourier-side grid (default: the resolution rule)."""
    if grid is None:
        grid = grid_for(spec, points_per_wavelength=points_per_wavelength)
    increment = check_resolution(spec, grid, points_per_wavelength)
    ax = grid.axis()
    if spec.dimension == 2:
        xi, eta = np.meshgrid(ax, ax, indexing="ij")
        samples = _planar_values(spec, xi, eta, spec.lam)
    else:
        samples = _sample_spatial(spec, ax)
    meta = {"lambda": spec.lam, "kind": "symbol", "phase_increment_bound": increment}
    return GridField(grid, samples, meta)


def spatial_values(spec: SymbolSpec, xi):
    """Symbol values at points ``xi`` of shape ``(..., 3)``."""
    xi = np.asarray(xi, dtype=float)
    rho = np.linalg.norm(xi, axis=-1)
    out = np.zeros(rho.shape, dtype=complex)
    radial = spec.radial(rho)
    nz = radial != 0
    zeta = xi[nz] / rho[nz, None]
    cut = spec.angular.of_angle(spec.angular.angle_to_center(zeta))
    phase = 2.0 - 2.0 * zeta[:, 0]
    out[nz] = np.exp(1j * spec.phase_factor * spec.lam * phase) * radial[nz] * cut
    return out


def _sample_spatial(spec: SymbolSpec, ax) -> np.ndarray:
    n = ax.size
    out = np.zeros((n, n, n), dtype=complex)
    eps = spec.angular.angular_radius
    # the cap about e1 forces xi_1 >= rho_min cos(eps) > 0 and |xi_perp| <= rho_max sin(eps)
    i_keep = np.nonzero(ax >= spec.radial.support_lo * math.cos(eps) - 1e-12)[0]
    t_keep = np.nonzero(np.abs(ax) <= spec.radial.support_hi * math.sin(eps) + 1e-12)[0]
    t0, t1 = t_keep[0], t_keep[-1] + 1
    b, c = np.meshgrid(ax[t0:t1], ax[t0:t1], indexing="ij")
    for i in i_keep:
        pts = np.stack([np.full_like(b, ax[i]), b, c], axis=-1)
        out[i, t0:t1, t0:t1] = spatial_values(spec, pts)
    return out


def angular_multiplier(spec: SymbolSpec, lam: float | None = None, with_cutoff: bool = False):
    """Zero-order homogeneous multiplier ``m(xi) = exp(i lam phi(xi/|xi|))``.

    The plain convention ``exp(i lam phi)`` is used in every dimension.
    """
    lam = spec.lam if lam is None else lam
    if spec.dimension != 2:
        raise NotImplementedError("homogeneous sampling is implemented for d = 2")

    def m(xi, eta):
        theta = np.arctan2(eta, xi)
        val = np.exp(1j * lam * spec.phase(theta))
        if with_cutoff:
            val = val * spec.angular(theta)
        return val

    return m


def sample_homogeneous_symbol(spec: SymbolSpec, t: float, window: SmoothBump | None = None,
                              grid: GridSpec | None = None, multiplier=None,
                              with_cutoff: bool = False) -> GridField:
    """Sample ``window(|xi|) * m(t xi)`` for the zero-order homogeneous ``m``.

    ``multiplier`` overrides ``m`` (a callable of ``(xi, eta)``), e.g. for
    negative controls that are not homogeneous.
    """
    if not t > 0:
        raise ValueError(f"dilation t must be positive, got {t}")
    window = spec.radial if window is None else window
    if grid is None:
        grid = grid_for(spec)
    slope = spec.phase.max_slope() / window.support_lo
    check_resolution(spec, grid, gradient=slope)
    m = angular_multiplier(spec, with_cutoff=with_cutoff) if multiplier is None else multiplier
    ax = grid.axis()
    xi, eta = np.meshgrid(ax, ax, indexing="ij")
    amp = window(np.hypot(xi, eta))
    samples = np.zeros(amp.shape, dtype=complex)
    nz = amp != 0
    samples[nz] = amp[nz] * m(t * xi[nz], t * eta[nz])
    meta = {"lambda": spec.lam, "kind": "homogeneous_symbol", "t": t}
    return GridField(grid, samples, meta)
