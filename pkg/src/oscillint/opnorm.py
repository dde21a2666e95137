"""Lower bounds for the L_p operator norm of the planar multiplier.

The test function is the indicator ``f`` of a small ball at the origin;
``||K * f||_p / ||f||_p`` bounds ``||M||_{p->p}`` from below.  The
convolution is computed spectrally on the FFT grid.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from .errors import CoverageError
from .grid import FOURIER_SIDE, SPACE_SIDE, GridField
from .scaling import ScalingReport, fit_exponent
from .symbol import SymbolSpec, planar_spec, sample_symbol
from .transform import kernel_fft

DEFAULT_BALL_RADIUS = 0.01
REGION_R = (0.8, 1.25)
REGION_SLOPE = 0.01


def ball_volume(d: int, radius: float) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1) * radius ** d


def ball_fourier(freq, radius: float, d: int = 2, order: int = 32):
    """Fourier transform of the ball indicator at ``|xi| = freq`` by radial quadrature.

    d = 2: ``2 pi int_0^a J0(2 pi rho |xi|) rho d rho``;
    d = 3: ``4 pi int_0^a sinc(2 rho |xi|) rho^2 d rho``.
    """
    freq = np.asarray(freq, dtype=float)
    # one Gauss-Legendre panel per oscillation of the Bessel factor
    panels = max(1, math.ceil(2.0 * radius * float(np.max(freq, initial=0.0))))
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, radius, panels + 1)
    half = 0.5 * np.diff(edges)
    rho = ((edges[:-1] + half)[:, None] + half[:, None] * t).ravel()
    w = (half[:, None] * w).ravel()
    arg = 2.0 * math.pi * np.multiply.outer(freq, rho)
    if d == 2:
        vals = 2.0 * math.pi * (special.j0(arg) * rho) @ w
    elif d == 3:
        vals = 4.0 * math.pi * (np.sinc(arg / math.pi) * rho ** 2) @ w
    else:
        raise ValueError("d must be 2 or 3")
    return vals


def ball_fourier_closed(freq, radius: float):
    """Planar closed form ``a J1(2 pi a |xi|)/|xi|`` (test oracle)."""
    u = 2 * math.pi * radius * np.abs(np.asarray(freq, dtype=float))
    small = u < 1e-6
    with np.errstate(divide="ignore", invalid="ignore"):
        jinc = np.where(small, 1.0 - u * u / 8.0, 2.0 * special.j1(u) / u)
    return math.pi * radius ** 2 * jinc


def kernel_l1_norm(kernel: GridField, lam: float | None = None) -> float:
    """Riemann sum of ``|K|`` times the cell volume."""
    if kernel.side != SPACE_SIDE:
        raise ValueError("expected a space-side field")
    lam = kernel.lam if lam is None else lam
    if lam is not None and kernel.grid.box_half_side < 2 * abs(lam):
        raise CoverageError("kernel grid does not cover |x| <= 2 lambda")
    return float(_pairwise_sum(np.abs(kernel.samples)) * kernel.grid.cell_volume)


def _pairwise_sum(a: np.ndarray) -> float:
    # numpy's sum is pairwise along contiguous axes; flatten for a fixed order
    return float(np.sum(np.ascontiguousarray(a).ravel()))


def lp_norm(fld: GridField, p: float) -> float:
    if p < 1:
        raise ValueError("p must be >= 1")
    return float((_pairwise_sum(np.abs(fld.samples) ** p) * fld.grid.cell_volume) ** (1.0 / p))


def ball_convolution(symbol: GridField, radius: float = DEFAULT_BALL_RADIUS, workers=None) -> GridField:
    """``K * f`` for the ball indicator ``f``, by multiplying the symbol with ``f^``."""
    if not (0 < radius <= 0.1):
        raise ValueError("radius must lie in (0, 0.1]")
    if symbol.side != FOURIER_SIDE:
        raise ValueError("expected the fourier-side symbol")
    radius_grid = symbol.grid.radius()
    fhat = np.zeros(symbol.grid.shape)
    nz = symbol.samples != 0
    fhat[nz] = ball_fourier(np.broadcast_to(radius_grid, symbol.grid.shape)[nz], radius, symbol.dimension)
    product = GridField(symbol.grid, symbol.samples * fhat, dict(symbol.meta))
    out = kernel_fft(product, workers=workers)
    out.meta["kind"] = "ball_convolution"
    out.meta["ball_radius"] = radius
    return out


def region_mask(kernel: GridField, lam: float) -> np.ndarray:
    """``sqrt(x^2+y^2) in [4 lam/5, 5 lam/4]``, ``|x| < y/100``.

    Only the sector around the positive y axis is kept: that is where the
    angular cutoff is evaluated at ``theta_xy ~ 0``; the mirrored sector
    around ``theta_xy = pi`` carries a negligible kernel.
    """
    x, y = kernel.grid.mesh()
    r = np.hypot(x, y)
    return (r >= REGION_R[0] * lam) & (r <= REGION_R[1] * lam) & (np.abs(x) < REGION_SLOPE * y)


def region_area(lam: float) -> float:
    """Exact area of the region (one sector of the annulus)."""
    half_angle = math.atan(REGION_SLOPE)
    return half_angle * (REGION_R[1] ** 2 - REGION_R[0] ** 2) * lam ** 2


def lp_ratios(lam: float, ps, radius: float = DEFAULT_BALL_RADIUS, spec: SymbolSpec | None = None,
              workers=None) -> dict:
    """``||K*f||_p / ||f||_p`` for several ``p`` from a single convolution.

    For ``p > 2`` the value is taken from the adjoint (symbol conjugated,
    i.e. lambda -> -lambda) at the dual exponent, as duality dictates.
    """
    spec = planar_spec(lam) if spec is None else spec.with_lambda(lam)
    ps = [float(p) for p in ps]
    for p in ps:
        if p < 1:
            raise ValueError("p must be >= 1")
    symbol = sample_symbol(spec)
    conv = ball_convolution(symbol, radius, workers)
    vol = ball_volume(2, radius)
    out = {}
    adj = None
    mask = region_mask(conv, lam)
    for p in ps:
        if p <= 2:
            src, e, source = conv, p, "direct"
        else:
            if adj is None:
                adj = ball_convolution(sample_symbol(spec.with_lambda(-lam)), radius, workers)
            src, e, source = adj, p / (p - 1), "adjoint"
        restricted = (_pairwise_sum(np.abs(src.samples[mask]) ** e) * src.grid.cell_volume) ** (1 / e)
        out[p] = {
            "ratio": lp_norm(src, e) / vol ** (1.0 / e),
            "region_ratio": float(restricted / vol ** (1.0 / e)),
            "source": source,
            "exponent_used": e,
        }
    out["sup_symbol"] = float(np.max(np.abs(symbol.samples)))
    # |K*f| / |f|_1 on the region, expected to be of order 1/lambda
    out["region_min_abs"] = float(np.min(np.abs(conv.samples[mask])) / vol) if mask.any() else 0.0
    return out


def lp_lower_bound(lam: float, p: float, radius: float = DEFAULT_BALL_RADIUS, spec=None) -> float:
    if p < 1:
        raise ValueError("p must be >= 1")
    return lp_ratios(lam, [p], radius, spec)[float(p)]["ratio"]


def lp_ladder(lams, ps=(1.0, 4.0 / 3.0, 2.0), radius: float = DEFAULT_BALL_RADIUS, workers=None) -> dict:
    """Ratios per (lambda, p) and a ScalingReport per p with reference ``|2/p - 1|``."""
    per_lam = {}
    for lam in sorted(lams):
        per_lam[lam] = lp_ratios(lam, ps, radius, workers=workers)
    reports = {}
    for p in ps:
        p = float(p)
        ladder = [(lam, per_lam[lam][p]["ratio"]) for lam in sorted(lams)]
        reports[p] = fit_exponent(ladder, abs(2.0 / p - 1.0), label=f"p={p:g}")
    return {"per_lambda": per_lam, "reports": reports}


def kernel_l1_ladder(lams, workers=None) -> ScalingReport:
    pts = []
    for lam in sorted(lams):
        k = kernel_fft(sample_symbol(planar_spec(lam)), workers=workers)
        pts.append((lam, kernel_l1_norm(k, lam)))
    return fit_exponent(pts, 1.0, label="kernel_l1")
