"""FFT kernels against the quadrature kernels at grid nodes."""

from __future__ import annotations

import math

import numpy as np

from .asymptotics import direction
from .rng import DEFAULT_SEED, stream
from .symbol import grid_for, planar_spec, sample_symbol, spatial_spec
from .transform import dual_polar, kernel_fft, kernel_reduction_1d, oscillatory_integral_d3

ANNULUS = (0.8, 1.25)
SECTOR = 1.0 / 3.0  # |theta_xy| where the angular cutoff sits on its plateau


def annulus_nodes(kernel, lam: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` distinct grid nodes drawn uniformly (by area) from ``4 lam/5 <= r <= 5 lam/4``."""
    g = kernel.grid
    lo, hi = ANNULUS[0] * lam, ANNULUS[1] * lam
    seen, out = set(), []
    while len(out) < n:
        r = math.sqrt(rng.uniform(lo ** 2, hi ** 2))
        t = rng.uniform(-math.pi, math.pi)
        idx = g.nearest_index((r * math.sin(t), r * math.cos(t)))
        node = g.node(idx)
        if idx in seen or not (lo <= math.hypot(*node) <= hi):
            continue
        seen.add(idx)
        out.append(idx)
    return np.array(out)


def kernel_cross_check(lam: float, n_points: int = 100, seed: int = DEFAULT_SEED, workers=None) -> dict:
    """Compare ``kernel_fft`` with ``kernel_reduction_1d`` on random annulus nodes.

    Inside the sector ``|theta_xy| <= 1/3`` the kernel is of size ``1/lam``
    and the error is relative to the local value; outside it the kernel is
    tiny and the error is measured against ``max |K|`` over the sample.
    """
    spec = planar_spec(lam)
    kern = kernel_fft(sample_symbol(spec), workers=workers)
    rng = stream(seed, f"kernel-cross/lambda={lam!r}")
    idx = annulus_nodes(kern, lam, n_points, rng)
    rows = []
    for i in idx:
        x, y = kern.grid.node(tuple(i))
        ref = kernel_reduction_1d(spec, x, y)
        rows.append((x, y, complex(kern.samples[tuple(i)]), ref))
    scale = max(abs(r[3]) for r in rows)
    errs, in_sector = [], []
    for x, y, k, ref in rows:
        _, th = dual_polar(x, y)
        inside = abs(th) <= SECTOR
        errs.append(abs(k - ref) / (abs(ref) if inside else scale))
        in_sector.append(inside)
    errs = np.array(errs)
    return {
        "lambda": lam,
        "n_points": n_points,
        "grid_points_per_axis": kern.grid.points_per_axis,
        "max_error": float(errs.max()),
        "max_sector_rel_error": float(errs[np.array(in_sector)].max()) if any(in_sector) else None,
        "n_in_sector": int(sum(in_sector)),
        "points": [[r[0], r[1]] for r in rows],
        "fft": [r[2] for r in rows],
        "reduction": [r[3] for r in rows],
        "errors": errs.tolist(),
    }


def spatial_cross_check(lam: float, nu: float = 0.3, cap_radius: float = 0.5,
                        points_per_wavelength: float | None = None, n_points: int = 5, workers=None) -> dict:
    """d = 3: ``kernel_fft`` against chart quadrature at nodes along the direction ``(-nu, 1, 0)``."""
    spec = spatial_spec(lam, cap_radius)
    if points_per_wavelength is None:
        points_per_wavelength = 8.0 if lam <= 8 else 4.0
    grid = grid_for(spec, points_per_wavelength=points_per_wavelength)
    kern = kernel_fft(sample_symbol(spec, grid, points_per_wavelength), workers=workers)
    d = direction(nu)
    radii = np.linspace(2 * nu * lam / 1.2, 2 * nu * lam / 0.8, n_points)
    out = []
    for r in radii:
        node = kern.grid.node(kern.grid.nearest_index(r * d))
        if node[0] == 0:
            continue
        fft_val = complex(kern.samples[kern.grid.nearest_index(node)])
        quad = oscillatory_integral_d3(spec, node)
        out.append({"x": node.tolist(), "fft": [fft_val.real, fft_val.imag], "quad": [quad.real, quad.imag],
                    "rel_error": abs(fft_val - quad) / abs(quad)})
    return {"lambda": lam, "grid_points_per_axis": grid.points_per_axis,
            "points_per_wavelength": points_per_wavelength,
            "max_rel_error": max(p["rel_error"] for p in out), "points": out}
