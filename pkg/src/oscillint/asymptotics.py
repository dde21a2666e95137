"""Asymptotic kernel formulas checked against direct quadrature.

Planar case: ``r K(x, y)`` is compared with
``exp(-2 pi i lam theta_xy) Phi(lam/r) chi(-theta_xy)`` over the region
``r/lam in [3/4, 3/2]``, ``|theta_xy| <= 1/10``.

Spatial case: the one-dimensional integral left after the radial and the
``t2`` integrations is compared with its stationary-phase leading term,
and ``|K|`` is scanned over a parallelepiped whose sides grow with lambda.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .scaling import ScalingReport, fit_exponent
from .symbol import SymbolSpec, planar_spec, spatial_spec
from .transform import (
    chart_box,
    kernel_reduction_1d,
    oscillatory_integral_d3,
    reduced_integral,
    rotated_frame,
    sphere_point,
)

DISCREPANCY_BOUND = 0.1
R_RANGE = (0.75, 1.5)
THETA_RANGE = (-0.1, 0.1)


@dataclass
class AsymptoticReport:
    lam: float
    region: dict
    sup_discrepancy: float
    argmax: tuple
    table: np.ndarray = field(repr=False, default=None)
    extras: dict = field(default_factory=dict)

    def to_dict(self, with_table: bool = False) -> dict:
        d = {
            "lambda": float(self.lam),
            "region": self.region,
            "sup_discrepancy": float(self.sup_discrepancy),
            "argmax": [float(a) for a in self.argmax],
            "extras": self.extras,
        }
        if with_table and self.table is not None:
            d["table"] = np.asarray(self.table).tolist()
        return d


def _target(spec: SymbolSpec, r: float, theta: float) -> float:
    return float(spec.radial(spec.lam / r) * spec.angular(-theta))


def lemma1_discrepancy(lam: float, r: float, theta_xy: float, spec: SymbolSpec | None = None,
                       **quad) -> float:
    """``|r K(x, y) - exp(-2 pi i lam theta) Phi(lam/r) chi(-theta)|``.

    ``(x, y) = (r sin theta, r cos theta)`` and ``K`` comes from the 1D
    reduction.
    """
    lo, hi = R_RANGE[0] * lam, R_RANGE[1] * lam
    if not (lo - 1e-12 <= r <= hi + 1e-12):
        raise ValueError(f"r = {r} outside [{lo}, {hi}]")
    if not (THETA_RANGE[0] - 1e-15 <= theta_xy <= THETA_RANGE[1] + 1e-15):
        raise ValueError(f"theta_xy = {theta_xy} outside [-1/10, 1/10]")
    spec = planar_spec(lam) if spec is None else spec.with_lambda(lam)
    x, y = r * math.sin(theta_xy), r * math.cos(theta_xy)
    k = kernel_reduction_1d(spec, x, y, **quad)
    target = np.exp(-2j * math.pi * lam * theta_xy) * _target(spec, r, theta_xy)
    return float(abs(r * k - target))


def _scan_row(spec, r, thetas, quad):
    out = np.empty(thetas.size)
    for j, th in enumerate(thetas):
        # |r K - e^{-2 pi i lam th} T| = |J - T|; the unimodular factor drops out
        val, _ = reduced_integral(spec, r, th, **quad)
        out[j] = abs(val - _target(spec, r, th))
    return out


def lemma1_scan(lam: float, n_r: int = 64, n_theta: int = 64, spec: SymbolSpec | None = None,
                workers: int = 1, **quad) -> AsymptoticReport:
    """Sup of the discrepancy over an ``n_r x n_theta`` product grid of the region."""
    if n_r < 16 or n_theta < 16:
        raise ValueError("need n_r, n_theta >= 16")
    spec = planar_spec(lam) if spec is None else spec.with_lambda(lam)
    rs = np.linspace(R_RANGE[0] * lam, R_RANGE[1] * lam, n_r)
    thetas = np.linspace(*THETA_RANGE, n_theta)

    def row(r):
        try:
            return _scan_row(spec, r, thetas, quad)
        except Exception as exc:  # keep the offending node in the message
            raise RuntimeError(f"lemma1 evaluation failed at lambda={lam}, r={r}: {exc}") from exc

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(row, rs))
    else:
        rows = [row(r) for r in rs]
    table = np.vstack(rows)
    i, j = np.unravel_index(int(np.argmax(table)), table.shape)
    region = {"r_over_lambda": list(R_RANGE), "theta_xy": list(THETA_RANGE), "n_r": n_r, "n_theta": n_theta}
    return AsymptoticReport(lam, region, float(table[i, j]), (float(rs[i]), float(thetas[j])), table,
                            {"r_nodes": rs.tolist(), "theta_nodes": thetas.tolist()})


def lemma1_ladder(lams, n_r: int = 64, n_theta: int = 64, spec=None, workers: int = 1, **quad) -> dict:
    """Scan every rung; report sups, monotonicity and the empirical threshold ``lam*``."""
    reports = [lemma1_scan(l, n_r, n_theta, spec, workers, **quad) for l in sorted(lams)]
    sups = [rep.sup_discrepancy for rep in reports]
    below = [rep.lam for rep in reports if rep.sup_discrepancy < DISCREPANCY_BOUND]
    return {
        "reports": reports,
        "sups": sups,
        "threshold_lambda": below[0] if below else None,
        "strictly_decreasing": all(b < a - 1e-4 for a, b in zip(sups, sups[1:])),
    }


# ---------------------------------------------------------------------------
# stationary phase


def stationary_phase_leading(hessian_det: float, psi0_at_0: float, amplitude_at_0: complex,
                             lam: float, n: int) -> complex:
    """Leading term of ``int_{R^n} exp(2 pi i lam psi) a`` at a nondegenerate minimum.

    ``lam^(-n/2) exp(i pi n/4) exp(2 pi i lam psi(0)) a(0) / sqrt(H)``.
    """
    if not hessian_det > 0:
        raise ValueError("Hessian determinant must be positive (nondegenerate minimum)")
    if n < 1:
        raise ValueError("n must be >= 1")
    return complex(lam ** (-n / 2) * np.exp(1j * math.pi * n / 4) * np.exp(2j * math.pi * lam * psi0_at_0)
                   * amplitude_at_0 / math.sqrt(hessian_det))


def gaussian_fixture_exact(lam: float, width: float) -> complex:
    """``int exp(2 pi i lam t^2) exp(-t^2/width^2) dt`` in closed form."""
    a = 1.0 / width ** 2 - 2j * math.pi * lam
    return complex(np.sqrt(math.pi / a))


@dataclass(frozen=True)
class SpatialPoint:
    """Geometry of a d = 3 evaluation point in the rotated chart."""

    x: tuple
    r: float
    alpha1: float
    alpha2: float

    @classmethod
    def of(cls, x):
        x = np.asarray(x, dtype=float)
        _, a1, a2 = rotated_frame(x)
        return cls(tuple(x.tolist()), float(np.linalg.norm(x)), a1, a2)


def psi0(alpha1: float, t3):
    """``psi(0, t3) = 2 - 2 alpha1 cos t3``."""
    return 2.0 - 2.0 * alpha1 * np.cos(t3)


def psi1(alpha2: float, t3=None):
    """``d psi/d t2 (0, t3) = -2 alpha2`` (independent of ``t3``)."""
    return -2.0 * alpha2 if t3 is None else np.full(np.shape(t3), -2.0 * alpha2)


def _radial_weighted(spec: SymbolSpec, rho):
    return np.asarray(rho) ** 2 * spec.radial(rho)


def _slice_cutoff(spec: SymbolSpec, frame, t3):
    zeta = sphere_point(frame, np.zeros_like(t3), t3)
    return spec.angular.of_angle(spec.angular.angle_to_center(zeta))


def reduced_theta3_integral(spec: SymbolSpec, x, order: int = 400) -> complex:
    """``int exp(2 pi i lam psi0(t3)) Phi((lam/r) psi1) chi(0, t3) dt3`` by Gauss-Legendre."""
    frame, a1, a2 = rotated_frame(x)
    r = float(np.linalg.norm(x))
    lo, hi = chart_box(spec.angular.angular_radius, a2)[1]
    t, w = np.polynomial.legendre.leggauss(order)
    t3 = 0.5 * (hi - lo) * t + 0.5 * (hi + lo)
    w = 0.5 * (hi - lo) * w
    amp = _radial_weighted(spec, spec.lam / r * psi1(a2))
    vals = np.exp(2j * math.pi * spec.lam * psi0(a1, t3)) * _slice_cutoff(spec, frame, t3)
    return complex(amp * np.sum(w * vals))


def reduced_theta3_leading(spec: SymbolSpec, x) -> complex:
    frame, a1, a2 = rotated_frame(x)
    r = float(np.linalg.norm(x))
    amp = _radial_weighted(spec, spec.lam / r * psi1(a2)) * _slice_cutoff(spec, frame, np.zeros(1))[0]
    return stationary_phase_leading(2.0 * a1, float(psi0(a1, 0.0)), amp, spec.lam, n=1)


def direction(nu: float, tilt: float = 0.0) -> np.ndarray:
    """Unit vector near ``(0, 1, 0)`` with ``x_1/|x| ~ -nu``."""
    d = np.array([-nu, 1.0, tilt])
    return d / np.linalg.norm(d)


def verify_statphase(lams=(8, 16), directions=None, cap_radius: float = 0.5, nu: float = 0.3,
                     profile_argument: float = 1.0) -> dict:
    """Compare the reduced ``t3`` integral with its leading term along a lambda ladder.

    ``r`` scales with lambda so that the radial factor ``Phi((lam/r) psi1)``
    is evaluated at ``profile_argument`` for every rung.
    """
    if directions is None:
        directions = [direction(nu), direction(nu * 0.95, 0.05), direction(nu * 1.05, -0.05)]
    lams = sorted(float(l) for l in lams)
    rows = []
    for k, d in enumerate(directions):
        d = np.asarray(d, dtype=float)
        for lam in lams:
            spec = spatial_spec(lam, cap_radius)
            r = 2.0 * abs(d[0]) * lam / profile_argument
            x = r * d
            _check = SpatialPoint.of(x)
            if _check.alpha2 == 0:
                raise ValueError("direction with x_1 = 0 is degenerate")
            exact = reduced_theta3_integral(spec, x)
            lead = reduced_theta3_leading(spec, x)
            full = oscillatory_integral_d3(spec, x)
            rows.append({
                "direction": k, "lambda": lam, "r": r, "alpha1": _check.alpha1, "alpha2": _check.alpha2,
                "reduced": [exact.real, exact.imag], "leading": [lead.real, lead.imag],
                "rel_error": abs(exact - lead) / abs(exact),
                "leading_abs": abs(lead), "reduced_abs": abs(exact),
                "r_times_kernel_abs": r * abs(full),
                "leading_phase": float(np.angle(lead)),
            })
    per_dir = {}
    for k in range(len(directions)):
        sub = [row for row in rows if row["direction"] == k]
        errs = [row["rel_error"] for row in sub]
        ratios = [b / a for a, b in zip(errs, errs[1:])]
        lead_fit = _fit_or_pair([(row["lambda"], row["leading_abs"]) for row in sub], -0.5)
        quad_fit = _fit_or_pair([(row["lambda"], row["reduced_abs"]) for row in sub], -0.5)
        err_fit = _fit_or_pair([(row["lambda"], row["rel_error"]) for row in sub], -1.0)
        per_dir[k] = {"error_ratios": ratios, "leading_slope": lead_fit, "reduced_slope": quad_fit,
                      "error_slope": err_fit}
    return {"rows": rows, "per_direction": per_dir, "cap_radius": cap_radius, "nu": nu}


def _fit_or_pair(pts, reference):
    if len(pts) >= 3:
        return fit_exponent(pts, reference).fitted_slope
    (l0, v0), (l1, v1) = pts[0], pts[-1]
    return math.log(v1 / v0) / math.log(l1 / l0)


def statphase_scaling_report(result: dict, direction_index: int = 0, key: str = "leading_abs") -> ScalingReport:
    pts = [(row["lambda"], row[key]) for row in result["rows"] if row["direction"] == direction_index]
    if len(pts) >= 3:
        return fit_exponent(pts, -0.5, label=key)
    slope = _fit_or_pair(pts, -0.5)
    lam0, v0 = pts[0]
    return ScalingReport(pts, slope, math.log(v0) - slope * math.log(lam0), 1.0, -0.5, key)


# ---------------------------------------------------------------------------
# parallelepiped scan


def parallelepiped(lam: float, nu: float = 0.3, arg_range=(0.8, 1.2), lateral: float = 0.09,
                   vertical: float = 0.2):
    """Centre, orthonormal edge directions and edge lengths of the scanned box.

    The long edge follows ``d = (-nu, 1, 0)/|.|`` over the radii where the
    radial factor's argument ``2 nu lam / r`` stays inside ``arg_range``.
    All edge lengths are proportional to lambda.
    """
    d = direction(nu)
    a2 = abs(d[0])
    r_lo, r_hi = 2 * a2 * lam / arg_range[1], 2 * a2 * lam / arg_range[0]
    if not r_hi > r_lo:
        raise ValueError("plateau condition selects an empty r-interval")
    perp = np.array([1.0, nu, 0.0]) / math.hypot(1.0, nu)
    e3 = np.array([0.0, 0.0, 1.0])
    edges = np.stack([d, perp, e3])
    lengths = np.array([r_hi - r_lo, lateral * nu * r_lo, vertical * r_lo])
    centre = 0.5 * (r_lo + r_hi) * d
    return centre, edges, lengths


def parallelepiped_nodes(centre, edges, lengths, n):
    """Node array of shape ``(*n, 3)`` and the per-edge offsets."""
    axes = [np.linspace(-0.5, 0.5, k) * length for k, length in zip(n, lengths)]
    a, b, c = np.meshgrid(*axes, indexing="ij")
    pts = np.asarray(centre) + a[..., None] * edges[0] + b[..., None] * edges[1] + c[..., None] * edges[2]
    return pts, axes


def parallelepiped_scan(lam: float, nu: float = 0.3, cap_radius: float = 0.5, n=(9, 5, 5),
                        workers: int = 1) -> AsymptoticReport:
    """Scan ``|K|`` over the parallelepiped; report ``min |K| lam^(3/2)`` and a phase Lipschitz bound."""
    if nu <= 0 or nu >= math.sin(cap_radius):
        raise ValueError("nu must lie in (0, sin(cap_radius))")
    spec = spatial_spec(lam, cap_radius)
    centre, edges, lengths = parallelepiped(lam, nu)
    pts, axes = parallelepiped_nodes(centre, edges, lengths, n)
    flat = pts.reshape(-1, 3)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            vals = np.array(list(pool.map(lambda p: oscillatory_integral_d3(spec, p), flat)))
    else:
        vals = np.array([oscillatory_integral_d3(spec, p) for p in flat])
    vals = vals.reshape(pts.shape[:3])
    mag = np.abs(vals)
    scaled = mag * lam ** 1.5
    i = np.unravel_index(int(np.argmin(scaled)), scaled.shape)
    reliable = mag >= 1e-3 * lam ** -1.5
    grad = phase_gradient(vals, [ax[1] - ax[0] for ax in axes], reliable)
    region = {
        "centre": centre.tolist(), "edges": edges.tolist(), "lengths": lengths.tolist(),
        "volume": float(np.prod(lengths)), "nu": nu, "cap_radius": cap_radius, "n": list(n),
    }
    extras = {
        "min_scaled_magnitude": float(scaled[i]),
        "argmin": pts[i].tolist(),
        "max_scaled_magnitude": float(scaled.max()),
        "phase_lipschitz": grad,
        "unreliable_nodes": int(np.sum(~reliable)),
    }
    # for this scan sup_discrepancy carries the phase Lipschitz estimate and
    # argmax the node where |K| lam^(3/2) is smallest
    return AsymptoticReport(lam, region, grad, tuple(pts[i].tolist()), vals, extras)


def phase_gradient(vals: np.ndarray, steps, reliable=None) -> float:
    """Bound on the discrete gradient magnitude of ``arg(vals)/(2 pi)``.

    The phase is unwrapped along each grid line; differences touching an
    unreliable node (tiny modulus) are ignored.  Returns the root sum of
    squares of the per-axis maxima.
    """
    if reliable is None:
        reliable = np.ones(vals.shape, dtype=bool)
    comps = []
    for axis, h in enumerate(steps):
        if vals.shape[axis] < 2:
            continue
        ph = np.unwrap(np.angle(vals), axis=axis) / (2 * math.pi)
        diff = np.diff(ph, axis=axis) / h
        ok = np.logical_and(np.take(reliable, range(vals.shape[axis] - 1), axis=axis),
                            np.take(reliable, range(1, vals.shape[axis]), axis=axis))
        d = np.where(ok, diff, 0.0)
        comps.append(np.abs(d))
    return float(math.sqrt(sum(float(np.max(c)) ** 2 for c in comps))) if comps else 0.0
