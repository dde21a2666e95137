"""Kernels of the oscillating multipliers, by two independent routes.

``kernel_fft`` discretises the Fourier integral on the full symbol grid.
``kernel_reduction_1d`` (d = 2) and ``oscillatory_integral_d3`` (d = 3)
integrate out the radial variable analytically through the 1D transform
of the radial profile and then integrate the remaining angular variables
by quadrature.  Neither route uses the other.

Fourier transforms follow ``f^(x) = int f(xi) exp(-2 pi i <x, xi>) d xi``.
"""

from __future__ import annotations

import csv
import math
from functools import lru_cache

import numpy as np
import scipy.fft
from scipy import integrate
from scipy.interpolate import CubicSpline

from .bumps import SmoothBump
from .errors import CoverageError
from .grid import FOURIER_SIDE, GridField
from .symbol import SymbolSpec

# 15-point Kronrod rule and its embedded 7-point Gauss rule on [-1, 1]
_XK = np.array([
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144845693013, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245, 0.405845151377397166906606412076961,
    0.586087235467691130294144845693013, 0.741531185599394439863864773280788,
    0.864864423359769072789712788640926, 0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
])
_WK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
])
_WG = np.zeros(15)
_WG[1::2] = [0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
             0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
             0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
             0.129484966168869693270611432679082]


class ProfileTransform:
    """1D Fourier transform of a compactly supported radial profile.

    ``F(s) = int profile(rho) exp(-2 pi i s rho) d rho``.  The transform of
    the profile re-centred at the middle of its support is tabulated on
    ``0 <= s <= s_max`` (trapezoid rule = exact up to aliasing for
    compactly supported smooth integrands, computed by one FFT) and
    interpolated with cubic splines; beyond ``s_max`` the value comes from
    adaptive QAWO quadrature.
    """

    def __init__(self, profile, support, s_max: float = 1000.0, n_nodes: int = 100_000,
                 oversample: int = 4096):
        self.profile = profile
        self.lo, self.hi = map(float, support)
        self.center = 0.5 * (self.lo + self.hi)
        self.half_width = 0.5 * (self.hi - self.lo)
        self.s_max = float(s_max)
        self.step = self.s_max / n_nodes
        period = 1.0 / self.step
        if oversample * 1.0 <= 2 * self.s_max:
            raise ValueError("oversample must exceed twice s_max")
        n = int(round(period * oversample))
        du = period / n
        u = (np.arange(n) - n // 2) * du
        vals = np.asarray(profile(self.center + u), dtype=float)
        vals[np.abs(u) > self.half_width] = 0.0
        table = scipy.fft.fft(np.fft.ifftshift(vals)) * du
        self.nodes = np.arange(n_nodes + 1) * self.step
        centred = table[: n_nodes + 1]
        re = CubicSpline(self.nodes, centred.real)
        im = CubicSpline(self.nodes, centred.imag)
        # piecewise cubic coefficients, highest power first, per interval
        self._coef = re.c + 1j * im.c
        self.table = centred
        self._abs_tail = np.maximum.accumulate(np.abs(centred)[::-1])[::-1]

    def centred(self, s):
        """Transform of the re-centred profile; smooth and slowly varying."""
        s = np.asarray(s, dtype=float)
        a = np.abs(s)
        out = np.empty(s.shape, dtype=complex)
        inside = a <= self.s_max
        ai = a[inside]
        idx = np.minimum((ai / self.step).astype(np.int64), self._coef.shape[1] - 1)
        t = ai - idx * self.step
        c = self._coef
        v = ((c[0, idx] * t + c[1, idx]) * t + c[2, idx]) * t + c[3, idx]
        out[inside] = np.where(s[inside] < 0, np.conj(v), v)
        if not np.all(inside):
            out[~inside] = [self.direct_centred(x) for x in s[~inside]]
        return out

    def __call__(self, s):
        s_arr = np.asarray(s, dtype=float)
        val = np.exp(-2j * math.pi * self.center * s_arr) * self.centred(s_arr)
        return complex(val) if np.ndim(s) == 0 else val

    def direct_centred(self, s: float) -> complex:
        w = 2.0 * math.pi * float(s)
        f = lambda u: float(self.profile(self.center + u))
        hw = self.half_width
        opts = dict(epsabs=1e-14, epsrel=1e-12, limit=2000)
        if w == 0.0:
            return complex(integrate.quad(f, -hw, hw, **opts)[0])
        re = integrate.quad(f, -hw, hw, weight="cos", wvar=w, **opts)[0]
        im = -integrate.quad(f, -hw, hw, weight="sin", wvar=w, **opts)[0]
        return complex(re, im)

    def direct(self, s: float) -> complex:
        """Adaptive-quadrature value, independent of the table."""
        return complex(np.exp(-2j * math.pi * self.center * s) * self.direct_centred(s))

    def tail_cutoff(self, tol: float) -> float:
        """Smallest tabulated ``T`` with ``sup_{|s| >= T} |F(s)| <= tol``."""
        hit = np.nonzero(self._abs_tail <= tol)[0]
        if hit.size == 0:
            return self.s_max
        return float(self.nodes[hit[0]])


@lru_cache(maxsize=16)
def _cached_profile(kind: str, bump: SmoothBump, power: int) -> ProfileTransform:
    if power == 0:
        fn = bump
    else:
        fn = lambda rho: np.asarray(rho) ** power * bump(rho)
    return ProfileTransform(fn, (bump.support_lo, bump.support_hi))


def profile_transform(bump: SmoothBump, power: int = 0) -> ProfileTransform:
    """Cached transform of ``rho**power * bump(rho)`` (``power = d - 1`` for radial integrals)."""
    return _cached_profile("radial", bump, int(power))


def profile_fourier(bump: SmoothBump, s):
    return profile_transform(bump)(s)


def _checkerboard(n: int, dim: int) -> np.ndarray:
    sign = 1.0 - 2.0 * (np.arange(n) % 2)
    out = sign
    for _ in range(dim - 1):
        out = np.multiply.outer(out, sign)
    return out


def kernel_fft(symbol: GridField, workers: int | None = None, check_range: bool = True) -> GridField:
    """Continuum-normalised Fourier transform of a fourier-side field.

    With nodes ``xi_j = -L + j h`` and dual nodes ``x_k = (k - N/2)/(2L)``
    the Riemann sum ``h^d sum_j M(xi_j) exp(-2 pi i x_k xi_j)`` equals
    ``h^d (-1)^k FFT((-1)^j M)_k`` because ``N/2`` is even.
    """
    g = symbol.grid
    if g.side != FOURIER_SIDE:
        raise ValueError("kernel_fft expects a fourier-side field")
    if g.points_per_axis < 4:
        raise ValueError("need at least 4 points per axis")
    dual = g.dual()
    lam = symbol.lam
    if check_range and lam is not None and dual.box_half_side < 2.0 * abs(lam):
        raise CoverageError(f"dual range {dual.box_half_side:g} < 2*lambda = {2 * abs(lam):g}")
    sign = _checkerboard(g.points_per_axis, g.dimension)
    work = symbol.samples * sign
    out = scipy.fft.fftn(work, overwrite_x=True, workers=workers)
    out *= sign
    out *= g.cell_volume
    meta = dict(symbol.meta)
    meta["kind"] = "kernel"
    return GridField(dual, out, meta)


# ---------------------------------------------------------------------------
# planar reduction


def dual_polar(x, y):
    """``(r, theta_xy)`` with ``x = r sin(theta_xy)``, ``y = r cos(theta_xy)``."""
    return math.hypot(x, y), math.atan2(x, y)


def _gk_panels(a: float, b: float, width: float):
    n = max(1, math.ceil((b - a) / width - 1e-12))
    edges = np.linspace(a, b, n + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = mid[:, None] + half[:, None] * _XK[None, :]
    return nodes, half


def _gk_integrate(f, intervals, width):
    total = 0j
    err = 0.0
    for a, b in intervals:
        if b <= a:
            continue
        nodes, half = _gk_panels(a, b, width)
        vals = f(nodes)
        k = (vals @ _WK) * half
        g = (vals @ _WG) * half
        total += k.sum()
        err += float(np.sum(np.abs(k - g)))
    return total, err


def _merge(intervals):
    out = []
    for a, b in sorted(i for i in intervals if i[1] > i[0]):
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def reduction_windows(r: float, theta: float, chi_support, tail_arg: float):
    """Sub-intervals of the s-line where the dilated integrand can matter.

    The cutoff restricts ``s/r - theta`` to its support; the profile
    transform is negligible unless ``|r sin(s/r)| <= tail_arg``, i.e. near
    ``s/r`` in ``{0, +-pi}``.
    """
    lo = r * (theta + chi_support[0])
    hi = r * (theta + chi_support[1])
    half = r * math.asin(min(1.0, tail_arg / r)) if tail_arg < r else math.inf
    pieces = []
    for centre in (-math.pi * r, 0.0, math.pi * r):
        pieces.append((max(lo, centre - half), min(hi, centre + half)))
    return _merge(pieces)


def reduced_integral(spec: SymbolSpec, r: float, theta: float, *, panel_width: float = 0.25,
                     tail_tol: float = 1e-11, rtol: float = 1e-10, tail_scale: float = 1.0,
                     max_refine: int = 4):
    """``J = int F(r sin(s/r)) exp(2 pi i (lam/r) s) chi(s/r - theta) ds``.

    Returns ``(J, error_estimate)`` where the estimate adds the Kronrod
    error and the truncation bound.  ``r * K(x, y) = exp(-2 pi i lam theta) J``.
    """
    if spec.dimension != 2:
        raise ValueError("the 1D reduction is for the planar construction")
    if not r > 0:
        raise ValueError("r must be positive")
    prof = profile_transform(spec.radial)
    chi = spec.angular
    lam = spec.lam
    support = (chi.support_lo, chi.support_hi)
    window_len = r * (support[1] - support[0])
    cutoff = prof.tail_cutoff(tail_tol / max(window_len, 1.0)) * tail_scale
    intervals = reduction_windows(r, theta, support, cutoff)
    freq = 2.0 * math.pi * lam / r

    def f(s):
        return prof(r * np.sin(s / r)) * np.exp(1j * freq * s) * chi(s / r - theta)

    width = panel_width
    for _ in range(max_refine + 1):
        val, err = _gk_integrate(f, intervals, width)
        if err <= max(rtol * abs(val), 1e-15):
            break
        width /= 2
    return val, err + tail_tol


def kernel_reduction_1d(spec: SymbolSpec, x: float, y: float, **kw) -> complex:
    """Kernel value ``K(x, y)`` of the planar symbol from the 1D reduction."""
    r, theta = dual_polar(x, y)
    if r == 0:
        raise ValueError("the reduction needs (x, y) != (0, 0)")
    j, _ = reduced_integral(spec, r, theta, **kw)
    return complex(np.exp(-2j * math.pi * spec.lam * theta) * j / r)


# ---------------------------------------------------------------------------
# spatial (d = 3) construction


def rotated_frame(x):
    """Orthonormal frame ``(z_x, x/|x|, z_x cross x/|x|)`` and ``(alpha_1, alpha_2)``.

    ``z_x`` is the normalised projection of ``e1`` onto ``x^perp``: the
    minimiser of ``2 - 2 zeta_1`` on the great circle ``x^perp``.
    """
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x)
    if r == 0:
        raise ValueError("x must be nonzero")
    xhat = x / r
    e1 = np.zeros(3)
    e1[0] = 1.0
    alpha2 = float(xhat[0])
    proj = e1 - alpha2 * xhat
    alpha1 = float(np.linalg.norm(proj))
    if alpha1 == 0:
        raise ValueError("x parallel to e1 has no constrained minimiser")
    z = proj / alpha1
    u3 = np.cross(z, xhat)
    return np.stack([z, xhat, u3]), alpha1, alpha2


def sphere_point(frame, t2, t3):
    """``cos t2 cos t3 z + sin t2 xhat + cos t2 sin t3 u3``."""
    c2 = np.cos(t2)
    coeffs = np.stack(np.broadcast_arrays(c2 * np.cos(t3), np.sin(t2), c2 * np.sin(t3)), axis=-1)
    return coeffs @ frame


def spatial_phase(alpha1: float, alpha2: float, t2, t3):
    """The phase ``2 - 2 alpha1 cos t2 cos t3 - 2 alpha2 sin t2`` in the rotated chart."""
    return 2.0 - 2.0 * alpha1 * np.cos(t2) * np.cos(t3) - 2.0 * alpha2 * np.sin(t2)


def _gl_composite(a: float, b: float, panels: int, order: int = 16):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def chart_box(cap_radius: float, alpha2: float):
    """Rectangle in ``(t2, t3)`` containing the cap about ``e1`` exactly."""
    c = math.asin(alpha2)
    t3 = math.asin(min(1.0, math.sin(cap_radius) / math.cos(c)))
    return (c - cap_radius, c + cap_radius), (-t3, t3)


def _check_d3_point(spec: SymbolSpec, x):
    x = np.asarray(x, dtype=float)
    if spec.dimension != 3 or x.shape != (3,):
        raise ValueError("d = 3 construction needs a 3-vector")
    r = float(np.linalg.norm(x))
    if r == 0 or x[0] == 0:
        raise ValueError("need x_1 != 0 (alpha_2 = 0 is degenerate)")
    if math.asin(min(1.0, abs(x[0]) / r)) >= spec.angular.angular_radius:
        raise ValueError("z_x falls outside the support of the cap cutoff")
    return x, r


def oscillatory_integral_d3(spec: SymbolSpec, x, *, panels_per_cycle: float = 0.5,
                            order: int = 16, min_panels: int = 4) -> complex:
    """Kernel value of the spatial symbol at ``x`` by quadrature in the rotated chart.

    ``K(x) = int exp(2 pi i lam psi(t)) F(r sin t2) chi~(zeta(t)) cos(t2) dt``
    where ``F`` is the 1D transform of ``rho^2 Phi~(rho)``.
    """
    x, r = _check_d3_point(spec, x)
    frame, a1, a2 = rotated_frame(x)
    eps = spec.angular.angular_radius
    (b2lo, b2hi), (b3lo, b3hi) = chart_box(eps, a2)
    lam = spec.lam
    # rough cycle counts along each chart axis bound the oscillation
    cyc2 = (b2hi - b2lo) * (spec.radial.support_hi * r + 2.0 * abs(lam))
    cyc3 = (b3hi - b3lo) * (2.0 * abs(lam) * math.sin(b3hi) + 1.0)
    n2 = max(min_panels, math.ceil(cyc2 * panels_per_cycle))
    n3 = max(min_panels, math.ceil(cyc3 * panels_per_cycle))
    t2, w2 = _gl_composite(b2lo, b2hi, n2, order)
    t3, w3 = _gl_composite(b3lo, b3hi, n3, order)
    prof = profile_transform(spec.radial, power=2)
    radial = prof(r * np.sin(t2))
    T2, T3 = np.meshgrid(t2, t3, indexing="ij")
    zeta = sphere_point(frame, T2, T3)
    cut = spec.angular.of_angle(spec.angular.angle_to_center(zeta)) * np.cos(T2)
    phase = np.exp(2j * math.pi * lam * spatial_phase(a1, a2, T2, T3))
    integrand = phase * cut * radial[:, None]
    return complex(w2 @ integrand @ w3)


def write_point_csv(path, points, values) -> None:
    """Rows ``x, y[, z], Re K, Im K, |K|``."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    values = np.asarray(values, dtype=complex)
    d = points.shape[1]
    names = ["x", "y", "z"][:d] + ["re", "im", "abs"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for p, v in zip(points, values):
            w.writerow([repr(float(c)) for c in p] + [repr(float(v.real)), repr(float(v.imag)), repr(float(abs(v)))])
