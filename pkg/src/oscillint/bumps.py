"""Smooth cutoffs and phase functions.

Every cutoff is built from the non-analytic building block
``exp(-1/x)``, so supports are exact: outside the declared support the
value is an exact floating point zero, not merely a small number.
"""

from __future__ import annotations

import functools
import math
from dataclasses import asdict, dataclass, field
from functools import cached_property

import numpy as np
from scipy import interpolate

UNIT_TOL = 1e-12


def _psi(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0.0
    with np.errstate(over="ignore"):  # subnormal x: exp(-inf) = 0 is the right value
        out[pos] = np.exp(-1.0 / x[pos])
    return out


def smooth_step(x):
    """C-infinity step: 0 for ``x <= 0``, 1 for ``x >= 1``."""
    a = _psi(x)
    b = _psi(1.0 - np.asarray(x, dtype=float))
    return a / (a + b)


def mollifier(u2):
    """Standard mollifier ``exp(1 - 1/(1 - u^2))`` as a function of ``u^2``.

    Peaks at 1 for ``u = 0`` and vanishes identically for ``u^2 >= 1``.
    """
    u2 = np.asarray(u2, dtype=float)
    out = np.zeros_like(u2)
    inside = u2 < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - u2[inside]))
    return out


def _scalar_or_array(value, like):
    if np.ndim(like) == 0:
        return float(value)
    return value


@dataclass(frozen=True)
class SmoothBump:
    """Compactly supported smooth bump on the real line.

    Parameters
    ----------
    support_lo, support_hi : float
        The function is exactly zero outside ``[support_lo, support_hi]``.
    plateau_lo, plateau_hi : float
        Interval on which the bump is guaranteed to stay above a positive
        floor (see `plateau_floor`).
    height : float
        Upper bound of the bump; attained at the centre for the
        ``"mollifier"`` profile and on the whole plateau for ``"plateau"``.
    profile : {"mollifier", "plateau"}
        ``"mollifier"`` rescales ``exp(1 - 1/(1-u^2))`` to the support;
        ``"plateau"`` is flat on the plateau and glued to zero with smooth
        steps.
    """

    support_lo: float
    support_hi: float
    plateau_lo: float
    plateau_hi: float
    height: float = 1.0
    profile: str = "mollifier"

    def __post_init__(self):
        if not (self.support_lo < self.plateau_lo <= self.plateau_hi < self.support_hi):
            raise ValueError(
                "need support_lo < plateau_lo <= plateau_hi < support_hi, got "
                f"{self.support_lo}, {self.plateau_lo}, {self.plateau_hi}, {self.support_hi}"
            )
        if self.height <= 0:
            raise ValueError("height must be positive")
        if self.profile not in ("mollifier", "plateau"):
            raise ValueError(f"unknown profile {self.profile!r}")

    @property
    def center(self) -> float:
        return 0.5 * (self.support_lo + self.support_hi)

    @property
    def half_width(self) -> float:
        return 0.5 * (self.support_hi - self.support_lo)

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        if self.profile == "mollifier":
            u = (t_arr - self.center) / self.half_width
            val = self.height * mollifier(u * u)
        else:
            rise = smooth_step((t_arr - self.support_lo) / (self.plateau_lo - self.support_lo))
            fall = smooth_step((self.support_hi - t_arr) / (self.support_hi - self.plateau_hi))
            val = self.height * rise * fall
        return _scalar_or_array(val, t)

    @cached_property
    def plateau_floor(self) -> float:
        # sampled once; the mollifier profile is unimodal so the endpoints dominate
        ts = np.linspace(self.plateau_lo, self.plateau_hi, 20001)
        return float(np.min(self(ts)))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SmoothBump":
        return cls(**d)


def eval_bump(b: SmoothBump, t):
    return b(t)


def default_radial_bump() -> SmoothBump:
    """Radial profile supported in [1/2, 3/2], positive on [2/3, 4/3]."""
    return SmoothBump(0.5, 1.5, 2.0 / 3.0, 4.0 / 3.0)


def default_angular_bump() -> SmoothBump:
    """Angular cutoff supported in [-1/2, 1/2], positive on [-1/3, 1/3], at most 1."""
    return SmoothBump(-0.5, 0.5, -1.0 / 3.0, 1.0 / 3.0)


@functools.lru_cache(maxsize=1)
def _step_integral_table():
    # I(x) = int_0^x smooth_step on [0, 1]; Hermite data (I, I' = smooth_step)
    n = 4096
    edges = np.linspace(0.0, 1.0, n + 1)
    t, w = np.polynomial.legendre.leggauss(12)
    mid, half = 0.5 * (edges[1:] + edges[:-1]), 0.5 * np.diff(edges)
    nodes = mid[:, None] + half[:, None] * t[None, :]
    panels = (smooth_step(nodes) * w[None, :]).sum(axis=1) * half
    values = np.concatenate([[0.0], np.cumsum(panels)])
    return interpolate.CubicHermiteSpline(edges, values, smooth_step(edges))


def smooth_step_integral(x):
    """``int_0^x smooth_step``; equals ``x - 1/2`` for ``x >= 1``."""
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 1.0, x - 0.5, 0.0)
    mid = (x > 0.0) & (x < 1.0)
    out[mid] = _step_integral_table()(x[mid])
    return out


@dataclass(frozen=True)
class PeriodicPhase:
    """2pi-periodic smooth phase equal to ``linear_slope * theta`` on the window.

    The derivative is ``linear_slope * g(theta)`` with ``g`` even, equal to 1
    on the linear window ``[-a, a]``, dropping through a smooth step of
    width ``transition_width`` to a constant ``-c`` on the far arc.  ``c`` is
    chosen so that ``g`` integrates to zero over a period, which makes the
    phase itself periodic.  With the defaults ``c < 1``, so
    ``|phase'| <= linear_slope`` everywhere.
    """

    period: float = 2.0 * math.pi
    linear_slope: float = 2.0 * math.pi
    linear_window: tuple = (-1.0, 1.0)
    transition_width: float = 1.0

    def __post_init__(self):
        lo, hi = self.linear_window
        if not (lo == -hi and 0 < hi and self.transition_width > 0
                and hi + self.transition_width < math.pi):
            raise ValueError("linear window plus transition must fit symmetrically inside (-pi, pi)")
        if self.period != 2.0 * math.pi:
            raise ValueError("only 2pi-periodic phases are supported")

    @property
    def return_slope(self) -> float:
        """``c``: the far arc runs at slope ``-c * linear_slope``."""
        hi, w = self.linear_window[1], self.transition_width
        return math.pi / ((math.pi - hi) - 0.5 * w) - 1.0

    def __call__(self, theta):
        th = np.asarray(theta, dtype=float)
        hi, w = self.linear_window[1], self.transition_width
        # wrap only when needed so the linear window stays bit-exact
        wrapped = np.where(np.abs(th) <= math.pi, th, np.remainder(th + math.pi, 2.0 * math.pi) - math.pi)
        a = np.abs(wrapped)
        outer = a > hi
        val = self.linear_slope * wrapped
        if np.any(outer):
            ao = a[outer] if val.ndim else a
            bent = ao - (1.0 + self.return_slope) * w * smooth_step_integral((ao - hi) / w)
            if val.ndim:
                val[outer] = self.linear_slope * np.sign(wrapped[outer]) * bent
            else:
                val = self.linear_slope * np.sign(wrapped) * bent
        return _scalar_or_array(val, theta)

    def derivative(self, theta):
        th = np.asarray(theta, dtype=float)
        a = np.abs(np.remainder(th + math.pi, 2.0 * math.pi) - math.pi)
        hi, w = self.linear_window[1], self.transition_width
        g = 1.0 - (1.0 + self.return_slope) * smooth_step((a - hi) / w)
        return _scalar_or_array(self.linear_slope * g, theta)

    def max_slope(self) -> float:
        """``max |phase'|`` (used by the resolution rule)."""
        return self.linear_slope * max(1.0, self.return_slope)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["linear_window"] = list(self.linear_window)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PeriodicPhase":
        d = dict(d)
        d["linear_window"] = tuple(d.get("linear_window", (-1.0, 1.0)))
        return cls(**d)


def eval_phase_periodic(p: PeriodicPhase, theta):
    return p(theta)


def _check_unit(zeta):
    z = np.asarray(zeta, dtype=float)
    norms = np.linalg.norm(z, axis=-1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise ValueError(f"expected unit vectors, got norms deviating by {np.max(np.abs(norms - 1.0)):.3g}")
    return z


@dataclass(frozen=True)
class SphericalPhase:
    """``phi(zeta) = |zeta - e1|^2 = 2 - 2 zeta_1`` on the unit sphere."""

    dimension: int = 3

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError("dimension must be >= 2")

    def __call__(self, zeta):
        z = _check_unit(zeta)
        if z.shape[-1] != self.dimension:
            raise ValueError(f"expected {self.dimension}-vectors")
        val = 2.0 - 2.0 * z[..., 0]
        return _scalar_or_array(val, z[..., 0])

    def to_dict(self) -> dict:
        return asdict(self)


def eval_phase_sphere(p: SphericalPhase, zeta):
    return p(zeta)


@dataclass(frozen=True)
class SphereCutoff:
    """Mollifier in the geodesic distance to ``center``, supported in a cap.

    The value is ``mollifier((dist / angular_radius)^2)``: 1 at the centre,
    exactly 0 once the geodesic distance reaches ``angular_radius``.
    """

    dimension: int = 3
    angular_radius: float = 0.5
    center: tuple = field(default=None)

    def __post_init__(self):
        if self.center is None:
            c = [0.0] * self.dimension
            c[0] = 1.0
            object.__setattr__(self, "center", tuple(c))
        if len(self.center) != self.dimension:
            raise ValueError("center has wrong dimension")
        if not (0 < self.angular_radius < math.pi / 2):
            raise ValueError("angular_radius must lie in (0, pi/2)")
        _check_unit(np.asarray(self.center))

    def angle_to_center(self, zeta):
        z = np.asarray(zeta, dtype=float)
        c = np.asarray(self.center)
        cos_a = np.clip(z @ c, -1.0, 1.0)
        # atan2 form stays accurate for tiny angles
        sin_a = np.linalg.norm(z - np.multiply.outer(z @ c, c), axis=-1)
        return np.arctan2(sin_a, cos_a)

    def of_angle(self, angle):
        a = np.asarray(angle, dtype=float) / self.angular_radius
        return mollifier(a * a)

    def __call__(self, zeta):
        z = _check_unit(zeta)
        val = self.of_angle(self.angle_to_center(z))
        return _scalar_or_array(val, z[..., 0])

    def to_dict(self) -> dict:
        d = asdict(self)
        d["center"] = list(self.center)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SphereCutoff":
        d = dict(d)
        if d.get("center") is not None:
            d["center"] = tuple(d["center"])
        return cls(**d)


def eval_sphere_cutoff(c: SphereCutoff, zeta):
    return c(zeta)
