"""Log-log power-law fits over a lambda ladder."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class ScalingReport:
    ladder: list  # [(lam, value), ...] sorted by lam
    fitted_slope: float
    intercept: float
    r_squared: float
    reference_slope: float | None = None
    label: str = ""
    extras: dict = field(default_factory=dict)

    @property
    def lams(self) -> np.ndarray:
        return np.array([p[0] for p in self.ladder], dtype=float)

    @property
    def values(self) -> np.ndarray:
        return np.array([p[1] for p in self.ladder], dtype=float)

    def prefactors(self) -> np.ndarray:
        """``value / lam**reference_slope`` (or the fitted slope when no reference)."""
        k = self.fitted_slope if self.reference_slope is None else self.reference_slope
        return self.values / self.lams ** k

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "ladder": [[float(a), float(b)] for a, b in self.ladder],
            "fitted_slope": float(self.fitted_slope),
            "intercept": float(self.intercept),
            "r_squared": float(self.r_squared),
            "reference_slope": None if self.reference_slope is None else float(self.reference_slope),
            "extras": self.extras,
        }


def fit_exponent(ladder, reference_slope=None, label: str = "") -> ScalingReport:
    """Ordinary least squares of ``log(value)`` against ``log(lam)``."""
    pts = sorted((float(a), float(b)) for a, b in ladder)
    if len(pts) < 3:
        raise ValueError("need at least 3 ladder points")
    lam = np.array([p[0] for p in pts])
    val = np.array([p[1] for p in pts])
    if np.any(val <= 0) or np.any(lam <= 0):
        raise ValueError("ladder values and lambdas must be positive")
    x, y = np.log(lam), np.log(val)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid ** 2))
    # a flat ladder (spread at rounding level) is fitted exactly by slope 0
    flat = ss_tot <= len(pts) * (1e-12 * max(1.0, float(np.max(np.abs(y))))) ** 2
    r2 = 1.0 if flat else max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return ScalingReport(pts, float(slope), float(intercept), r2, reference_slope, label)
