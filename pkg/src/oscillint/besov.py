"""Dyadic spectra, the Besov/Sobolev norms built on them, and the
sequence inequality that controls the interpolation bound.

For a frequency-side function ``G`` with transform ``G^`` the spectrum is

    a_0 = ||G^||_{L2(|x| < 1)},    a_k = ||G^||_{L2(2^{k-1} <= |x| < 2^k)},

and with ``A = 2^{d/2}``

    besov   = sum_k A^k a_k,
    sobolev = (sum_k A^{4k} a_k^2)^{1/2},
    l2      = (sum_k a_k^2)^{1/2}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoverageError
from .grid import FOURIER_SIDE, GridField, GridSpec
from .rng import DEFAULT_SEED, stream
from .scaling import ScalingReport, fit_exponent
from .symbol import grid_for, planar_spec, sample_homogeneous_symbol
from .transform import kernel_fft

TAIL_FRACTION = 0.9  # spectral mass beyond this fraction of the dual half side counts as tail
TAIL_TOL = 1e-6
MIN_WINDOW_POINTS = 512  # the window alone needs this many to push its spectrum below the tail tolerance


@dataclass
class DyadicSpectrum:
    a: np.ndarray
    dimension: int
    truncation_tail: float = 0.0

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        if self.a.ndim != 1 or self.a.size == 0:
            raise ValueError("spectrum must be a non-empty 1D sequence")
        if np.any(self.a < 0) or not np.all(np.isfinite(self.a)):
            raise ValueError("spectrum entries must be finite and nonnegative")

    @property
    def base(self) -> float:
        return 2.0 ** (self.dimension / 2.0)

    @property
    def K(self) -> int:
        return self.a.size - 1

    def weighted(self) -> np.ndarray:
        return self.base ** np.arange(self.a.size) * self.a

    def to_dict(self) -> dict:
        return {"dimension": self.dimension, "a": [float(v) for v in self.a],
                "truncation_tail": float(self.truncation_tail)}


def _annulus_index(radius: np.ndarray) -> np.ndarray:
    """0 on the unit ball, ``k`` on ``2^{k-1} <= |x| < 2^k``."""
    k = np.zeros(radius.shape, dtype=np.int64)
    out = radius >= 1.0
    _, e = np.frexp(radius[out])  # radius = m 2^e, m in [0.5, 1)
    k[out] = e
    return k


def dyadic_spectrum(G: GridField, lam: float | None = None, workers=None) -> DyadicSpectrum:
    """Bin ``|G^|^2`` into dyadic annuli of the dual grid.

    Each cell is assigned by its centre.  The transform range must reach
    ``8 |lam|``; the L2 mass beyond ``0.9`` of the dual half side must stay below ``1e-6`` of the largest weighted term.
    """
    if G.side != FOURIER_SIDE:
        raise ValueError("expected fourier-side data")
    lam = G.lam if lam is None else lam
    ghat = kernel_fft(G, workers=workers, check_range=False)
    dual = ghat.grid
    radius = np.broadcast_to(dual.radius(), dual.shape)
    idx = _annulus_index(radius).ravel()
    mass = (np.abs(ghat.samples) ** 2).ravel() * dual.cell_volume
    K = int(idx.max())
    if lam is not None and 2.0 ** K < 8.0 * abs(lam):
        raise CoverageError(f"outermost annulus 2^{K} does not reach 8*lambda = {8 * abs(lam):g}")
    a = np.sqrt(np.bincount(idx, weights=mass, minlength=K + 1))
    spec = DyadicSpectrum(a, G.dimension)
    tail_mask = (radius >= TAIL_FRACTION * dual.box_half_side).ravel()
    tail = math.sqrt(float(np.sum(mass[tail_mask])))
    spec.truncation_tail = tail
    weighted_max = float(np.max(spec.weighted()))
    if weighted_max > 0 and tail >= TAIL_TOL * weighted_max:
        raise CoverageError(
            f"spectral tail {tail:.3g} is not below {TAIL_TOL:g} of the largest weighted term {weighted_max:.3g}"
        )
    return spec


def norms_from_spectrum(s: DyadicSpectrum) -> tuple:
    """``(l2, sobolev, besov)``."""
    w = s.base ** np.arange(s.a.size)
    l2 = math.sqrt(float(np.sum(s.a ** 2)))
    sob = math.sqrt(float(np.sum((w ** 2 * s.a) ** 2)))
    bes = float(np.sum(w * s.a))
    return l2, sob, bes


def interpolation_ratio(s: DyadicSpectrum) -> float:
    """``besov / (l2^{1/2} sobolev^{1/2})``."""
    if not np.any(s.a > 0):
        raise ValueError("interpolation ratio is undefined for a zero spectrum")
    # identical to the sequence ratio with A = 2^{d/2}
    return float(_batch_ratio(s.a[None, :], s.base)[0][0])


def interpolation_check(G: GridField, workers=None) -> float:
    return interpolation_ratio(dyadic_spectrum(G, workers=workers))


# ---------------------------------------------------------------------------
# the oscillating window and its scaling


def windowed_symbol(lam: float, t: float = 1.0, multiplier=None) -> GridField:
    """``Phi(|xi|) m(t xi)`` with ``m = exp(i lam phi(xi/|xi|))`` (no angular cutoff).

    The grid follows the usual lambda rule but never drops below
    ``MIN_WINDOW_POINTS`` per axis.
    """
    spec = planar_spec(lam)
    grid = grid_for(spec)
    if grid.points_per_axis < MIN_WINDOW_POINTS:
        grid = GridSpec(2, grid.box_half_side, MIN_WINDOW_POINTS, FOURIER_SIDE)
    return sample_homogeneous_symbol(spec, t, grid=grid, multiplier=multiplier)


def besov_norm(lam: float, t: float = 1.0, multiplier=None, workers=None) -> float:
    return norms_from_spectrum(dyadic_spectrum(windowed_symbol(lam, t, multiplier), workers=workers))[2]


def besov_scaling_check(lams=(16, 32, 64, 128), d: int = 2, workers=None) -> ScalingReport:
    """Besov norm of the oscillating window along a lambda ladder; reference slope ``d/2``."""
    if d != 2:
        raise NotImplementedError("the Besov ladder is implemented for d = 2")
    if min(abs(v) for v in lams) < 1:
        raise ValueError("ladder needs |lambda| >= 1")
    pts, spectra, ratios = [], {}, {}
    for lam in sorted(lams):
        s = dyadic_spectrum(windowed_symbol(lam), workers=workers)
        pts.append((lam, norms_from_spectrum(s)[2]))
        spectra[lam] = s.to_dict()
        ratios[lam] = interpolation_ratio(s)
    rep = fit_exponent(pts, d / 2.0, label="besov")
    pref = rep.prefactors()
    rep.extras = {
        "prefactor_spread": float(pref.max() / pref.min()),
        "interpolation_ratios": {f"{k:g}": v for k, v in ratios.items()},
        "spectra": {f"{k:g}": v for k, v in spectra.items()},
    }
    return rep


def dilation_invariance_check(lam: float, ts=(0.5, 1.0, 2.0, 3.0, 7.5), multiplier=None, workers=None) -> float:
    """``max_t | ||Phi m(t .)||_B - ||Phi m||_B |``.

    Zero (to rounding) for the homogeneous ``m``; ``multiplier`` swaps in a
    different ``m`` such as ``exp(i|xi|)``, which is not homogeneous.
    """
    if any(t <= 0 for t in ts):
        raise ValueError("dilations must be positive")
    ref = besov_norm(lam, 1.0, multiplier, workers)
    return max(abs(besov_norm(lam, t, multiplier, workers) - ref) for t in ts)


def radial_phase_multiplier(xi, eta):
    """``exp(i |xi|)``: a smooth multiplier that is not homogeneous."""
    return np.exp(1j * np.hypot(xi, eta))


# ---------------------------------------------------------------------------
# sequence inequality


def _check_base(A: float) -> None:
    if not A > 1:
        raise ValueError(f"A must exceed 1, got {A}")


def sequence_inequality_check(a, A: float) -> tuple:
    """``(lhs, rhs, lhs/rhs)`` for ``sum A^k a_k <= C (sum a_k^2)^{1/4} (sum A^{4k} a_k^2)^{1/4}``."""
    _check_base(A)
    a = np.asarray(a, dtype=float)
    if np.any(a < 0):
        raise ValueError("sequence entries must be nonnegative")
    if not np.any(a > 0):
        raise ValueError("sequence must not vanish identically")
    ratio, lhs, rhs = _batch_ratio(a[None, :], A)
    return float(lhs[0]), float(rhs[0]), float(ratio[0])


def _batch_ratio(a: np.ndarray, A: float):
    # work with b_k = A^k a_k / S (S the largest such term, at k*) and powers
    # A^(k - k*): both sides scale out exactly, and a single spike gives 1.0
    k = np.arange(a.shape[1])
    logA = math.log(A)
    with np.errstate(divide="ignore"):
        la = np.log(a)
    lw = la + k * logA
    kstar = np.argmax(lw, axis=1)[:, None]
    shift = np.take_along_axis(lw, kstar, axis=1)
    b = np.exp(lw - shift)
    rel = (k[None, :] - kstar) * logA
    s_lo = np.sum(b * b * np.exp(-2.0 * rel), axis=1)  # sum a_k^2 / (S A^-k*)^2
    s_hi = np.sum(b * b * np.exp(2.0 * rel), axis=1)  # sum A^4k a_k^2 / (S A^k*)^2
    lhs = np.sum(b, axis=1)
    rhs = (s_lo * s_hi) ** 0.25
    sc = np.exp(shift[:, 0])
    return lhs / rhs, lhs * sc, rhs * sc


def sequence_inequality_constant(A: float) -> float:
    """Constant ``C(A) = (24 A^2 / (A - 1)^2)^{1/4}`` from expanding the fourth power.

    ``lhs^4`` is at most 24 times the sum over ordered quadruples
    ``p >= q >= r >= s`` of ``A^{p+q+r+s} a_p a_q a_r a_s``.  AM-GM splits
    each term into ``a_p a_s`` and ``a_q a_r`` pieces (12 + 12), and the
    remaining geometric series over the free indices sum to at most
    ``A^2/(A-1)^2``.
    """
    _check_base(A)
    return (24.0 * A * A / (A - 1.0) ** 2) ** 0.25


def _random_sequences(rng: np.random.Generator, n: int, max_len: int, A: float) -> np.ndarray:
    lengths = rng.integers(1, max_len + 1, size=n)
    k = np.arange(max_len)
    kind = rng.integers(0, 4, size=n)
    out = np.empty((n, max_len))
    u = rng.random((n, max_len))
    out[kind == 0] = u[kind == 0]
    ln = rng.normal(0.0, 3.0, size=(n, max_len))
    out[kind == 1] = np.exp(ln[kind == 1])
    sparse = (rng.random((n, max_len)) < 0.1) * u
    out[kind == 2] = sparse[kind == 2]
    # geometric profiles A^{-c|k-k0|}, the shape that balances both sides
    c = rng.uniform(0.0, 4.0, size=(n, 1))
    k0 = rng.integers(0, max_len, size=(n, 1))
    geo = A ** (-c * np.abs(k[None, :] - k0)) * (0.5 + u)
    out[kind == 3] = geo[kind == 3]
    out[k[None, :] >= lengths[:, None]] = 0.0
    empty = ~np.any(out > 0, axis=1)
    out[empty, 0] = 1.0
    return out


def _ascend(rng: np.random.Generator, a: np.ndarray, A: float, steps: int) -> tuple:
    """Multiplicative coordinate ascent on the ratio, batched over rows."""
    best = _batch_ratio(a, A)[0]
    n, m = a.shape
    scale = 0.5
    for it in range(steps):
        j = rng.integers(0, m, size=n)
        factor = np.exp(rng.normal(0.0, scale, size=n))
        trial = a.copy()
        rows = np.arange(n)
        trial[rows, j] = np.where(trial[rows, j] > 0, trial[rows, j] * factor, factor * 1e-3)
        r = _batch_ratio(trial, A)[0]
        better = r > best
        a[better] = trial[better]
        best = np.where(better, r, best)
        if it % 200 == 199:
            scale *= 0.7
    return a, best


def sequence_search(A: float, trials: int = 100_000, max_len: int = 64, seed: int = DEFAULT_SEED,
                    batch: int = 20_000, restarts: int = 64, ascent_steps: int = 1000) -> dict:
    """Randomized hunt for the largest ratio, followed by coordinate ascent from the best hits."""
    _check_base(A)
    rng = stream(seed, f"seq-ineq/A={A!r}")
    best_ratio, best_seq = -1.0, None
    top = []
    done = 0
    while done < trials:
        n = min(batch, trials - done)
        a = _random_sequences(rng, n, max_len, A)
        r = _batch_ratio(a, A)[0]
        order = np.argsort(r)[::-1][:restarts]
        top.extend((float(r[i]), a[i]) for i in order)
        i = int(np.argmax(r))
        if r[i] > best_ratio:
            best_ratio, best_seq = float(r[i]), a[i].copy()
        done += n
    top.sort(key=lambda t: -t[0])
    start = np.stack([t[1] for t in top[:restarts]])
    asc, asc_r = _ascend(stream(seed, f"seq-ineq/ascent/A={A!r}"), start, A, ascent_steps)
    j = int(np.argmax(asc_r))
    random_max = best_ratio
    if asc_r[j] > best_ratio:
        best_ratio, best_seq = float(asc_r[j]), asc[j]
    C = sequence_inequality_constant(A)
    spike = sequence_inequality_check([0.0, 0.0, 1.0], A)[2]
    nz = np.nonzero(best_seq)[0]
    return {
        "A": A,
        "constant": C,
        "trials": trials,
        "random_max_ratio": random_max,
        "max_ratio": best_ratio,
        "holds": bool(best_ratio <= C),
        "single_spike_ratio": spike,
        "argmax_sequence": [float(v) for v in best_seq[: nz[-1] + 1]] if nz.size else [],
    }


def random_spectrum_check(n: int = 1000, dimension: int = 2, max_len: int = 32, seed: int = DEFAULT_SEED) -> dict:
    """Interpolation ratio of random spectra against ``C(2^{d/2})``."""
    A = 2.0 ** (dimension / 2.0)
    rng = stream(seed, f"besov/random-spectra/d={dimension}")
    a = _random_sequences(rng, n, max_len, A)
    ratios = _batch_ratio(a, A)[0]
    C = sequence_inequality_constant(A)
    return {"n": n, "A": A, "constant": C, "max_ratio": float(ratios.max()),
            "holds": bool(ratios.max() <= C)}
