import csv
import math

import numpy as np
import pytest

from oscillint.bumps import default_radial_bump
from oscillint.crosscheck import kernel_cross_check, spatial_cross_check
from oscillint.errors import CoverageError
from oscillint.grid import GridField, GridSpec
from oscillint.symbol import planar_spec, sample_symbol, spatial_spec
from oscillint.transform import (
    chart_box,
    dual_polar,
    kernel_fft,
    kernel_reduction_1d,
    oscillatory_integral_d3,
    profile_transform,
    reduced_integral,
    rotated_frame,
    sphere_point,
    write_point_csv,
)


@pytest.mark.parametrize("s", [0.0, 0.37, 3.3, 41.7, 512.25, -7.1])
def test_profile_table_matches_adaptive_quadrature(s):
    prof = profile_transform(default_radial_bump())
    assert abs(prof(s) - prof.direct(s)) < 1e-10


def test_profile_beyond_table_uses_quadrature():
    prof = profile_transform(default_radial_bump())
    s = prof.s_max * 1.5
    assert prof(s) == pytest.approx(prof.direct(s), abs=1e-15)


def test_profile_at_zero_is_mass():
    b = default_radial_bump()
    x, w = np.polynomial.legendre.leggauss(200)
    mass = 0.5 * np.sum(w * b(1.0 + 0.5 * x))
    assert profile_transform(b)(0.0).real == pytest.approx(mass, rel=1e-12)


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_fft_of_gaussian(dim):
    # dual half side 4: periodic images sit exp(-16 pi) below the peak
    g = GridSpec(dim, 4.0, 64)
    r2 = np.broadcast_to(g.radius() ** 2, g.shape)
    kern = kernel_fft(GridField(g, np.exp(-math.pi * r2).astype(complex)))
    x2 = np.broadcast_to(kern.grid.radius() ** 2, kern.grid.shape)
    assert np.max(np.abs(kern.samples - np.exp(-math.pi * x2))) < 1e-12


def test_fft_shift_convention():
    # a narrow bump centred at xi0 gives the modulation exp(-2 pi i x xi0)
    g = GridSpec(1, 8.0, 256)
    xi = g.axis()
    xi0 = 1.0
    kern = kernel_fft(GridField(g, np.exp(-math.pi * (xi - xi0) ** 2).astype(complex)))
    x = kern.grid.axis()
    expect = np.exp(-math.pi * x ** 2) * np.exp(-2j * math.pi * x * xi0)
    assert np.max(np.abs(kern.samples - expect)) < 1e-12


def test_coverage_error():
    spec = planar_spec(16)
    small = GridSpec(2, 2.0, 64)
    fld = GridField(small, np.zeros(small.shape, dtype=complex), {"lambda": 16.0})
    with pytest.raises(CoverageError):
        kernel_fft(fld)
    kernel_fft(fld, check_range=False)
    with pytest.raises(ValueError):
        kernel_fft(kernel_fft(sample_symbol(planar_spec(2))))


def test_dual_polar_orientation():
    r, th = dual_polar(0.0, 2.0)
    assert (r, th) == (2.0, 0.0)
    r, th = dual_polar(1.0, 0.0)
    assert th == pytest.approx(math.pi / 2)


def test_fft_agrees_with_reduction():
    res = kernel_cross_check(16, n_points=60)
    assert res["max_error"] < 1e-6
    assert res["n_in_sector"] > 0 and len(res["errors"]) == 60


def test_reduction_is_stable_under_refinement():
    spec = planar_spec(32)
    for x, y in [(1.0, 30.0), (-4.0, 35.0), (20.0, 25.0)]:
        r, th = dual_polar(x, y)
        coarse, _ = reduced_integral(spec, r, th)
        fine, _ = reduced_integral(spec, r, th, panel_width=0.05, tail_tol=1e-13, rtol=1e-12)
        assert abs(coarse - fine) < 1e-6


def test_reduction_rejects_origin():
    with pytest.raises(ValueError):
        kernel_reduction_1d(planar_spec(4), 0.0, 0.0)


def test_rotated_frame_geometry():
    x = np.array([-0.3, 1.0, 0.2]) * 7
    frame, a1, a2 = rotated_frame(x)
    assert np.allclose(frame @ frame.T, np.eye(3), atol=1e-14)
    assert np.isclose(np.linalg.det(frame), 1.0)
    assert np.isclose(frame[0] @ x, 0.0, atol=1e-12)
    assert a1 ** 2 + a2 ** 2 == pytest.approx(1.0)
    assert a2 == pytest.approx(x[0] / np.linalg.norm(x))
    # z_x is the point of the great circle x^perp closest to e1
    t = np.linspace(0, 2 * math.pi, 2001)
    circle = np.cos(t)[:, None] * frame[0] + np.sin(t)[:, None] * frame[2]
    assert circle[:, 0].max() <= frame[0][0] + 1e-12
    with pytest.raises(ValueError):
        rotated_frame([2.0, 0.0, 0.0])


def test_chart_box_contains_cap():
    eps = 0.5
    x = np.array([-0.3, 1.0, 0.0])
    frame, a1, a2 = rotated_frame(x)
    (lo2, hi2), (lo3, hi3) = chart_box(eps, a2)
    rng = np.random.default_rng(1)
    t2 = rng.uniform(-math.pi / 2, math.pi / 2, 20000)
    t3 = rng.uniform(-math.pi, math.pi, 20000)
    z = sphere_point(frame, t2, t3)
    near = np.arccos(np.clip(z[:, 0], -1, 1)) < eps
    assert np.all((t2[near] >= lo2) & (t2[near] <= hi2) & (t3[near] >= lo3) & (t3[near] <= hi3))


def test_d3_point_rejections():
    spec = spatial_spec(4)
    with pytest.raises(ValueError):
        oscillatory_integral_d3(spec, [0.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        oscillatory_integral_d3(spec, [5.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        oscillatory_integral_d3(planar_spec(4), [0.1, 1.0, 0.0])


def test_d3_quadrature_against_fft():
    res = spatial_cross_check(4, n_points=3)
    assert res["max_rel_error"] < 5e-2


def test_d3_quadrature_converges():
    spec = spatial_spec(8)
    x = np.array([-0.3, 1.0, 0.0]) * 5
    a = oscillatory_integral_d3(spec, x)
    b = oscillatory_integral_d3(spec, x, panels_per_cycle=1.0, order=24)
    assert abs(a - b) < 1e-8 * max(1.0, abs(b))


def test_point_csv(tmp_path):
    p = tmp_path / "k.csv"
    write_point_csv(p, [[1.0, 2.0], [3.0, 4.0]], [1 + 1j, -2j])
    rows = list(csv.reader(p.open()))
    assert rows[0] == ["x", "y", "re", "im", "abs"]
    assert float(rows[2][3]) == -2.0 and float(rows[1][4]) == pytest.approx(math.sqrt(2))
