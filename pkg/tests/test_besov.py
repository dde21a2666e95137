import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscillint.besov import (
    DyadicSpectrum,
    _annulus_index,
    besov_norm,
    dilation_invariance_check,
    dyadic_spectrum,
    interpolation_ratio,
    norms_from_spectrum,
    radial_phase_multiplier,
    random_spectrum_check,
    sequence_inequality_check,
    sequence_inequality_constant,
    sequence_search,
    windowed_symbol,
)
from oscillint.errors import CoverageError
from oscillint.grid import GridField, GridSpec
from oscillint.rng import stream

seqs = st.lists(st.floats(0, 1e3), min_size=1, max_size=24).filter(lambda a: max(a) > 1e-6)


def test_annulus_index_edges():
    r = np.array([0.0, 0.999, 1.0, 1.999, 2.0, 3.9, 4.0, 1000.0])
    assert _annulus_index(r).tolist() == [0, 0, 1, 1, 2, 2, 3, 10]


def test_single_annulus_norms():
    s = DyadicSpectrum(np.array([0, 0, 0, 2.0]), 2)
    l2, sob, bes = norms_from_spectrum(s)
    assert (l2, sob, bes) == (2.0, 2.0 * 2 ** 6, 2.0 * 2 ** 3)
    assert interpolation_ratio(s) == 1.0


def test_spectrum_validation():
    with pytest.raises(ValueError):
        DyadicSpectrum(np.array([]), 2)
    with pytest.raises(ValueError):
        DyadicSpectrum(np.array([1.0, -1.0]), 2)
    with pytest.raises(ValueError):
        interpolation_ratio(DyadicSpectrum(np.zeros(4), 2))
    with pytest.raises(ValueError):
        dyadic_spectrum(GridField(GridSpec(2, 1.0, 8, "space_side"), np.ones((8, 8))))


@pytest.fixture(scope="module")
def spec16():
    G = windowed_symbol(16)
    return G, dyadic_spectrum(G)


def test_parseval(spec16):
    G, s = spec16
    assert math.sqrt(np.sum(s.a ** 2)) == pytest.approx(G.l2_norm(), rel=1e-8)
    assert s.truncation_tail < 1e-6 * s.weighted().max()


def test_spectrum_peaks_near_lambda(spec16):
    _, s = spec16
    k = int(np.argmax(s.a))
    assert abs(k - (math.log2(16) + 1)) <= 1
    assert 2.0 ** s.K >= 8 * 16


@pytest.mark.parametrize("lam", [0.0, 1.0, 4.0])
def test_small_lambda_window(lam):
    s = dyadic_spectrum(windowed_symbol(lam))
    assert int(np.argmax(s.a)) <= 4
    assert s.truncation_tail < 1e-6 * s.weighted().max()


def test_coverage_error_on_coarse_grid():
    G = windowed_symbol(16)
    coarse = GridSpec(2, 2.0, 64)
    sub = GridField(coarse, G.samples[::8, ::8], dict(G.meta))
    with pytest.raises(CoverageError):
        dyadic_spectrum(sub)


def test_conjugate_symbol_has_same_norm():
    assert besov_norm(16) == pytest.approx(besov_norm(-16), rel=1e-10)


def test_besov_grows_like_lambda():
    b = [besov_norm(l) for l in (16, 32)]
    assert b[1] / b[0] == pytest.approx(2.0, rel=0.15)


def test_dilation_invariance_and_negative_control():
    assert dilation_invariance_check(16, (0.5, 2.0, 7.5)) < 1e-10 * besov_norm(16)
    assert dilation_invariance_check(16, (0.5, 2.0, 7.5), radial_phase_multiplier) > 0.1
    with pytest.raises(ValueError):
        dilation_invariance_check(16, (0.0,))


@pytest.mark.parametrize("A", [1.2, math.sqrt(2), 2.0, 4.0])
def test_single_spike_is_exactly_one(A):
    for k in range(10):
        a = np.zeros(12)
        a[k] = 3.7
        assert sequence_inequality_check(a, A)[2] == 1.0


@pytest.mark.parametrize("A", [math.sqrt(2), 2.0])
def test_two_spikes_far_apart_tend_to_one(A):
    # closed form (1 + A^-2m)^(3/4) / (1 + A^-6m)^(1/4), decreasing to 1
    ratios = []
    for m in (1, 3, 6, 12, 40):
        a = np.zeros(m + 1)
        a[0], a[m] = 1.0, A ** (-3 * m)
        r = sequence_inequality_check(a, A)[2]
        assert r == pytest.approx((1 + A ** (-2 * m)) ** 0.75 / (1 + A ** (-6 * m)) ** 0.25, rel=1e-13)
        ratios.append(r)
    assert all(b < a for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] == pytest.approx(1.0, abs=1e-10)
    assert all(r <= sequence_inequality_constant(A) for r in ratios)


@settings(max_examples=60, deadline=None)
@given(seqs, st.floats(1.1, 8.0), st.floats(1e-3, 1e3), st.integers(0, 5))
def test_ratio_invariances_and_bound(a, A, c, shift):
    a = np.array(a)
    r = sequence_inequality_check(a, A)[2]
    assert sequence_inequality_check(c * a, A)[2] == pytest.approx(r, rel=1e-9)
    assert sequence_inequality_check(np.concatenate([np.zeros(shift), a]), A)[2] == pytest.approx(r, rel=1e-9)
    assert r <= sequence_inequality_constant(A)


def test_lhs_rhs_match_direct_sums():
    a, A = np.array([0.3, 1.0, 0.0, 2.5]), 2.0
    k = np.arange(4)
    lhs, rhs, r = sequence_inequality_check(a, A)
    assert lhs == pytest.approx(np.sum(A ** k * a))
    assert rhs == pytest.approx((np.sum(a ** 2) * np.sum(A ** (4 * k) * a ** 2)) ** 0.25)
    assert r == pytest.approx(lhs / rhs)


def test_flat_sequence_below_constant():
    a = np.ones(40)
    assert sequence_inequality_check(a, 2.0)[2] <= sequence_inequality_constant(2.0)


def test_constant_shape():
    As = np.linspace(1.2, 4.0, 30)
    C = [sequence_inequality_constant(A) for A in As]
    assert all(c >= 1 for c in C)
    assert all(b < a for a, b in zip(C, C[1:]))
    assert sequence_inequality_constant(2.0) == pytest.approx(96 ** 0.25)


@pytest.mark.parametrize("bad", [1.0, 0.5, -2.0])
def test_base_rejected(bad):
    with pytest.raises(ValueError):
        sequence_inequality_constant(bad)
    with pytest.raises(ValueError):
        sequence_inequality_check([1.0], bad)


def test_sequence_rejects_bad_input():
    with pytest.raises(ValueError):
        sequence_inequality_check([0.0, 0.0], 2.0)
    with pytest.raises(ValueError):
        sequence_inequality_check([1.0, -0.1], 2.0)


def test_search_is_deterministic_and_bounded():
    a = sequence_search(2.0, trials=3000, max_len=16, seed=5, restarts=8, ascent_steps=100)
    b = sequence_search(2.0, trials=3000, max_len=16, seed=5, restarts=8, ascent_steps=100)
    assert a == b
    assert a["holds"] and a["single_spike_ratio"] == 1.0
    assert a["max_ratio"] >= a["random_max_ratio"] > 1.0
    c = sequence_search(2.0, trials=3000, max_len=16, seed=6, restarts=8, ascent_steps=100)
    assert c["random_max_ratio"] != a["random_max_ratio"]


def test_random_spectra():
    res = random_spectrum_check(200, dimension=3, seed=1)
    assert res["A"] == pytest.approx(2 ** 1.5) and res["holds"]


def test_streams_are_independent_and_reproducible():
    x = stream(1, "a").random(4)
    assert np.array_equal(x, stream(1, "a").random(4))
    assert not np.array_equal(x, stream(1, "b").random(4))
    assert not np.array_equal(x, stream(2, "a").random(4))
