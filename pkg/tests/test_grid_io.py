import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscillint.grid import FOURIER_SIDE, SPACE_SIDE, GridField, GridSpec, load_field, save_field


def test_grid_geometry():
    g = GridSpec(2, 2.0, 64)
    assert g.spacing == 2.0 / 32
    assert g.cell_volume == g.spacing ** 2
    ax = g.axis()
    assert ax[0] == -2.0 and ax[32] == 0.0 and ax.size == 64
    d = g.dual()
    assert d.side == SPACE_SIDE and d.box_half_side == 64 / 8 and d.spacing == pytest.approx(1 / 4)
    assert d.dual() == g


@pytest.mark.parametrize("args", [(4, 1.0, 8), (2, 1.0, 12), (2, -1.0, 8), (2, 1.0, 8, "both")])
def test_grid_validation(args):
    with pytest.raises(ValueError):
        GridSpec(*args)


def test_nearest_index_and_node():
    g = GridSpec(2, 2.0, 64)
    idx = g.nearest_index((0.51, -0.49))
    assert np.allclose(g.node(idx), (0.5, -0.5))
    with pytest.raises(ValueError):
        g.nearest_index((5.0, 0.0))


def test_field_rejects_bad_samples():
    g = GridSpec(1, 1.0, 8)
    with pytest.raises(ValueError):
        GridField(g, np.zeros(7))
    with pytest.raises(ValueError):
        GridField(g, np.full(8, np.nan))


def test_field_arithmetic_and_norm():
    g = GridSpec(2, 1.0, 8)
    a = GridField(g, np.ones(g.shape, dtype=complex), {"lambda": 3.0})
    b = 2 * a
    assert a.lam == 3.0
    assert np.all((b - a).samples == 1)
    assert (a + a).l2_norm() == pytest.approx(2 * a.l2_norm())
    assert a.l2_norm() == pytest.approx(2.0)  # |1|^2 over [-1,1)^2
    with pytest.raises(ValueError):
        a + GridField(GridSpec(2, 2.0, 8), np.ones((8, 8)))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([1, 2, 3]), st.sampled_from([4, 8, 16]), st.floats(0.5, 10),
       st.sampled_from([FOURIER_SIDE, SPACE_SIDE]), st.integers(0, 2 ** 31))
def test_roundtrip_is_bit_exact(tmp_path_factory, dim, n, half, side, seed):
    rng = np.random.default_rng(seed)
    g = GridSpec(dim, half, n, side)
    samples = rng.normal(size=g.shape) + 1j * rng.normal(size=g.shape)
    fld = GridField(g, samples, {"lambda": 1.5, "kind": "test"})
    path = tmp_path_factory.mktemp("f") / "x.gfld"
    save_field(path, fld, {"note": "hi"})
    back = load_field(path)
    assert back.grid == g
    assert np.array_equal(back.samples, samples)
    assert back.meta == {"lambda": 1.5, "kind": "test", "note": "hi"}


def test_load_rejects_garbage(tmp_path):
    p = tmp_path / "bad.gfld"
    p.write_bytes(b"NOPE" + bytes(60))
    with pytest.raises(ValueError):
        load_field(p)
    g = GridSpec(1, 1.0, 8)
    save_field(tmp_path / "ok.gfld", GridField(g, np.zeros(8)))
    raw = (tmp_path / "ok.gfld").read_bytes()
    (tmp_path / "cut.gfld").write_bytes(raw[:-16])
    with pytest.raises(ValueError):
        load_field(tmp_path / "cut.gfld")


def test_payload_layout_is_little_endian_interleaved(tmp_path):
    g = GridSpec(1, 1.0, 4)
    fld = GridField(g, np.array([1 + 2j, 3 + 4j, 5 + 6j, 7 + 8j]))
    save_field(tmp_path / "x.gfld", fld)
    raw = (tmp_path / "x.gfld").read_bytes()
    assert raw[:4] == b"GFLD"
    payload = np.frombuffer(raw[-64:], dtype="<f8")
    assert payload.tolist() == [1, 2, 3, 4, 5, 6, 7, 8]
