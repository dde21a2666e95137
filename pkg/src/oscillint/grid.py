"""Regular box grids carrying complex samples, and their binary container."""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

FOURIER_SIDE = "fourier_side"
SPACE_SIDE = "space_side"
_SIDES = (FOURIER_SIDE, SPACE_SIDE)

MAGIC = b"GFLD"
_HEADER = struct.Struct("<4sHHIdB7x")  # magic, version, dimension, N, L, side


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Geometry of a centred box grid ``[-L, L)^d`` with ``N`` nodes per axis.

    Node ``j`` along an axis sits at ``-L + j*h`` with ``h = 2L/N``.
    """

    dimension: int
    box_half_side: float
    points_per_axis: int
    side: str = FOURIER_SIDE

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise ValueError("dimension must be 1, 2 or 3")
        if not _is_pow2(self.points_per_axis):
            raise ValueError(f"points_per_axis must be a power of two, got {self.points_per_axis}")
        if self.box_half_side <= 0:
            raise ValueError("box_half_side must be positive")
        if self.side not in _SIDES:
            raise ValueError(f"side must be one of {_SIDES}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.box_half_side / self.points_per_axis

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dimension

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.dimension

    def axis(self) -> np.ndarray:
        n = self.points_per_axis
        return -self.box_half_side + self.spacing * np.arange(n)

    def dual(self) -> "GridSpec":
        """Grid on the other side of the Fourier transform (spacing ``1/(2L)``)."""
        n = self.points_per_axis
        other = SPACE_SIDE if self.side == FOURIER_SIDE else FOURIER_SIDE
        return GridSpec(self.dimension, n / (4.0 * self.box_half_side), n, other)

    def mesh(self, sparse: bool = True):
        ax = self.axis()
        return np.meshgrid(*([ax] * self.dimension), indexing="ij", sparse=sparse)

    def radius(self) -> np.ndarray:
        m = self.mesh()
        r2 = m[0] ** 2
        for a in m[1:]:
            r2 = r2 + a ** 2
        return np.sqrt(r2)

    def nearest_index(self, point) -> tuple:
        p = np.atleast_1d(np.asarray(point, dtype=float))
        idx = np.rint((p + self.box_half_side) / self.spacing).astype(int)
        if np.any(idx < 0) or np.any(idx >= self.points_per_axis):
            raise ValueError(f"point {p} outside the grid")
        return tuple(int(i) for i in idx)

    def node(self, index) -> np.ndarray:
        return -self.box_half_side + self.spacing * np.asarray(index, dtype=float)


@dataclass
class GridField:
    """Complex samples on a `GridSpec`, plus free-form metadata."""

    grid: GridSpec
    samples: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.samples = np.asarray(self.samples)
        if self.samples.shape != self.grid.shape:
            raise ValueError(f"samples shape {self.samples.shape} != grid shape {self.grid.shape}")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")

    @property
    def dimension(self) -> int:
        return self.grid.dimension

    @property
    def side(self) -> str:
        return self.grid.side

    @property
    def lam(self):
        return self.meta.get("lambda")

    def at(self, point) -> complex:
        return complex(self.samples[self.grid.nearest_index(point)])

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.grid.cell_volume))

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, c):
        return GridField(self.grid, self.samples * c, dict(self.meta))

    __rmul__ = __mul__

    def _combine(self, other, op):
        if other.grid != self.grid:
            raise ValueError("grids differ")
        return GridField(self.grid, op(self.samples, other.samples), {})


def save_field(path, fld: GridField, sidecar: dict | None = None) -> None:
    """Write the binary container and a JSON sidecar ``<path>.json``.

    The sidecar holds the field's metadata, updated with ``sidecar``.
    """
    path = Path(path)
    g = fld.grid
    header = _HEADER.pack(MAGIC, 1, g.dimension, g.points_per_axis, g.box_half_side, _SIDES.index(g.side))
    payload = np.ascontiguousarray(fld.samples, dtype="<c16").view("<f8")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload.tobytes())
    meta = dict(fld.meta)
    meta.update(sidecar or {})
    Path(str(path) + ".json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def load_field(path) -> GridField:
    path = Path(path)
    raw = path.read_bytes()
    magic, version, dim, n, half, side = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC or version != 1:
        raise ValueError(f"{path}: not a GridField container")
    grid = GridSpec(dim, half, n, _SIDES[side])
    data = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
    if data.size != 2 * n ** dim:
        raise ValueError(f"{path}: truncated payload")
    samples = data.view("<c16").reshape(grid.shape).astype(np.complex128)
    meta = {}
    side_json = Path(str(path) + ".json")
    if side_json.exists():
        meta = json.loads(side_json.read_text())
    return GridField(grid, samples, meta)
