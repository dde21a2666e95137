# Sample the planar oscillating symbol, transform it, and check the FFT
# kernel against the independent one-dimensional reduction.
#cell 1
import numpy as np

from oscillint import planar_spec, sample_symbol
from oscillint.transform import dual_polar, kernel_fft, kernel_reduction_1d

lam = 16
spec = planar_spec(lam)
sym = sample_symbol(spec)
print(sym.grid, "phase step bound", round(sym.meta["phase_increment_bound"], 4))

#cell 2
kern = kernel_fft(sym)
for x, y in [(0.0, 16.0), (1.5, 18.0), (-2.0, 14.0), (8.0, 12.0)]:
    idx = kern.grid.nearest_index((x, y))
    node = kern.grid.node(idx)
    fft_val = kern.samples[idx]
    ref = kernel_reduction_1d(spec, *node)
    r, th = dual_polar(*node)
    print(f"r={r:7.3f} theta={th:+.3f}  |K|={abs(ref):.3e}  |fft-ref|={abs(fft_val - ref):.1e}")

#cell 3
# the kernel lives on the circle r ~ lam, inside the sector where the cutoff is on
r = np.broadcast_to(kern.grid.radius(), kern.grid.shape)
mass = np.abs(kern.samples) ** 2
inside = (r > 0.5 * lam) & (r < 2 * lam)
print("fraction of |K|^2 with lam/2 < r < 2 lam:", mass[inside].sum() / mass.sum())
