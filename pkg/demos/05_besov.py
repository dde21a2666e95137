# Dyadic spectra of the oscillating window: Besov norm ~ lam and the
# interpolation ratio stays below C(2).
#cell 1
import numpy as np

from oscillint.besov import (besov_scaling_check, dilation_invariance_check,
                             radial_phase_multiplier, sequence_inequality_constant)

rep = besov_scaling_check([16, 32, 64])
print("slope", round(rep.fitted_slope, 4), "prefactor spread", round(rep.extras["prefactor_spread"], 4))
for lam, s in rep.extras["spectra"].items():
    a = np.array(s["a"])
    print(f"lam={lam:>3}: peak annulus {int(np.argmax(a))}, K={a.size - 1}, "
          f"ratio {rep.extras['interpolation_ratios'][lam]:.4f} (C = {sequence_inequality_constant(2.0):.4f})")

#cell 2
# dilating a zero-order homogeneous multiplier changes nothing; exp(i|xi|) is not homogeneous
print("homogeneous:", dilation_invariance_check(16, (0.5, 2.0, 7.5)))
print("exp(i|xi|): ", dilation_invariance_check(16, (0.5, 2.0, 7.5), radial_phase_multiplier))
