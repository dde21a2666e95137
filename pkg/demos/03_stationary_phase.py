# The spatial construction: one-dimensional stationary phase along the
# constrained great circle, and the size of the kernel on a box of points.
#cell 1
from oscillint.asymptotics import parallelepiped_scan, verify_statphase

res = verify_statphase((8, 16, 32))
for row in res["rows"]:
    if row["direction"] == 0:
        print(f"lam={row['lambda']:4g}  |leading|={row['leading_abs']:.4e}  rel.err={row['rel_error']:.3e}")
print("error ratio per doubling:", [round(v, 3) for v in res["per_direction"][0]["error_ratios"]])
print("leading-term slope:", round(res["per_direction"][0]["leading_slope"], 4))

#cell 2
for lam in (8, 16):
    rep = parallelepiped_scan(lam, n=(5, 3, 3))
    e = rep.extras
    print(f"lam={lam}: min |K| lam^1.5 = {e['min_scaled_magnitude']:.3f}, "
          f"max = {e['max_scaled_magnitude']:.3f}, phase gradient = {e['phase_lipschitz']:.3f}")
