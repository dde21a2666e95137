# Lower bounds for the L_p norm from the indicator of a small ball.
#cell 1
from oscillint.opnorm import lp_ladder

res = lp_ladder([16, 32, 64], ps=[1.0, 4 / 3, 2.0, 4.0])
for p, rep in res["reports"].items():
    vals = ", ".join(f"{v:.3g}" for v in rep.values)
    print(f"p={p:.4g}: ratios [{vals}]  slope {rep.fitted_slope:.3f} (expected {rep.reference_slope:.3f})")

#cell 2
# p = 4 is read off the adjoint at p' = 4/3, so it repeats the 4/3 row up to conjugation
for lam, d in res["per_lambda"].items():
    print(lam, d[4.0]["source"], round(d[4.0]["ratio"] / d[4 / 3]["ratio"], 4), "sup|M| =", round(d["sup_symbol"], 4))
