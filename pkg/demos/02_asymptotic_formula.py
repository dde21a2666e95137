# How fast r K(x, y) approaches exp(-2 pi i lam theta) Phi(lam/r) chi(-theta).
#cell 1
from oscillint.asymptotics import lemma1_ladder

res = lemma1_ladder([16, 32, 64], n_r=24, n_theta=24)
for rep in res["reports"]:
    r, th = rep.argmax
    print(f"lam={rep.lam:4g}  sup={rep.sup_discrepancy:.4f}  at r/lam={r / rep.lam:.3f}, theta={th:+.3f}")
print("strictly decreasing:", res["strictly_decreasing"], " first rung below 0.1:", res["threshold_lambda"])

#cell 2
# halving pattern: the discrepancy decays roughly like 1/lam
s = res["sups"]
print("successive ratios", [round(b / a, 3) for a, b in zip(s, s[1:])])
