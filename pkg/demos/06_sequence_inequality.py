# sum A^k a_k <= C(A) (sum a_k^2)^(1/4) (sum A^(4k) a_k^2)^(1/4)
#cell 1
import numpy as np

from oscillint.besov import sequence_inequality_check, sequence_inequality_constant, sequence_search

for A in (2 ** 0.5, 2.0, 4.0):
    res = sequence_search(A, trials=20_000)
    print(f"A={A:.4f}: C={res['constant']:.4f}  random max={res['random_max_ratio']:.4f}  "
          f"after ascent={res['max_ratio']:.4f}")

#cell 2
# the extremal shapes are two-sided geometric profiles around one index
res = sequence_search(2.0, trials=20_000)
best = np.array(res["argmax_sequence"])
k = int(np.argmax(best * 2.0 ** np.arange(best.size)))
print("peak index", k, "neighbour ratios", np.round(best[k + 1:k + 4] / best[k:k + 3], 3))

#cell 3
print("one spike:", sequence_inequality_check([0, 0, 0, 5.0], 2.0)[2])
print("flat, 40 terms:", round(sequence_inequality_check(np.ones(40), 2.0)[2], 4),
      "vs C =", round(sequence_inequality_constant(2.0), 4))
