# %% [markdown]
# The two classical wrappers around phase estimation.
#
# Protocol A repeats the estimate and reads N from the denominators.
# Protocol B keeps shrinking the pair (x, r) the way Euclid does, stopping
# once a candidate divides both inputs.

# %%
import math

from qgcd import protocol_a, protocol_b

rec = protocol_a(21, 126, m_reps=8, seed=3)
for sample, frac in zip(rec.samples, rec.recoveries):
    print(f"m={sample.m_out:4d}  p={frac.p:3d}  p/r={frac.reduced}")
print("N_hat =", rec.N_hat, " gcd =", rec.claimed_gcd, " classical:", math.gcd(21, 126))

# %%
rec = protocol_b(35, 40, seed=7)
for i, step in enumerate(rec.iterations):
    print(i, step.to_dict())
print("gcd =", rec.claimed_gcd)

# %% [markdown]
# Failure rates over many seeds. The default epsilon of 1/4 allows a
# quarter of the rounds to be inexact, and protocol B has no way to undo
# an inexact round, so a smaller epsilon is needed for it to be reliable.

# %%
for eps in (0.25, 0.05):
    bad = sum(protocol_b(x, 48, epsilon=eps, seed=s).claimed_gcd != math.gcd(x, 48)
              for x in range(2, 48) for s in range(10))
    print(f"protocol B, r = 48, eps = {eps}: {bad} wrong out of {46 * 10}")
