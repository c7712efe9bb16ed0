# %% [markdown]
# Phase estimation for x = 35, r = 40 with four control qubits.
#
# gcd(35, 40) = 5, so N = 40/5 = 8 and the eigenphases are s/8. With
# 2^4 = 16 outcomes every phase s/8 lands exactly on an even m, so the
# distribution is flat over the eight even outcomes.

# %%
import sys

import numpy as np

from qgcd import exact_distribution, recover_fraction, statevector_distribution

probs = exact_distribution(35, 40, 4)
for m, p in enumerate(probs):
    print(f"m={m:2d}  {p:.4f}  {'#' * int(round(p * 80))}")

# the gate-level simulation gives the same numbers
print("max diff vs statevector:", np.abs(probs - statevector_distribution(35, 40, 4)).max())

# %% [markdown]
# Take m_out = 2. Then b = 2/16, b*r = 5 and p/r = 5/40 = 1/8, so N = 8.

# %%
f = recover_fraction(2, 4, 40)
print(f"p = {f.p}, p/r = {f.reduced}, N = {f.N}, gcd = {40 // f.N}")

# %%
if "--plot" in sys.argv:
    import matplotlib.pyplot as plt

    plt.bar(range(16), probs)
    plt.xlabel("m_out")
    plt.ylabel("probability")
    plt.title("x = 35, r = 40, t = 4")
    plt.savefig("flat.png", dpi=120)
    print("wrote flat.png")
