# %% [markdown]
# x = 21, r = 126: N = 6, so six peaks, one per s/6.
#
# Sixths are not dyadic, so the peaks smear out over neighbouring outcomes.
# Adding control qubits narrows each peak in phase units.

# %%
import sys

import numpy as np

from qgcd import exact_distribution

for t in (4, 5, 6, 10):
    T = 1 << t
    probs = exact_distribution(21, 126, t)
    centres = sorted({round(s * T / 6) % T for s in range(6)})
    phase = np.arange(T) / T
    dist = np.abs(phase[:, None] - np.arange(6) / 6)
    dist = np.minimum(dist, 1 - dist).min(axis=1)
    near = probs[dist <= 1 / 32].sum()
    print(f"t={t:2d}  centres {centres}")
    print(f"      mass on centres {probs[centres].sum():.4f}, within 1/32 of some s/6 {near:.4f}")

# %% [markdown]
# Counting outcomes within +-1 of each centre is a poor yardstick here: at
# t = 4 those windows already cover the whole register.

# %%
if "--plot" in sys.argv:
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(4, 1, figsize=(7, 8))
    for ax, t in zip(axes, (4, 5, 6, 10)):
        ax.plot(np.arange(1 << t) / (1 << t), exact_distribution(21, 126, t), ".-", ms=3)
        ax.set_ylabel(f"t={t}")
    axes[-1].set_xlabel("m_out / 2^t")
    fig.savefig("concentration.png", dpi=120)
    print("wrote concentration.png")
