# %% [markdown]
# One control qubit instead of t: the semiclassical run measures one bit
# per round and feeds it forward as a phase correction. Its statistics match
# the full inverse QFT.

# %%
import numpy as np

from qgcd import build_qpe_circuit, emit_text, exact_distribution, resource_report
from qgcd.qpe import empirical_distribution, kitaev_feedback_schedule, run_kitaev_qpe

est = run_kitaev_qpe(35, 40, 4, 50_000, seed=1)
emp = empirical_distribution(est, 4)
print("TV distance:", 0.5 * np.abs(emp - exact_distribution(35, 40, 4)).sum())
for rnd, bit, phase in kitaev_feedback_schedule(4):
    print(f"round {rnd}: if bit {bit} was 1 rotate by -pi*{phase}")

# %% [markdown]
# The full circuit as text, and what it costs.

# %%
c = build_qpe_circuit(35, 40, 4)
print(emit_text(c))
for line in resource_report(c, 0.25).lines():
    print(line)
