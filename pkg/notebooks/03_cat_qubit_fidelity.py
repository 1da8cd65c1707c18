# %% [markdown]
# # Transferring a coherent-state qubit
#
# The qubit `mu|alpha> + nu|-alpha>` sits on the sender exciton. Because the
# dynamics is linear, the whole state is carried by the transfer amplitudes,
# and the fidelity with the same qubit on the receiver exciton has a closed
# form in terms of coherent overlaps.

# %%
import numpy as np

from cavity_routing import CSCQ, selectivity_report
from cavity_routing.cli import figure_config
from cavity_routing.cscq import mean_photon_number, normalization, transfer_fidelity
from cavity_routing.dynamics import default_grid, evolve_series
from cavity_routing.network import SENDER_EXCITON, build_coupling_matrix, receiver_exciton

q = CSCQ.even_cat(0.5)
print("N_alpha for the unnormalised even cat:", normalization(CSCQ(1, 1, 0.5)))

config = figure_config(3)
report = selectivity_report(config, qubit=q)
series = evolve_series(build_coupling_matrix(config), default_grid(report.horizon, 9), SENDER_EXCITON)
target = receiver_exciton(1)
for k, t in enumerate(series.grid):
    row = series.row(k)
    print(f"t={t:7.0f}  fidelity={transfer_fidelity(row, q, target):.4f}  n_bar={mean_photon_number(row, q):.2e}")

# %% [markdown]
# At the transfer time the target amplitude carries a phase. The default
# fidelity compares against the qubit rotated by that phase, the strict
# one against the unrotated qubit.

# %%
row = series.at(report.t_star)
print("phase of the target amplitude:", np.angle(row[target]))
print("phase-corrected:", report.fidelity_at_t_star, " strict:", report.fidelity_strict)
