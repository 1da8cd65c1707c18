# %% [markdown]
# # Parameter sweeps and the command line
#
# `sweep` evaluates the selectivity report on a grid over the coupling
# and detuning of the active set or over the scan horizon. Failures stay
# inside their cell.

# %%
import tempfile
from pathlib import Path

from cavity_routing import SweepAxis, sweep
from cavity_routing.cli import figure_config, main

base = figure_config(3)
grid = sweep(base, [SweepAxis("delta", 450, 650, 5)], points=2001)
for cell in grid.cells:
    if cell.ok:
        r = cell.report
        print(f"delta={cell.params['delta']:6.1f}  t*={r.t_star:8.1f}  peak={r.peak_population:.4f}")
    else:
        print(f"delta={cell.params['delta']:6.1f}  {cell.error}")

# %% [markdown]
# The same operations are available as `cavity-routing` subcommands.

# %%
out = Path(tempfile.mkdtemp()) / "fig4.csv"
code = main(["reproduce-fig", "--fig", "4", "--points", "401", "--out", str(out)])
print("exit code", code)
print("\n".join(out.read_text().splitlines()[:8]))
print(out.with_suffix(".report.json").read_text())
