"""
Parameter sweeps at desk scale
==============================

Runs reduced versions of the node-count and receive-antenna sweeps and prints
the normalized MSE of each design. ``aircomp reproduce fig4 --out fig4.csv``
runs the full-size version from the command line.
"""

from aircomp import DESIGN_TAGS, SystemConfig, TrialPlan, run_sweep


def show(table, variable):
    values = sorted({row.sweep_value for row in table})
    print(f"{variable:>8} " + "".join(f"{tag:>20}" for tag in DESIGN_TAGS))
    for v in values:
        cells = {row.method: row.normalized_mse for row in table if row.sweep_value == v}
        print(f"{v:>8g} " + "".join(f"{cells[tag]:>20.4f}" for tag in DESIGN_TAGS))


###############################################################################
# Number of nodes, (n, m, r) = (8, 2, 16). Spatial correlation matters more as
# the network grows.

plan = TrialPlan(SystemConfig(n=8, m=2, r=16, snr_db=25), T=4, Z=50, master_seed=0)
show(run_sweep(plan, "K", [10, 20, 30, 40]), "K")

###############################################################################
# Receive antennas with m K = 60 transmit antennas. The proposed design is
# strongest while r / mK < 1.

plan = TrialPlan(SystemConfig(n=8, m=2, K=30, snr_db=25), T=4, Z=50, master_seed=0)
show(run_sweep(plan, "r", [8, 16, 32, 60, 120]), "r")
