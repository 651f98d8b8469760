"""
Water-filling over eigenmodes
=============================

Each mode pairs a data eigenvalue ``delta``, a channel gain ``lambda`` and a
leverage ``R``. When every mode is worth using, the powers have a closed form;
otherwise weak modes are switched off and the water level is recomputed.
"""

import numpy as np

from aircomp.waterfill import ModeSet, all_active_allocation, objective, solve

###############################################################################
# Two modes, both active. The budget is spent exactly: 2 * 0.964 + 1.071 = 3.

modes = ModeSet(deltas=[2.0, 1.0], lambdas=[1.0, 1.0], leverages=[1.0, 1.0], budget=3.0, active_limit=2)
alloc = solve(modes)
print("powers        ", np.round(alloc.phi_sq, 5))
print("multiplier mu ", round(alloc.multiplier, 5))
print("objective     ", round(objective(modes, alloc.phi_sq), 5))

###############################################################################
# A weak second mode with a small budget: the all-active formula asks for a
# negative power, so that mode is dropped and the first one takes everything.

weak = ModeSet(deltas=[1.0, 1.0], lambdas=[10.0, 0.1], leverages=[1.0, 1.0], budget=0.1, active_limit=2)
print("all-active candidate", np.round(all_active_allocation(weak), 4))
print("water-filled        ", np.round(solve(weak).phi_sq, 4))

###############################################################################
# More budget never hurts.

for budget in (0.1, 1.0, 10.0, 100.0):
    m = ModeSet([3.0, 2.0, 1.0], [4.0, 1.0, 0.2], [1.0, 0.5, 2.0], budget, 3)
    a = solve(m)
    print(f"P0={budget:6.1f}  active={a.active_set.tolist()}  f={objective(m, a.phi_sq):.4f}")
