"""
Counting solutions by counting short vectors
============================================

After appending one 0/1 variable every solution lies on the surface of the
box, and the lattice vectors of l_inf norm 1 come in sign pairs, one pair
per solution.
"""

from bipsap import BkpInstance, count_bkp_via_sap, oracle_count
from bipsap.pipeline import RunStats
from bipsap.preprocess import force_surface

inst = BkpInstance(a=(1, 1), b=2, u=(2, 2))

# The appended variable has a large coefficient, so it must equal 1
surf, _ = force_surface(inst)
print("surface-forced knapsack:", surf)

stats = RunStats()
count = count_bkp_via_sap(inst, stats=stats)
print("short vectors found:", stats.short_vectors, "-> solutions:", count)
print("brute force agrees:", count == oracle_count(inst.as_bip()))

# A slightly larger example; the node counter shows how much was searched
inst = BkpInstance(a=(3, 5, 7, 2), b=17, u=(3, 2, 2, 4))
stats = RunStats()
print("count:", count_bkp_via_sap(inst, stats=stats), "oracle:", oracle_count(inst.as_bip()))
print("nodes visited:", stats.nodes_visited)
