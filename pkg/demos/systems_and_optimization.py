"""
Systems of equations and linear objectives
==========================================

Several equations fold into one with the same box solutions. Negative
coefficients are flipped, and the result goes through the lattice. An
objective is minimized by bisection, one lattice solve per probe.
"""

from bipsap import BipInstance, oracle_optimize, optimize_bip, solve_bip
from bipsap.pipeline import RunStats
from bipsap.preprocess import aggregate, positivize

# x1 + x2 = 3 and x1 + 2 x2 = 5 over 0 <= x <= 3
system = BipInstance(A=[[1, 1], [1, 2]], b=[3, 5], u=[3, 3])
single, trail = aggregate(system)
print("folded equation:", single.A[0], "=", single.b[0], "multipliers", trail.steps[0].multipliers)
print("lattice solution:", solve_bip(system))

# A row with mixed signs: the negative column is flipped to x -> u - x
mixed = BipInstance(A=[[-2, 3, 1]], b=[2], u=[2, 1, 3])
knapsack, steps = positivize(mixed.A[0], mixed.b[0], mixed.u)
print("positive form:", knapsack, "via", steps.steps)
print("solution:", solve_bip(mixed))

# Minimize x1 - x2 - x3 subject to the mixed row; with ties the optimal x
# may differ from the brute-force pick, but the value is the same
stats = RunStats()
best = optimize_bip(mixed, (1, -1, -1), stats=stats)
print("optimum:", best, "after", stats.probes, "probes")
print("brute force:", oracle_optimize(mixed, (1, -1, -1)))
