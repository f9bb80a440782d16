"""
A knapsack as a short lattice vector
====================================

Build the lower-triangular basis for a two-variable knapsack, find its
shortest vector outside the hyperplane, and read the solution back off it.
"""

from fractions import Fraction

from bipsap import BkpInstance, Norm, reduce_bkp
from bipsap.reduction import check_structural_conditions, embed_solution, extract_solution
from bipsap.sap import enumerate_within, sap_shortest

# 2 x1 + 3 x2 = 5 with 0 <= x1 <= 2 and 0 <= x2 <= 1
inst = BkpInstance(a=(2, 3), b=5, u=(2, 1))
art = reduce_bkp(inst)

# The parameters: lambda is the first integer above delta * n^3 * u_max
p = art.params
print(f"s0 = s1 = {p.s0}, lambda = {p.lam}, gamma = {p.gamma}, C = {p.C}")

# The basis is 6 x 6 and lower triangular; entries are exact rationals
for row in art.basis:
    print("  ", [str(v) for v in row])

# A solution x sits in the lattice as (x/u, 0, 1 - x/u, 0)
y_hat = embed_solution(art, (1, 1))
print("embedded solution:", [str(v) for v in y_hat.y], "coefficients", y_hat.z)
print("check rows vanish, pairs sum to z_(n+1):", check_structural_conditions(art, y_hat))

# Enumerate everything of l_inf norm at most 1 outside the hyperplane
for v in enumerate_within(art.query(Norm.LINF, 1)):
    print("short vector z =", v.z, "->", extract_solution(art, v))

# Under l_1 the shortest length is exactly n when the knapsack is feasible
v = sap_shortest(art.query(Norm.L1, inst.n))
print(f"shortest l_1 length: {v.norm(Norm.L1)} (n = {inst.n})")

# An infeasible knapsack has nothing within radius 1
empty = reduce_bkp(BkpInstance(a=(2, 4), b=5, u=(3, 3)))
print("infeasible instance, vectors within 1:", enumerate_within(empty.query(Norm.LINF, Fraction(1))))
