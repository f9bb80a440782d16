"""
Integer solutions of x1 + l x2 + ... + l^n x_(n+1) = gamma t
============================================================

The constant vector (t, ..., t) solves it. Every other solution has a
component of size at least |l| - |t|. Exhaustive search over a box
confirms this, and recovers each solution's integer parameters.
"""

from bipsap.diophantine import DioInstance, dio_check_lemma, dio_enumerate, dio_parameterize

inst = DioInstance(lam=10, n=2, t=1)
print("gamma =", inst.gamma)

for x in dio_enumerate(inst, box=12):
    print(x, "parameters", dio_parameterize(inst, x))

# Within a box smaller than lambda - |t| only the constant solution survives
print("box 8:", dio_enumerate(inst, box=8))

for lam in (10, 33):
    for t in range(-2, 3):
        assert dio_check_lemma(DioInstance(lam, 3, t), box=2 * lam)
print("bound holds for lambda in {10, 33}, n = 3, t in -2..2")
