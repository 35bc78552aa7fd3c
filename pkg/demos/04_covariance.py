"""
Covariance summaries of variety clouds
======================================

The sample mean and covariance compress a cloud's spread along each
axis.  For uniform samples of the builtin varieties the limits are known
in closed form, which makes the output easy to sanity-check.
"""

import numpy as np

from provar import builtin_variety, covariance, sample_parametric

np.set_printoptions(precision=4, suppress=True)

# uniform on the unit sphere: mean 0, covariance I/3
v = builtin_variety("sphere", r=1.0)
rep = covariance(sample_parametric(v, 20000, seed=0))
print("sphere(r=1), n=20000")
print("  mean:", rep.mean)
print("  covariance:\n", rep.covariance)
print("  expected diagonal: 1/3 = %.4f\n" % (1.0 / 3.0))

# the torus spreads in x and y but is pinched in z: var(z) = r^2 / 2,
# var(x) = var(y) = (R^2 + 3 r^2 / 4) / 2 for uniform surface measure
v = builtin_variety("torus", R=2.0, r=0.5)
rep = covariance(sample_parametric(v, 20000, seed=0))
print("torus(R=2, r=0.5), n=20000")
print("  covariance diagonal:", np.diag(rep.covariance))
print("  z variance expected near r^2/2 = %.4f\n" % (0.5 ** 2 / 2.0))

# the elliptic sweep is deterministic; the off-diagonal entry is ~0 by
# the curve's symmetry in y
v = builtin_variety("elliptic")
rep = covariance(sample_parametric(v, 2000, seed=0))
print("elliptic curve, n=2000")
print("  mean:", rep.mean)
print("  covariance:\n", rep.covariance)
