"""
Persistent homology of point clouds
===================================

The Vietoris-Rips filtration grows balls around the points; persistence
records when components, loops, and voids appear and disappear.  First
the textbook square, worked by hand, then a real curve.
"""

import numpy as np

from provar import (
    betti_at,
    build_rips,
    builtin_variety,
    compute_persistence,
    persistent_betti_summary,
    sample_parametric,
)

# four corners of the unit square: components merge along the sides at
# scale 1, the loop they enclose fills at the diagonal sqrt(2)
square = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
filt = build_rips(square, max_dim=1, max_scale=2.0)
diag = compute_persistence(filt)
print("unit square, %d simplices" % filt.simplex_count)
for k in (0, 1):
    for birth, death in diag.bars(k):
        print("  H%d bar: (%.4f, %s)"
              % (k, birth, "inf" if np.isinf(death) else "%.4f" % death))
print("  betti at 1.2: %s   betti at 1.5: %s"
      % (betti_at(diag, 1.2), betti_at(diag, 1.5)))

# the elliptic curve's real locus in the box has two pieces, one of
# which is a closed oval: expect two components and one loop
v = builtin_variety("elliptic")
cloud = sample_parametric(v, 400, seed=0)
filt = build_rips(cloud, max_dim=1)
diag = compute_persistence(filt)
summary = persistent_betti_summary(diag, 0.2)
print("\nelliptic curve, n=400, max_scale %.3f, %d simplices"
      % (filt.max_scale, filt.simplex_count))
print("  significant betti summary (ratio 0.2): %s" % (summary,))
print("  long H1 bars:")
for birth, death in diag.bars(1):
    if death - birth > 0.2 * filt.max_scale:
        print("    (%.3f, %.3f)" % (birth, death))
