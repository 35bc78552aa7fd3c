"""
Truncated series and Bernstein approximation
============================================

Two ways to land in polynomial densities: truncate a classical series
(exponential, Gaussian) at order K, or approximate any continuous
function on [0, 1] with its Bernstein polynomial B_N.
"""

import numpy as np

from provar import SeriesSpec, bernstein_values, truncated_series

# truncated exponential: sum_{k<=K} lam (-lam x)^k / k! approaches
# lam e^(-lam x); at K = 10 the value at x = 1 is already 7 digits good
for order in (2, 4, 10):
    p = truncated_series(SeriesSpec.exponential(1.0, order))
    err = abs(p.evaluate((1.0,)) - np.exp(-1.0))
    print("exponential series K=%2d: value at 1 errs by %.2e" % (order, err))

# truncated Gaussian: even powers of (x - mean), positive well past
# +-3 sigma once K = 20
p = truncated_series(SeriesSpec.gaussian(0.0, 1.0, 20))
xs = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
dens = p.eval_many(xs[:, None])
exact = np.exp(-xs * xs / 2.0) / np.sqrt(2.0 * np.pi)
for xv, dv, ev in zip(xs, dens, exact):
    print("gaussian series K=20 at %.0f: %.6f (exact %.6f)" % (xv, dv, ev))

# Bernstein approximation of a kink: B_N converges uniformly even for
# f(x) = |x - 1/2|, at the classical O(1/sqrt(N)) rate
grid = np.linspace(0.0, 1.0, 1001)
target = np.abs(grid - 0.5)
print("\nBernstein sup error for |x - 1/2|:")
for degree in (4, 16, 64, 256):
    approx = bernstein_values(lambda t: abs(t - 0.5), degree, grid)
    print("  N=%3d: %.6f" % (degree, float(np.max(np.abs(approx - target)))))

# affine functions are reproduced exactly at every degree
approx = bernstein_values(lambda t: 2.0 * t + 0.3, 64, grid)
print("affine reproduction error at N=64: %.2e"
      % float(np.max(np.abs(approx - (2.0 * grid + 0.3)))))
