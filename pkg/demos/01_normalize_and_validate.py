"""
Normalizing polynomial densities over boxes
===========================================

A density f on a box becomes a probability density after dividing by its
total mass omega.  This walks the three standard cases: the constant
density on [0, 6] (the fair die), a polynomial density, and a truncated
Gaussian series, each checked against the probability axioms.
"""

import numpy as np

from provar import (
    Box,
    MultiPoly,
    SeriesSpec,
    normalize,
    truncated_series,
    validate_density,
)

# the fair die: f = 1 on [0, 6] has mass 6, so the normalizer is 1/6
pair = normalize(MultiPoly.constant(1, 1.0), Box((0.0,), (6.0,)))
print("constant on [0, 6]: omega = %.12f, normalizer = %.12f"
      % (pair.omega, pair.normalizer))

# a polynomial density: f(x) = x^2 on [0, 1] has mass 1/3
x = MultiPoly.variable(1, 0)
pair = normalize(x * x, Box((0.0,), (1.0,)))
print("x^2 on [0, 1]:      omega = %.12f, normalizer = %.12f"
      % (pair.omega, pair.normalizer))

# the normalized density integrates to one and is nonnegative; validate
# scans a grid for the minimum and re-integrates
report = validate_density(pair)
print("validation: passed=%s, min density %.3e, re-integral %.12f"
      % (report.passed, report.min_density, report.reintegral))

# a degree-40 truncated Gaussian stays positive on [-4, 4] and its
# normalized form passes both axioms
gauss = truncated_series(SeriesSpec.gaussian(0.0, 1.0, 20))
pair = normalize(gauss, Box((-4.0,), (4.0,)))
report = validate_density(pair)
print("truncated gaussian (K=20) on [-4, 4]: omega = %.6f, passed=%s"
      % (pair.omega, report.passed))

# a sign-changing density cannot be a probability density; the report
# names the violated axiom instead of raising
from provar import ProbabilisticPair, QuadratureSpec

bad = ProbabilisticPair(density=x, box=Box((-1.0,), (1.0,)), omega=1.0,
                        normalizer=1.0, quadrature=QuadratureSpec.gauss(4))
report = validate_density(bad)
print("signed density f(x) = x: passed=%s, failed_check=%r"
      % (report.passed, report.failed_check))
