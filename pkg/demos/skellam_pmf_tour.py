"""
The Skellam distribution of a Haar coefficient
===============================================

A Haar detail ``y = a - b`` of two Poisson counts is Skellam distributed with
mean ``x`` and variance ``s``. Its scaling partner ``t = a + b`` is observed
alongside it.
"""

import numpy as np
from skellam_shrink import skellam

# pmf at a few latent means for a fixed total intensity
s = 20.0
y = np.arange(-30, 31)
for x in (0.0, 5.0, 15.0):
    p = skellam.pmf(y, x, s)
    print(f"x={x:5.1f}  mean={np.sum(y * p):7.3f}  var={np.sum((y - x) ** 2 * p):7.3f}")

# the fast Bessel kernel agrees with the defining series
print(skellam.pmf(7, 5.0, s), skellam.pmf_series(7, 12.5, 7.5))

# draw coefficient pairs: y is the difference, t the sum
rng = np.random.default_rng(0)
pair = skellam.sample(rng, np.full(5, 12.5), np.full(5, 7.5))
print(pair.y, pair.t)
