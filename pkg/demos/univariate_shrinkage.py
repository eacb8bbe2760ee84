"""
Shrinking single coefficients under a known prior
==================================================

Latent coefficients are drawn from a truncated Laplace prior and observed
through Skellam noise with ``s = 100``. Risk-based rules (SS, SH) are tuned on
the data; Bayes rules (SB, SBL, SBT) use the true prior scale.
"""

from skellam_shrink import bench

for var_x in (32.0, 128.0):
    spec = bench.UnivariateDrawSpec("laplace", var_x, s=100.0, n=10_000)
    res = bench.run_univariate_bench(spec, seed=1)
    print(f"var_x = {var_x}")
    for m, d in res.items():
        print(f"  {m:4s} mean squared error {d['mean']:7.2f}")
