"""Skellam-likelihood wavelet shrinkage for Poisson intensity estimation."""
from .bayes import (Prior, posterior_mean, posterior_sign_gap, shrink_sb_laplace_exact,
                    shrink_sbg, shrink_sbl, shrink_sbt, slope_origin, solve_scale,
                    theorem2_bound, theorem2_estimate, truncated_variance)
from .haar import CoefficientPyramid, Subband, decompose, max_levels, reconstruct
from .pipeline import DenoiseConfig, denoise, estimate_prior_var
from .risk import (RiskEstimate, ShrinkageRule, optimize_hf, optimize_sh, optimize_ss,
                   ss_objective, ure)
from .skellam import CountPair, SkellamParams, log_pmf, pmf, pmf_series

__all__ = [
    "CoefficientPyramid", "CountPair", "DenoiseConfig", "Prior", "RiskEstimate",
    "ShrinkageRule", "SkellamParams", "Subband", "decompose", "denoise",
    "estimate_prior_var", "log_pmf", "max_levels", "optimize_hf", "optimize_sh",
    "optimize_ss", "pmf", "pmf_series", "posterior_mean", "posterior_sign_gap",
    "reconstruct", "shrink_sb_laplace_exact", "shrink_sbg", "shrink_sbl", "shrink_sbt",
    "slope_origin", "solve_scale", "ss_objective", "theorem2_bound", "theorem2_estimate",
    "truncated_variance", "ure",
]
