"""End-to-end Poisson intensity estimation by Haar-domain Skellam shrinkage.

Counts are decomposed with the unnormalized Haar transform, each detail
subband gets its shrinkage parameter from the observed coefficients alone
(risk minimization or moment-matched prior), every wavelet coefficient is
shrunk with its own scaling coefficient standing in for ``s``, and the
estimate is reconstructed and clipped at zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bayes, risk, stabilize
from .errors import InfeasibleTargetError, ParameterDomainError
from .haar import BANDS_2D, UNDECIMATED, decompose, reconstruct

SKELLAM_METHODS = ("SS", "SB", "SBG", "SBT", "SBL", "SH", "HF_URE")
BASELINE_METHODS = ("ANSCOMBE_UNIV_HARD", "ANSCOMBE_UNIV_SOFT", "ANSCOMBE_SURE",
                    "HAARFISZ_SURE")
METHODS = SKELLAM_METHODS + BASELINE_METHODS + ("IDENTITY",)

VAR_FLOOR = 1e-6


@dataclass
class DenoiseConfig:
    """Denoiser settings.

    ``sigma_x`` overrides the empirical-Bayes / risk-minimizing scale for the
    Bayes rules and SH; ``pool_orientations`` shares one parameter across the
    three 2-D detail bands of a level.  ``seed`` is carried for provenance;
    the denoiser itself is deterministic.
    """

    method: str = "SS"
    levels: int = 3
    mode: str = UNDECIMATED
    prior: str = bayes.LAPLACE
    seed: int | None = None
    sigma_x: float | None = None
    pool_orientations: bool = False

    def __post_init__(self):
        self.method = self.method.upper()
        if self.method not in METHODS:
            raise ParameterDomainError(f"unknown method {self.method!r}")
        if self.levels < 1:
            raise ParameterDomainError("levels must be >= 1")
        if self.prior not in bayes.FAMILIES:
            raise ParameterDomainError(f"unknown prior family {self.prior!r}")


@dataclass
class SubbandStats:
    var_x_hat: float
    sigma_x: float
    n: int


@dataclass
class DenoiseResult:
    estimate: np.ndarray
    params: dict = field(default_factory=dict)


def estimate_prior_var(y, t) -> float:
    """Moment estimate ``mean(y**2 - t)`` of the latent coefficient variance, floored."""
    y = np.asarray(y, dtype=np.int64)
    t = np.asarray(t, dtype=np.int64)
    # integer sum keeps the estimate independent of coefficient order
    return max(VAR_FLOOR, int(np.sum(y * y - t)) / y.size)


def plug_in_s(t):
    """Observed scaling coefficient as the estimate of ``s``."""
    return np.asarray(t)


def subband_stats(y, t, family) -> SubbandStats:
    """Moment-matched prior scale for one subband.

    The implicit truncated-variance equation is solved at the mean scaling
    coefficient; if the target is not attainable there, ``sigma_x**2`` is set
    to the moment estimate directly.
    """
    v = estimate_prior_var(y, t)
    s_bar = int(np.sum(t)) / np.size(t)
    try:
        sig = bayes.solve_scale(v, s_bar, family)
    except InfeasibleTargetError:
        sig = math.sqrt(v)
    return SubbandStats(v, sig, int(np.size(y)))


def _bayes_family(method, cfg):
    if method == "SBG":
        return bayes.GAUSSIAN
    if method in ("SBT", "SBL"):
        return bayes.LAPLACE
    return cfg.prior


def _shrink_group(method, y, t, cfg):
    """Shrunk coefficients and the resolved parameter for one pooled group."""
    s = plug_in_s(t).astype(float)
    if method == "IDENTITY":
        return y.astype(float), None
    if method == "SS":
        tau, _ = risk.optimize_ss(y, t)
        return stabilize.soft_threshold(y, tau), tau
    if method == "SH":
        sig = cfg.sigma_x if cfg.sigma_x is not None else risk.optimize_sh(y, t)[0]
        return y + risk.sh_theta(y, t, sig), sig
    if method == "HF_URE":
        tau, _ = risk.optimize_hf(y, t)
        return y + risk.hf_theta(y, t, tau), tau
    if method == "HAARFISZ_SURE":
        z = stabilize.haar_fisz_fwd(y, t)
        tau = stabilize.sureshrink_threshold(z, 1.0)
        return stabilize.haar_fisz_inv(stabilize.soft_threshold(z, tau), t), tau
    family = _bayes_family(method, cfg)
    sig = cfg.sigma_x if cfg.sigma_x is not None else subband_stats(y, t, family).sigma_x
    if method == "SBG":
        return bayes.shrink_sbg(y, s, sig), sig
    if method == "SBT":
        return bayes.shrink_sbt(y, s, sig), sig
    if method == "SBL":
        return bayes.shrink_sbl(y, s, bayes.Prior(family, sig)), sig
    if method == "SB":
        return bayes.posterior_mean(y, s, bayes.Prior(family, sig)), sig
    raise ParameterDomainError(f"unknown method {method!r}")


def _groups(pyr, pool):
    for k, bands in enumerate(pyr.details, start=1):
        names = list(bands)
        if pool and pyr.ndim == 2:
            yield k, [n for n in BANDS_2D if n in bands]
        else:
            for n in names:
                yield k, [n]


def _denoise_skellam(g, cfg):
    pyr = decompose(g, cfg.levels, cfg.mode)
    new_y, params = {}, {}
    for k, names in _groups(pyr, cfg.pool_orientations):
        ys = [pyr.details[k - 1][n].y for n in names]
        ts = [pyr.details[k - 1][n].t for n in names]
        if ys[0].size == 0:
            continue
        y = np.concatenate([a.ravel() for a in ys])
        t = np.concatenate([a.ravel() for a in ts])
        est, p = _shrink_group(cfg.method, y, t, cfg)
        est = np.asarray(est, dtype=float)
        off = 0
        for n, a in zip(names, ys):
            new_y[(k, n)] = est[off:off + a.size].reshape(a.shape)
            off += a.size
        params["+".join(f"{k}{n}" for n in names)] = p
    out = reconstruct(pyr.replace_details(new_y))
    return np.asarray(out, dtype=float), params


def _noise_scale(k, ndim):
    # std of a level-k unnormalized Haar detail of unit-variance white noise
    return 2.0 ** (k / 2.0) if ndim == 1 else 2.0**k


def _denoise_anscombe(g, cfg):
    z = stabilize.anscombe(g)
    pyr = decompose(z, cfg.levels, cfg.mode)
    n = z.size
    new_y, params = {}, {}
    for k, name, band in pyr.subbands():
        sig = _noise_scale(k, z.ndim)
        if cfg.method == "ANSCOMBE_SURE":
            tau = sig * stabilize.sureshrink_threshold(band.y / sig, 1.0)
        else:
            tau = stabilize.universal_threshold(max(n, 2), sig)
        if cfg.method == "ANSCOMBE_UNIV_HARD":
            new_y[(k, name)] = stabilize.hard_threshold(band.y, tau)
        else:
            new_y[(k, name)] = stabilize.soft_threshold(band.y, tau)
        params[f"{k}{name}"] = tau
    return stabilize.anscombe_inv(reconstruct(pyr.replace_details(new_y))), params


def denoise_with_params(g, cfg: DenoiseConfig) -> DenoiseResult:
    """Denoise and report the resolved per-subband parameters."""
    g = np.asarray(g)
    if g.dtype.kind not in "iu":
        if not np.all(g == np.round(g)):
            raise ParameterDomainError("input must be integer counts")
        g = g.astype(np.int64)
    if np.any(g < 0):
        raise ParameterDomainError("counts must be nonnegative")
    g = g.astype(np.int64)
    if not np.any(g):
        return DenoiseResult(np.zeros(g.shape), {})
    if cfg.method.startswith("ANSCOMBE"):
        est, params = _denoise_anscombe(g, cfg)
    else:
        est, params = _denoise_skellam(g, cfg)
    return DenoiseResult(np.maximum(est, 0.0), params)


def denoise(g, cfg: DenoiseConfig | None = None) -> np.ndarray:
    """Nonnegative intensity estimate with the same shape as ``g``."""
    return denoise_with_params(g, cfg or DenoiseConfig()).estimate
