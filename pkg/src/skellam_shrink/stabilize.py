"""Variance-stabilization baselines (Anscombe, Haar-Fisz) and Gaussian thresholds."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterDomainError
from .risk import sure_gaussian_all

ANSCOMBE = "anscombe"
HAAR_FISZ = "haar_fisz"


@dataclass
class StabilizedField:
    """Approximately unit-variance values plus what is needed to invert them."""

    values: np.ndarray
    provenance: str
    t: np.ndarray | None = None

    def invert(self):
        if self.provenance == ANSCOMBE:
            return anscombe_inv(self.values)
        return haar_fisz_inv(self.values, self.t)


def anscombe(g):
    """``2 sqrt(g + 3/8)``."""
    g = np.asarray(g, dtype=float)
    if np.any(g < 0):
        raise ParameterDomainError("Anscombe transform needs nonnegative counts")
    return 2.0 * np.sqrt(g + 0.375)


def anscombe_inv(z):
    """Algebraic inverse ``(z/2)**2 - 3/8``."""
    z = np.asarray(z, dtype=float)
    return (z / 2.0) ** 2 - 0.375


def haar_fisz_fwd(y, t):
    """Wavelet coefficients divided by the root of their scaling coefficients."""
    y = np.asarray(y, dtype=float)
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(t > 0, y / np.sqrt(np.where(t > 0, t, 1.0)), 0.0)
    return out


def haar_fisz_inv(z, t):
    return np.asarray(z, dtype=float) * np.sqrt(np.maximum(np.asarray(t, dtype=float), 0.0))


def universal_threshold(n, sigma):
    """``sigma sqrt(2 ln n)``."""
    if n < 2:
        raise ValueError("universal threshold needs n >= 2")
    return sigma * math.sqrt(2.0 * math.log(n))


def hard_threshold(c, tau):
    c = np.asarray(c, dtype=float)
    return np.where(np.abs(c) > tau, c, 0.0)


def soft_threshold(c, tau):
    c = np.asarray(c, dtype=float)
    return np.sign(c) * np.maximum(np.abs(c) - tau, 0.0)


def sureshrink_threshold(coeffs, sigma=1.0):
    """SURE-minimizing soft threshold over ``{0} U {|c_i|}``, capped at universal."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    c = np.abs(np.asarray(coeffs, dtype=float)).ravel()
    cands = np.unique(np.concatenate([[0.0], c]))
    vals = sure_gaussian_all(cands, c, sigma * sigma)
    tau = float(cands[int(np.argmin(vals))])
    if c.size >= 2:
        tau = min(tau, universal_threshold(c.size, sigma))
    return tau
