"""Unbiased risk estimation for Skellam shrinkage rules.

For an estimator written as ``x_hat = y + theta(y, t)`` the per-coordinate
unbiased estimate of ``(x_hat - x)**2`` is::

    theta(y, t)**2 + t + 2 y theta(y, t)
        - (t + y) theta(y - 1, t - 1) + (t - y) theta(y + 1, t - 1)

It needs only the observed wavelet/scaling pair, so thresholds can be tuned
by minimizing the summed estimate over a subband.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvariantViolationError

SOFT = "soft_threshold"
SH = "sh"
HF = "haar_fisz_soft"
CUSTOM = "custom"


@dataclass(frozen=True)
class ShrinkageRule:
    """A coordinate-wise rule given through its perturbation ``theta(y, t)``."""

    kind: str
    param: float
    theta: Callable

    @classmethod
    def soft(cls, tau):
        return cls(SOFT, tau, lambda y, t: _soft_theta(y, tau))

    @classmethod
    def sh(cls, sigma_x):
        return cls(SH, sigma_x, lambda y, t: sh_theta(y, t, sigma_x))

    @classmethod
    def hf(cls, tau):
        return cls(HF, tau, lambda y, t: hf_theta(y, t, tau))

    @classmethod
    def custom(cls, theta, param=float("nan")):
        return cls(CUSTOM, param, theta)

    def apply(self, y, t):
        """Estimate ``y + theta(y, t)``."""
        y = np.asarray(y)
        return y + self.theta(y, np.asarray(t))


@dataclass
class RiskEstimate:
    """Summed risk estimate and its per-coefficient terms."""

    value: float
    contributions: np.ndarray


def _soft_theta(y, tau):
    y = np.asarray(y)
    return -np.sign(y) * np.minimum(np.abs(y), tau)


def sh_theta(y, t, sigma_x):
    """Adjusted-threshold rule: soft threshold at ``sqrt(2) t / sigma_x``."""
    y = np.asarray(y)
    thr = math.sqrt(2.0) * np.asarray(t, dtype=float) / sigma_x
    out = np.where(np.abs(y) >= thr, -np.sign(y) * thr, -y)
    return out[()] if out.ndim == 0 else out


def hf_theta(y, t, tau):
    """Haar-Fisz soft threshold in count units: threshold ``sqrt(t) tau``."""
    y = np.asarray(y)
    thr = np.sqrt(np.maximum(np.asarray(t, dtype=float), 0.0)) * tau
    out = -np.sign(y) * np.minimum(np.abs(y), thr)
    return out[()] if out.ndim == 0 else out


def validate_pairs(y, t):
    """Check shapes, ``t >= |y|`` and matching parity; return int arrays."""
    y = np.asarray(y)
    t = np.asarray(t)
    if y.shape != t.shape:
        raise InvariantViolationError("y and t must have the same shape")
    if y.dtype.kind not in "iu" or t.dtype.kind not in "iu":
        if not (np.all(y == np.round(y)) and np.all(t == np.round(t))):
            raise InvariantViolationError("y and t must be integer valued")
        y, t = y.astype(np.int64), t.astype(np.int64)
    if np.any(t < np.abs(y)):
        raise InvariantViolationError("scaling coefficient smaller than |wavelet coefficient|")
    if np.any((t - y) % 2):
        raise InvariantViolationError("wavelet and scaling coefficients differ in parity")
    return y.astype(np.int64), t.astype(np.int64)


def ure(rule: ShrinkageRule, y, t) -> RiskEstimate:
    """Unbiased estimate of the squared error of ``rule`` on pairs ``(y, t)``."""
    y, t = validate_pairs(y, t)
    tm = np.maximum(t - 1, 0)  # weights below vanish where the clamp bites
    th = rule.theta(y, t)
    c = th * th + t + 2 * y * th - (t + y) * rule.theta(y - 1, tm) + (t - y) * rule.theta(y + 1, tm)
    c = np.asarray(c)
    return RiskEstimate(float(np.sum(c)), c)


def ss_objective(tau: int, y, t):
    """Risk of soft thresholding at integer ``tau`` via counting sums."""
    y, t = validate_pairs(y, t)
    tau = int(tau)
    if tau < 0:
        raise ValueError("tau must be >= 0")
    m = np.abs(y)
    if tau == 0:
        # identity rule; the sign sum below would drop y == 0 coordinates
        return float(np.sum(t))
    return float(np.sum(np.sign(m - tau) * t) + np.sum(np.minimum(m * m, tau * tau))
                 - tau * np.count_nonzero(m == tau))


def ss_objective_all(y, t):
    """``ss_objective`` at every ``tau`` in ``0 .. max|y| + 1`` (integer exact)."""
    y, t = validate_pairs(y, t)
    m = np.abs(y).ravel()
    t = t.ravel()
    top = int(m.max(initial=0)) + 2
    cnt = np.bincount(m, minlength=top)
    tsum = np.zeros(top, dtype=np.int64)
    np.add.at(tsum, m, t)
    m2 = np.zeros(top, dtype=np.int64)
    np.add.at(m2, m, m * m)
    taus = np.arange(top, dtype=np.int64)
    below_t = np.concatenate([[0], np.cumsum(tsum)[:-1]])      # sum t over m < tau
    below_m2 = np.concatenate([[0], np.cumsum(m2)[:-1]])
    below_n = np.concatenate([[0], np.cumsum(cnt)[:-1]])
    total_t = int(t.sum())
    above_t = total_t - below_t - tsum
    vals = (above_t - below_t + below_m2 + taus * taus * (m.size - below_n) - taus * cnt)
    vals[0] = total_t
    return taus, vals.astype(float)


def optimize_ss(y, t):
    """Integer threshold minimizing the risk estimate; ties go to the smaller one."""
    taus, vals = ss_objective_all(y, t)
    i = int(np.argmin(vals))
    tau = int(taus[i])
    return tau, ure(ShrinkageRule.soft(tau), y, t)


def _pair_counts(y, t):
    y, t = validate_pairs(y, t)
    pairs, cnt = np.unique(np.stack([np.abs(y).ravel(), t.ravel()]), axis=1, return_counts=True)
    return pairs[0], pairs[1], cnt


def _sh_terms(m, t, lam):
    m = m.astype(float)
    t = t.astype(float)
    c0 = np.minimum(m, lam * t)
    a = lam * np.maximum(t - 1.0, 0.0)
    d = m - 1.0
    return (t + c0 * c0 - 2.0 * m * c0 + (t + m) * np.sign(d) * np.minimum(np.abs(d), a)
            - (t - m) * np.minimum(m + 1.0, a))


def sh_objective_closed(sigma_x, y, t) -> float:
    """Risk estimate of the adjusted-threshold rule in closed form.

    The rule is soft thresholding at ``lam * t`` with ``lam = sqrt(2)/sigma_x``;
    the shifted evaluations then reduce to clipped linear terms.  The terms are
    even in ``y``, so only ``|y|`` enters.
    """
    m, tt, cnt = _pair_counts(y, t)
    return float(np.dot(cnt, _sh_terms(m, tt, math.sqrt(2.0) / sigma_x)))


def optimize_sh(y, t, lo=0.1, hi=1e3, grid=50, rtol=1e-4):
    """Minimize the SH risk over ``sigma_x``: log grid, then golden section."""
    m, tt, cnt = _pair_counts(y, t)

    def f(log_sig):
        return float(np.dot(cnt, _sh_terms(m, tt, math.sqrt(2.0) / math.exp(log_sig))))

    xs = np.linspace(math.log(lo), math.log(hi), grid)
    fs = np.array([f(v) for v in xs])
    i = int(np.argmin(fs))
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > rtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    best, fbest = (c, fc) if fc <= fd else (d, fd)
    if fs[i] < fbest:
        best = xs[i]
    sigma = math.exp(best)
    return sigma, ure(ShrinkageRule.sh(sigma), y, t)


def _hf_eval(taus, mf, tf, cnt, chunk=128):
    rt, rtm = np.sqrt(tf), np.sqrt(np.maximum(tf - 1.0, 0.0))
    d = mf - 1.0
    out = np.empty(taus.size)
    for j in range(0, taus.size, chunk):
        tau = taus[j:j + chunk, None]
        c0 = np.minimum(mf, rt * tau)
        a = rtm * tau
        terms = (tf + c0 * c0 - 2.0 * mf * c0 + (tf + mf) * np.sign(d) * np.minimum(np.abs(d), a)
                 - (tf - mf) * np.minimum(mf + 1.0, a))
        out[j:j + chunk] = terms @ cnt
    return out


def _hf_interval_scan(knots, f):
    """Best point of a piecewise-quadratic ``f`` with breakpoints ``knots``.

    Each piece is fitted through its ends and midpoint and its vertex added
    as a candidate.
    """
    mids = 0.5 * (knots[1:] + knots[:-1])
    f0, fm = f(knots), f(mids)
    f0l, f1 = f0[:-1], f0[1:]
    qa = 2.0 * f0l - 4.0 * fm + 2.0 * f1
    qb = -3.0 * f0l + 4.0 * fm - f1
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(qa > 0, -qb / (2.0 * qa), -1.0)
    inside = (u > 0) & (u < 1)
    verts = knots[:-1][inside] + u[inside] * np.diff(knots)[inside]
    cands = np.concatenate([knots, mids, verts])
    vals = np.concatenate([f0, fm, f(verts)])
    return cands, vals


def optimize_hf(y, t, max_knots=1500):
    """Haar-Fisz threshold minimizing the exact risk estimate.

    The risk is piecewise quadratic in ``tau`` with breakpoints at
    ``|y|/sqrt(t)`` and ``|y -+ 1|/sqrt(t - 1)``; every piece is minimized.
    With more than ``max_knots`` breakpoints a quantile subset is scanned
    first and the full set is used around the best coarse piece.
    """
    m, tt, cnt = _pair_counts(y, t)
    mf, tf = m.astype(float), tt.astype(float)
    pos, pos1 = tf > 0, tf > 1
    knots = np.unique(np.concatenate([
        [0.0], mf[pos] / np.sqrt(tf[pos]),
        np.abs(mf[pos1] - 1.0) / np.sqrt(tf[pos1] - 1.0),
        (mf[pos1] + 1.0) / np.sqrt(tf[pos1] - 1.0)]))
    knots = np.append(knots, knots[-1] + 1.0)

    def f(taus):
        return _hf_eval(np.asarray(taus, dtype=float), mf, tf, cnt)

    if knots.size > max_knots:
        idx = np.unique(np.linspace(0, knots.size - 1, max_knots).round().astype(int))
        coarse = knots[idx]
        cands, vals = _hf_interval_scan(coarse, f)
        best = cands[int(np.argmin(vals))]
        j = int(np.searchsorted(coarse, best))
        lo, hi = coarse[max(j - 2, 0)], coarse[min(j + 1, coarse.size - 1)]
        fine = knots[(knots >= lo) & (knots <= hi)]
        c2, v2 = _hf_interval_scan(fine, f)
        cands, vals = np.concatenate([cands, c2]), np.concatenate([vals, v2])
    else:
        cands, vals = _hf_interval_scan(knots, f)
    order = np.lexsort((cands, vals))
    tau = float(cands[order[0]])
    return tau, ure(ShrinkageRule.hf(tau), y, t)


def sure_gaussian(tau, coeffs, sigma2) -> float:
    """Stein risk estimate of soft thresholding for i.i.d. Gaussian noise."""
    if not sigma2 > 0:
        raise ValueError("sigma2 must be positive")
    c = np.abs(np.asarray(coeffs, dtype=float)).ravel()
    return float(c.size * sigma2 + np.sum(np.minimum(c * c, tau * tau))
                 - 2.0 * sigma2 * np.count_nonzero(c < tau))


def sure_gaussian_all(cands, coeffs, sigma2):
    """``sure_gaussian`` at each candidate threshold via sorted prefix sums."""
    c = np.sort(np.abs(np.asarray(coeffs, dtype=float)).ravel())
    cands = np.asarray(cands, dtype=float)
    k = np.searchsorted(c, cands, side="left")  # count of |c| < tau
    cs = np.concatenate([[0.0], np.cumsum(c * c)])
    return c.size * sigma2 + cs[k] + (c.size - k) * cands**2 - 2.0 * sigma2 * k
