"""Skellam distribution: evaluation, derivatives and sampling.

A Skellam variate is the difference ``y = y_plus - y_minus`` of two
independent Poisson counts.  Here it is parameterized by its mean ``x`` and
variance ``s`` (``|x| <= s``), which are exactly the unnormalized Haar wavelet
and scaling coefficients of the underlying intensity.  The Poisson split is
``x_plus = (s + x) / 2`` and ``x_minus = (s - x) / 2``.

The authoritative mass function sums the Poisson correlation series in log
space.  :func:`log_likelihood` is a faster vectorized kernel based on
exponentially scaled Bessel functions, used by the quadrature code.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, ive, logsumexp

from .errors import DegenerateParameterError, ParameterDomainError

_SERIES_REL_TOL = 1e-17
_SERIES_MAX_TERMS = 10**6
_SERIES_CHUNK = 64


@dataclass(frozen=True)
class SkellamParams:
    """Mean ``x`` and variance ``s`` of a Skellam law."""

    x: float
    s: float

    def __post_init__(self):
        if not (self.s >= 0.0):
            raise ParameterDomainError(f"variance s must be >= 0, got {self.s}")
        if abs(self.x) > self.s:
            raise ParameterDomainError(f"mean must satisfy |x| <= s, got x={self.x}, s={self.s}")

    @property
    def x_plus(self) -> float:
        return 0.5 * (self.s + self.x)

    @property
    def x_minus(self) -> float:
        return 0.5 * (self.s - self.x)

    @classmethod
    def from_rates(cls, x_plus: float, x_minus: float) -> "SkellamParams":
        if x_plus < 0 or x_minus < 0:
            raise ParameterDomainError("Poisson rates must be nonnegative")
        return cls(x_plus - x_minus, x_plus + x_minus)


@dataclass(frozen=True)
class CountPair:
    """Observed Poisson pair; arrays are allowed."""

    y_plus: np.ndarray
    y_minus: np.ndarray

    @property
    def y(self):
        return self.y_plus - self.y_minus

    @property
    def t(self):
        return self.y_plus + self.y_minus


def _as_int_array(y):
    arr = np.asarray(y)
    if arr.dtype.kind in "iu":
        return arr.astype(np.int64)
    if not np.all(np.isfinite(arr)) or np.any(arr != np.round(arr)):
        raise ParameterDomainError("Skellam support is the integers")
    return arr.astype(np.int64)


def _check_params(x, s):
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(~(s >= 0)):
        raise ParameterDomainError("variance s must be >= 0")
    if np.any(np.abs(x) > s):
        raise ParameterDomainError("mean must satisfy |x| <= s")
    return x, s


def _log_series(y, xp, xm):
    """Log of sum_k xp^(k+y+) xm^(k+y-) / (k! (k+|y|)!) for interior rates.

    ``y`` int64 and the rates are 1-D arrays of equal length with
    ``xp, xm > 0``.  Terms are accumulated chunkwise until the latest term
    is below ``_SERIES_REL_TOL`` of the running sum and past the peak.
    """
    n = y.size
    ay = np.abs(y).astype(float)
    yp = np.maximum(y, 0).astype(float)
    ym = np.maximum(-y, 0).astype(float)
    lxp = np.log(xp)
    lxm = np.log(xm)
    # index of the largest term: xp*xm = (k+1)(k+|y|+1)
    peak = 0.5 * (-(ay + 2.0) + np.sqrt(ay * ay + 4.0 * xp * xm))
    acc = np.full(n, -np.inf)
    active = np.arange(n)
    log_tol = math.log(_SERIES_REL_TOL)
    k0 = 0
    while active.size and k0 < _SERIES_MAX_TERMS:
        k = np.arange(k0, k0 + _SERIES_CHUNK, dtype=float)[None, :]
        a = active
        lt = ((k + yp[a, None]) * lxp[a, None] + (k + ym[a, None]) * lxm[a, None]
              - gammaln(k + 1.0) - gammaln(k + ay[a, None] + 1.0))
        acc[a] = np.logaddexp(acc[a], logsumexp(lt, axis=1))
        last = lt[:, -1]
        done = (k0 + _SERIES_CHUNK - 1 > peak[a]) & (last < acc[a] + log_tol)
        active = a[~done]
        k0 += _SERIES_CHUNK
    return acc


def log_pmf(y, x, s):
    """Natural log of the Skellam mass ``Pr(Y = y; x, s)``.

    Broadcasts over ``y``, ``x`` and ``s``.  Boundary parameters fall back to
    the limiting Poisson (``|x| = s``) or point-mass (``s = 0``) cases.
    """
    y = _as_int_array(y)
    x, s = _check_params(x, s)
    y, x, s = np.broadcast_arrays(y, x, s)
    shape = y.shape
    y, x, s = y.ravel(), x.ravel(), s.ravel()
    out = np.full(y.size, -np.inf)

    point = s == 0
    out[point & (y == 0)] = 0.0

    upper = ~point & (x == s)
    lower = ~point & (x == -s)
    for mask, sign in ((upper, 1), (lower, -1)):
        if np.any(mask):
            k = sign * y[mask]
            lam = s[mask]
            ok = k >= 0
            vals = np.full(k.size, -np.inf)
            vals[ok] = k[ok] * np.log(lam[ok]) - lam[ok] - gammaln(k[ok] + 1.0)
            out[mask] = vals

    inner = ~(point | upper | lower)
    if np.any(inner):
        xs, ss = x[inner], s[inner]
        xp = 0.5 * (ss + xs)
        xm = 0.5 * (ss - xs)
        out[inner] = -ss + _log_series(y[inner], xp, xm)
    out = out.reshape(shape)
    return out[()] if out.ndim == 0 else out


def pmf(y, x, s):
    """Skellam probability mass ``Pr(Y = y; x, s)``."""
    return np.exp(log_pmf(y, x, s))


def pmf_series(y: int, x_plus: float, x_minus: float) -> float:
    """Scalar Poisson-correlation series, summed directly in linear space.

    Serves as an independent check on :func:`pmf`: the leading term is taken
    in log space and the rest follow the term ratio recurrence.
    """
    if x_plus < 0 or x_minus < 0:
        raise ParameterDomainError("Poisson rates must be nonnegative")
    y = int(y)
    s = x_plus + x_minus
    if x_minus == 0.0:
        if y < 0:
            return 0.0
        if x_plus == 0.0:
            return 1.0 if y == 0 else 0.0
        return math.exp(y * math.log(x_plus) - x_plus - math.lgamma(y + 1))
    if x_plus == 0.0:
        return pmf_series(-y, x_minus, 0.0)

    k = max(y, 0)
    log_first = (k * math.log(x_plus) + (k - y) * math.log(x_minus)
                 - math.lgamma(k + 1) - math.lgamma(k - y + 1))
    prod = x_plus * x_minus
    term = 1.0
    total = 1.0
    log_scale = 0.0
    for _ in range(_SERIES_MAX_TERMS):
        term *= prod / ((k + 1) * (k - y + 1))
        k += 1
        total += term
        if total > 1e250:
            total *= 1e-250
            term *= 1e-250
            log_scale += 250 * math.log(10.0)
        if term < 1e-16 * total and prod < k * (k - y):
            break
    return math.exp(-s + log_first + log_scale + math.log(total))


def pmf_table_recurrence(x: float, s: float, y_max: int) -> np.ndarray:
    """Mass table for ``y = -y_max..y_max`` built by the three-term recursion.

    The recursion is run toward the centre from both ends (upward from
    ``-y_max``, downward from ``+y_max``); in those directions every update
    adds nonnegative quantities, so no cancellation occurs.  Only the four
    end values are taken from :func:`log_pmf`.
    """
    x, s = float(x), float(s)
    if not abs(x) < s:
        raise DegenerateParameterError("recursion needs |x| < s; use pmf directly")
    y_max = int(y_max)
    if y_max < 1:
        raise ParameterDomainError("y_max must be >= 1")
    a = s - x
    b = s + x
    n = 2 * y_max + 1
    table = np.empty(n)

    def run(indices, seeds, step):
        # values carried as (mantissa, log-scale) so tiny seeds do not underflow
        l0, l1 = seeds
        ref = max(l0, l1)
        v0, v1 = math.exp(l0 - ref), math.exp(l1 - ref)
        logs = [ref, ref]
        vals = [v0, v1]
        scale = ref
        for y in indices[2:]:
            v0, v1 = v1, step(y, v0, v1)
            if v1 > 1e200:
                v0 *= 1e-200
                v1 *= 1e-200
                scale += 200 * math.log(10.0)
            vals.append(v1)
            logs.append(scale)
        with np.errstate(divide="ignore"):
            return np.exp(np.log(np.array(vals)) + np.array(logs))

    # upward: p(y) = [-2(y-1) p(y-1) + b p(y-2)] / a, all terms >= 0 for y <= 0
    up_idx = list(range(-y_max, 1))
    seeds = (float(log_pmf(-y_max, x, s)), float(log_pmf(-y_max + 1, x, s)))
    up = run(up_idx, seeds, lambda y, p2, p1: (-2.0 * (y - 1) * p1 + b * p2) / a)
    # downward: p(y-2) = [a p(y) + 2(y-1) p(y-1)] / b, all terms >= 0 for y >= 1
    down_idx = list(range(y_max, -1, -1))
    seeds = (float(log_pmf(y_max, x, s)), float(log_pmf(y_max - 1, x, s)))
    down = run(down_idx, seeds, lambda ym2, p0, p1: (a * p0 + 2.0 * (ym2 + 1) * p1) / b)
    table[: y_max + 1] = up
    # down covers y_max..0; keep the positive side from it
    table[y_max + 1:] = down[:y_max][::-1]
    return table


def _neighbour_sums(y, x, s):
    """Masses at ``y - 1, y, y + 1`` from one shared set of series terms.

    Returns ``(log_scale, s_minus, s_zero, s_plus)`` with each mass equal to
    ``exp(log_scale) * s_*``.  Sharing the terms keeps the finite-difference
    identities exact up to rounding of the sums themselves.
    """
    y = _as_int_array(y)
    x, s = _check_params(x, s)
    if np.any(~(np.abs(x) < s)):
        raise DegenerateParameterError("derivatives need |x| < s")
    y, x, s = np.broadcast_arrays(y, x, s)
    shape = y.shape
    y, x, s = y.ravel(), x.ravel(), s.ravel()
    xp = 0.5 * (s + x)
    xm = 0.5 * (s - x)
    neg = y < 0
    # mirror negative orders: p(y; xp, xm) = p(-y; xm, xp)
    ay = np.abs(y).astype(float)
    a = np.where(neg, xm, xp)
    b = np.where(neg, xp, xm)
    peak = np.maximum(0.0, 0.5 * (-(ay + 2.0) + np.sqrt(ay * ay + 4.0 * a * b)))
    kmax = int(np.max(np.ceil(peak + 15.0 * np.sqrt(peak + 1.0) + 50.0)))
    i = np.arange(kmax, dtype=float)[None, :]
    lv = ((i + ay[:, None]) * np.log(a)[:, None] + i * np.log(b)[:, None]
          - gammaln(i + 1.0) - gammaln(i + ay[:, None] + 1.0))
    top = lv.max(axis=1, keepdims=True)
    w = np.exp(lv - top)
    s0 = w.sum(axis=1)
    lower = (w * (i + ay[:, None])).sum(axis=1) / a   # order |y| - 1
    upper = (w / (i + ay[:, None] + 1.0)).sum(axis=1) * a  # order |y| + 1
    s_minus = np.where(neg, upper, lower)
    s_plus = np.where(neg, lower, upper)
    log_scale = -s + top[:, 0]
    return tuple(v.reshape(shape) for v in (log_scale, s_minus, s0, s_plus))


def dpmf_dx(y, x, s):
    """Partial derivative of the mass in the mean, via a central difference in y."""
    scale, sm, _, sp = _neighbour_sums(y, x, s)
    return np.exp(scale) * 0.5 * (sm - sp)


def dpmf_ds(y, x, s):
    """Partial derivative of the mass in the variance (half second difference)."""
    scale, sm, s0, sp = _neighbour_sums(y, x, s)
    return np.exp(scale) * (0.5 * (sm + sp) - s0)


def pde_residual(y, x, s):
    """``(y - x) p - s dp/dx - x dp/ds``; zero up to rounding."""
    scale, sm, s0, sp = _neighbour_sums(y, x, s)
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    # same quantity with s*dp/dx and x*dp/ds expanded; avoids their cancellation
    return np.exp(scale) * (y * s0 - 0.5 * (s + x) * sm + 0.5 * (s - x) * sp)


def _require_interior(x, s):
    x, s = _check_params(x, s)
    if np.any(~(np.abs(x) < s)):
        raise DegenerateParameterError("derivatives need |x| < s")


def log_likelihood(y, x, s):
    """Vectorized ``log p(y | x; s)`` through exponentially scaled Bessel functions.

    Equivalent to :func:`log_pmf` but much cheaper for large ``s``; entries
    where the Bessel value leaves the normal float range are recomputed with
    the series.  Intended for quadrature over ``x`` at fixed ``(y, s)``.
    """
    y = _as_int_array(y)
    x, s = _check_params(x, s)
    y, x, s = np.broadcast_arrays(y, x, s)
    shape = y.shape
    y, x, s = y.ravel(), x.ravel(), s.ravel()
    inner = np.abs(x) < s
    out = np.empty(y.size)
    if not np.all(inner):
        out[~inner] = log_pmf(y[~inner], x[~inner], s[~inner])
    if np.any(inner):
        yi, xi, si = y[inner], x[inner], s[inner]
        sp = si + xi
        sm = si - xi
        z = np.sqrt(sp * sm)
        with np.errstate(divide="ignore", invalid="ignore"):
            bes = ive(np.abs(yi), z)
            val = -si + z + 0.5 * yi * (np.log(sp) - np.log(sm)) + np.log(bes)
        bad = ~np.isfinite(val) | (bes < 1e-280)
        if np.any(bad):
            val[bad] = log_pmf(yi[bad], xi[bad], si[bad])
        out[inner] = val
    return out.reshape(shape)


def sample(rng: np.random.Generator, x_plus, x_minus) -> CountPair:
    """Draw ``(y_plus, y_minus)`` from independent Poisson laws."""
    x_plus = np.asarray(x_plus, dtype=float)
    x_minus = np.asarray(x_minus, dtype=float)
    if np.any(x_plus < 0) or np.any(x_minus < 0):
        raise ParameterDomainError("Poisson rates must be nonnegative")
    return CountPair(rng.poisson(x_plus), rng.poisson(x_minus))


def skewness(x: float, s: float) -> float:
    """Third standardized moment, ``x / s**1.5``."""
    SkellamParams(x, s)
    if s == 0:
        raise DegenerateParameterError("skewness undefined at s = 0")
    return x / s**1.5
