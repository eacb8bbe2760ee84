"""Benchmark harness: test intensities, Poisson corruption, estimator runs, metrics.

The six 1-D test functions use frozen closed forms on ``u = i / n``; their
breakpoints and amplitudes are listed below and never change between
releases, so benchmark CSVs stay comparable.
"""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import bayes, risk
from .errors import UsageError
from .pipeline import DenoiseConfig, denoise_with_params
from .skellam import sample

TEST_FUNCTIONS = ("smooth", "blocks", "bumps", "angles", "spikes", "bursts")
FLOOR_FRACTION = 0.02

# step/bump locations shared by blocks and bumps
_KNOTS = np.array([0.10, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81])
_BLOCK_H = np.array([4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2])
_BUMP_H = np.array([4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2])
_BUMP_W = np.array([0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005])
# vertices (u, value) of the piecewise-linear "angles" profile
_ANGLE_PTS = np.array([[0.00, 0.30], [0.15, 0.80], [0.20, 0.10], [0.50, 0.10],
                       [0.70, 1.00], [0.90, 0.40], [1.00, 0.40]])
_SPIKE_C = np.array([0.12, 0.31, 0.47, 0.62, 0.83])
_SPIKE_H = np.array([1.0, 0.6, 0.9, 0.5, 0.8])
_SPIKE_W = 0.004
_BURST_C = np.array([0.2, 0.5, 0.8])
_BURST_W = np.array([0.04, 0.06, 0.05])
_BURST_FREQ = np.array([40.0, 25.0, 60.0])

CSV_HEADER = ["signal", "seed", "method", "levels", "param", "mse", "snr_out_db", "runtime_ms"]


@dataclass(frozen=True)
class TestFunctionSpec:
    name: str
    n: int = 1024
    peak: float = 8.0


@dataclass(frozen=True)
class UnivariateDrawSpec:
    family: str
    var_x: float
    s: float = 100.0
    n: int = 10_000


@dataclass
class BenchRecord:
    signal: str
    seed: int
    method: str
    levels: int
    param: str
    mse: float
    snr_out_db: float
    runtime_ms: float

    def row(self, with_runtime=True):
        rt = f"{self.runtime_ms:.3f}" if with_runtime else ""
        return [self.signal, str(self.seed), self.method, str(self.levels), self.param,
                repr(float(self.mse)), repr(float(self.snr_out_db)), rt]


def _shape(name, u):
    if name == "smooth":
        return np.sin(np.pi * u)
    if name == "blocks":
        return np.sum(_BLOCK_H * (u[:, None] >= _KNOTS), axis=1)
    if name == "bumps":
        return np.sum(_BUMP_H * (1.0 + np.abs((u[:, None] - _KNOTS) / _BUMP_W)) ** -4, axis=1)
    if name == "angles":
        return np.interp(u, _ANGLE_PTS[:, 0], _ANGLE_PTS[:, 1])
    if name == "spikes":
        return np.sum(_SPIKE_H * np.exp(-0.5 * ((u[:, None] - _SPIKE_C) / _SPIKE_W) ** 2), axis=1)
    if name == "bursts":
        env = np.exp(-0.5 * ((u[:, None] - _BURST_C) / _BURST_W) ** 2)
        return np.sum(env * (1.0 + np.cos(2 * np.pi * _BURST_FREQ * u[:, None])), axis=1)
    raise UsageError(f"unknown test function {name!r}; choose from {TEST_FUNCTIONS}")


def make_test_function(spec: TestFunctionSpec) -> np.ndarray:
    """Test intensity rescaled to ``[0.02 * peak, peak]``."""
    if spec.n < 64:
        raise UsageError("test functions need n >= 64")
    if not spec.peak > 0:
        raise UsageError("peak must be positive")
    v = _shape(spec.name, np.arange(spec.n) / spec.n).astype(float)
    lo = FLOOR_FRACTION * spec.peak
    return lo + (spec.peak - lo) * (v - v.min()) / (v.max() - v.min())


def make_test_image(size=128, block=16):
    """Smooth diagonal ramp plus a piecewise-constant block texture (unscaled)."""
    if size < 16:
        raise UsageError("test image needs size >= 16")
    u = np.arange(size) / size
    ramp = 1.0 + u[:, None] + 0.5 * u[None, :]
    idx = np.arange(size) // block
    # deterministic pseudo-random block levels in {0, 0.25, 0.5, 0.75}
    levels = ((idx[:, None] * 7 + idx[None, :] * 3) % 4) / 4.0
    return ramp + levels


def poissonize(f, seed):
    """Independent Poisson counts with means ``f``."""
    f = np.asarray(f, dtype=float)
    rng = np.random.default_rng(seed)
    return sample(rng, f, np.zeros_like(f)).y_plus


def scale_to_snr(f, target_db):
    """Rescale so that ``10 log10(sum f**2 / sum f)`` equals ``target_db``."""
    f = np.asarray(f, dtype=float)
    s1, s2 = f.sum(), np.sum(f * f)
    if not (s1 > 0 and s2 > 0):
        raise UsageError("cannot scale an all-zero intensity")
    return 10.0 ** (target_db / 10.0) * s1 / s2 * f


def input_snr_db(f):
    f = np.asarray(f, dtype=float)
    return 10.0 * math.log10(np.sum(f * f) / np.sum(f))


def metrics(f_true, f_hat):
    """``(mse, snr_out_db)``; SNR is ``inf`` for a perfect reconstruction."""
    f_true = np.asarray(f_true, dtype=float)
    f_hat = np.asarray(f_hat, dtype=float)
    if f_true.shape != f_hat.shape:
        raise ValueError("shape mismatch")
    err = np.sum((f_hat - f_true) ** 2)
    mse = err / f_true.size
    snr = math.inf if err == 0 else 10.0 * math.log10(np.sum(f_true**2) / err)
    return float(mse), float(snr)


def draw_truncated(family, sigma_x, s, n, rng):
    """Inverse-CDF draws from the zero-mean prior restricted to ``[-s, s]``."""
    if family == bayes.GAUSSIAN:
        dist = stats.norm(scale=sigma_x)
    elif family == bayes.LAPLACE:
        dist = stats.laplace(scale=sigma_x / math.sqrt(2.0))
    else:
        raise UsageError(f"unknown prior family {family!r}")
    lo, hi = dist.cdf(-s), dist.cdf(s)
    return np.clip(dist.ppf(rng.uniform(lo, hi, n)), -s, s)


UNIVARIATE_METHODS = ("SS", "SB", "SBG", "SBT", "SBL", "SH")


def univariate_estimates(method, y, t, s, prior):
    """Apply one method to a population drawn with known ``s`` and prior."""
    if method == "SS":
        tau, _ = risk.optimize_ss(y, t)
        return np.sign(y) * np.maximum(np.abs(y) - tau, 0)
    if method == "SH":
        sig, _ = risk.optimize_sh(y, t)
        return y + risk.sh_theta(y, t, sig)
    sv = np.full(y.shape, float(s))
    if method == "SB":
        return bayes.posterior_mean(y, sv, prior)
    if method == "SBG":
        return bayes.shrink_sbg(y, sv, prior.sigma_x)
    if method == "SBT":
        return bayes.shrink_sbt(y, sv, prior.sigma_x)
    if method == "SBL":
        return bayes.shrink_sbl(y, sv, bayes.Prior(bayes.LAPLACE, prior.sigma_x))
    if method == "IDENTITY":
        return y.astype(float)
    raise UsageError(f"unknown univariate method {method!r}")


def run_univariate_bench(spec: UnivariateDrawSpec, methods=UNIVARIATE_METHODS, seed=0):
    """Per-method ``{"mean", "median", "std"}`` of per-draw squared error."""
    rng = np.random.default_rng(seed)
    sigma_x = math.sqrt(spec.var_x)
    x = draw_truncated(spec.family, sigma_x, spec.s, spec.n, rng)
    pair = sample(rng, 0.5 * (spec.s + x), 0.5 * (spec.s - x))
    y, t = pair.y, pair.t
    prior = bayes.Prior(spec.family, sigma_x)
    out = {}
    for m in methods:
        se = (univariate_estimates(m.upper(), y, t, spec.s, prior) - x) ** 2
        out[m.upper()] = {"mean": float(np.mean(se)), "median": float(np.median(se)),
                          "std": float(np.std(se))}
    return out


def run_signal_bench(spec: TestFunctionSpec, methods, trials=20, levels=3, seed0=0,
                     csv_path=None, record_runtime=False, f=None):
    """Run the full pipeline on Poisson realizations of one test function.

    Returns the list of :class:`BenchRecord`; with ``csv_path`` the records are
    also written as CSV.  Runtimes are left blank unless ``record_runtime`` so
    that equal seeds give byte-identical files.
    """
    if f is None:
        f = make_test_function(spec)
    records = []
    for trial in range(trials):
        seed = seed0 + trial
        g = poissonize(f, seed)
        for m in methods:
            t0 = time.perf_counter()
            res = denoise_with_params(g, DenoiseConfig(method=m, levels=levels, seed=seed))
            ms = 1e3 * (time.perf_counter() - t0)
            mse, snr = metrics(f, res.estimate)
            param = ";".join(f"{k}={_fmt(v)}" for k, v in res.params.items())
            records.append(BenchRecord(spec.name, seed, m.upper(), levels, param, mse, snr, ms))
    records.sort(key=lambda r: (r.signal, r.seed, r.method))
    if csv_path is not None:
        try:
            with open(csv_path, "w", newline="", encoding="utf-8") as fh:
                fh.write(records_to_csv(records, record_runtime))
        except OSError as exc:
            raise OSError(f"cannot write benchmark CSV {csv_path}: {exc}") from exc
    return records


def _fmt(v):
    return "" if v is None else f"{float(v):.6g}"


def records_to_csv(records, with_runtime=True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.row(with_runtime))
    return buf.getvalue()


def summarize(records):
    """Mean MSE and mean output SNR per ``(signal, method)``."""
    acc = {}
    for r in records:
        acc.setdefault((r.signal, r.method), []).append((r.mse, r.snr_out_db))
    return {k: (float(np.mean([a for a, _ in v])), float(np.mean([b for _, b in v])))
            for k, v in sorted(acc.items())}
