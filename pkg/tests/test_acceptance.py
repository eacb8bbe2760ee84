"""One test per acceptance criterion, each at its stated tolerance and time budget."""
import math
import time

import numpy as np

from skellam_shrink import bayes, bench, haar, risk
from skellam_shrink import skellam as sk
from skellam_shrink.pipeline import DenoiseConfig, denoise

GAUSSIAN_MSE = {  # gaussian prior, s = 100: mean squared error per method
    32: {"SS": 30.22, "SB": 24.03, "SBG": 24.03, "SBT": 31.32, "SH": 29.98},
    64: {"SS": 47.75, "SB": 39.01, "SBG": 39.01, "SBT": 53.42, "SH": 48.28},
    128: {"SS": 66.71, "SB": 56.11, "SBG": 56.11, "SBT": 73.76, "SH": 67.02},
}
LAPLACE_MSE = {  # laplace prior, s = 100
    32: {"SS": 27.64, "SB": 24.05, "SBL": 24.37, "SBT": 29.97, "SH": 27.77},
    64: {"SS": 42.90, "SB": 37.98, "SBL": 38.44, "SBT": 46.78, "SH": 42.75},
    128: {"SS": 59.63, "SB": 54.51, "SBL": 55.18, "SBT": 64.19, "SH": 59.91},
}


def test_ac01_pmf_conformance(acceptance):
    t0 = time.perf_counter()
    worst = 0.0
    for s in (0.5, 1.0, 5.0, 20.0, 50.0):
        for x in (0.0, s / 2, -s / 2, 0.99 * s, -0.99 * s):
            y = np.arange(-100, 101)
            p = sk.pmf(y, x, s)
            ref = np.array([sk.pmf_series(int(v), (s + x) / 2, (s - x) / 2) for v in y])
            live = ref > 0
            worst = max(worst, float(np.max(np.abs(p[live] - ref[live]) / ref[live])))
            assert np.all(p[~live] == 0)
    norm = 0.0
    for s in (0.5, 1.0, 5.0, 20.0, 30.0):
        for x in (0.0, s / 2, -0.99 * s, s):
            norm = max(norm, abs(float(sk.pmf(np.arange(-400, 401), x, s).sum()) - 1.0))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and norm <= 1e-10 and dt < 10
    acceptance("AC1 pmf conformance", ok,
               f"max rel err {worst:.2e} (<=1e-12), norm err {norm:.2e} (<=1e-10), {dt:.1f}s")
    assert ok


def test_ac02_derivatives_pde_recurrence(acceptance):
    t0 = time.perf_counter()
    h = 1e-5
    fd, pde, rec = 0.0, 0.0, 0.0
    for s in (1.0, 5.0, 20.0, 50.0):
        for x in (0.0, 0.5 * s, -0.5 * s, 0.9 * s, -0.9 * s):
            ys = np.arange(-60, 61)
            for y in ys[::4]:
                dx = (sk.pmf(y, x + h, s) - sk.pmf(y, x - h, s)) / (2 * h)
                ds = (sk.pmf(y, x, s + h) - sk.pmf(y, x, s - h)) / (2 * h)
                fd = max(fd, abs(sk.dpmf_dx(y, x, s) - dx), abs(sk.dpmf_ds(y, x, s) - ds))
            for y in ys:
                p = sk.pmf(y, x, s)
                if p > 1e-290:
                    pde = max(pde, abs(sk.pde_residual(int(y), x, s)) / p)
            table = sk.pmf_table_recurrence(x, s, 60)
            ref = np.array([sk.pmf_series(int(v), (s + x) / 2, (s - x) / 2) for v in ys])
            live = ref > 1e-290
            rec = max(rec, float(np.max(np.abs(table[live] - ref[live]) / ref[live])))
    dt = time.perf_counter() - t0
    ok = fd <= 1e-6 and pde <= 1e-12 and rec <= 1e-10 and dt < 10
    acceptance("AC2 derivative/PDE/recurrence", ok,
               f"fd {fd:.1e} (<=1e-6), pde {pde:.1e} (<=1e-12), recurrence {rec:.1e} (<=1e-10), {dt:.1f}s")
    assert ok


def test_ac03_haar_exact(acceptance):
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    bad = 0
    for i in range(1000):
        n = int(rng.integers(7, 4097))
        g = rng.poisson(rng.uniform(0, 50), n)
        for mode in (haar.DECIMATED, haar.UNDECIMATED):
            k = int(min(5, haar.max_levels(n, mode), rng.integers(1, 6)))
            bad += not np.array_equal(haar.reconstruct(haar.decompose(g, k, mode)), g)
    for i in range(100):
        shape = tuple(int(v) for v in rng.integers(7, 129, 2))
        g = rng.integers(0, 256, shape)
        for mode in (haar.DECIMATED, haar.UNDECIMATED):
            k = int(min(5, haar.max_levels(shape, mode), rng.integers(1, 6)))
            bad += not np.array_equal(haar.reconstruct(haar.decompose(g, k, mode)), g)
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 30
    acceptance("AC3 Haar exactness", ok, f"{bad} mismatches in 2200 round-trips, {dt:.1f}s")
    assert ok


def test_ac04_ure_unbiased(acceptance):
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    n = 100_000
    zs = {}
    for rule in (risk.ShrinkageRule.soft(3), risk.ShrinkageRule.sh(4.0), risk.ShrinkageRule.hf(0.5)):
        a, b = rng.poisson(7.0, n), rng.poisson(2.0, n)
        y, t = a - b, a + b
        u = risk.ure(rule, y, t).contributions
        se_real = (rule.apply(y, t) - 5.0) ** 2
        d = u - se_real
        zs[rule.kind] = abs(d.mean()) / (d.std(ddof=1) / math.sqrt(n))
    dt = time.perf_counter() - t0
    ok = all(z <= 3 for z in zs.values()) and dt < 60
    acceptance("AC4 URE unbiasedness", ok,
               ", ".join(f"{k} |z|={v:.2f}" for k, v in zs.items()) + f" (<=3), {dt:.1f}s")
    assert ok


def test_ac05_ss_objective_exact(acceptance):
    rng = np.random.default_rng(5)
    t0 = time.perf_counter()
    mism, checks = 0, 0
    for _ in range(1000):
        n = int(rng.integers(1, 60))
        a = rng.poisson(rng.uniform(0, 40, n))
        b = rng.poisson(rng.uniform(0, 40, n))
        y, t = a - b, a + b
        for tau in range(int(np.abs(y).max()) + 2):
            checks += 1
            mism += risk.ss_objective(tau, y, t) != risk.ure(risk.ShrinkageRule.soft(tau), y, t).value
    dt = time.perf_counter() - t0
    ok = mism == 0 and dt < 10
    acceptance("AC5 closed-form SS exactness", ok, f"{mism} mismatches over {checks} (vector, tau) checks, {dt:.1f}s")
    assert ok


def _figure_cells(family, table, repeats=10):
    worst, cells = 0.0, []
    for var, ref in table.items():
        acc = {m: [] for m in ref}
        for rep in range(repeats):
            res = bench.run_univariate_bench(bench.UnivariateDrawSpec(family, var, 100.0, 10_000),
                                             list(ref), seed=1000 * var + rep)
            for m in ref:
                acc[m].append(res[m]["mean"])
        for m, v in ref.items():
            got = float(np.mean(acc[m]))
            rel = abs(got - v) / v
            worst = max(worst, rel)
            cells.append(f"{m}@{var}={got:.2f}/{v}")
    return worst, cells


def test_ac06_gaussian_prior_mse(acceptance):
    t0 = time.perf_counter()
    worst, cells = _figure_cells("gaussian", GAUSSIAN_MSE)
    dt = time.perf_counter() - t0
    ok = worst <= 0.10 and dt < 300
    acceptance("AC6 gaussian prior table", ok, f"worst rel dev {worst:.1%} (<=10%), {dt:.0f}s; " + " ".join(cells))
    assert ok


def test_ac07_laplace_prior_mse(acceptance):
    t0 = time.perf_counter()
    worst, cells = _figure_cells("laplace", LAPLACE_MSE)
    dt = time.perf_counter() - t0
    ok = worst <= 0.10 and dt < 300
    acceptance("AC7 laplace prior table", ok, f"worst rel dev {worst:.1%} (<=10%), {dt:.0f}s; " + " ".join(cells))
    assert ok


def test_ac08_image_snr(acceptance):
    t0 = time.perf_counter()
    f = bench.scale_to_snr(bench.make_test_image(128), 10.0)
    snr_in = bench.input_snr_db(f)
    methods = ("SS", "SB", "SBT", "SBL", "SH")
    snr = {m: [] for m in methods}
    for seed in range(10):
        g = bench.poissonize(f, seed)
        for m in methods:
            snr[m].append(bench.metrics(f, denoise(g, DenoiseConfig(m)))[1])
    dt = time.perf_counter() - t0
    worst = min(min(v) for v in snr.values())
    mean = {m: float(np.mean(v)) for m, v in snr.items()}
    ok = worst >= snr_in + 4 and mean["SH"] >= mean["SS"] and dt < 300
    acceptance("AC8 image SNR", ok,
               f"input {snr_in:.2f} dB, worst output {worst:.2f} dB (>= input+4), "
               f"mean SH {mean['SH']:.3f} vs SS {mean['SS']:.3f} dB, {dt:.0f}s")
    assert ok


def test_ac09_test_functions(acceptance):
    t0 = time.perf_counter()
    methods = ["IDENTITY", "ANSCOMBE_UNIV_HARD", "SS", "SB", "SH"]
    fails, margins = [], []
    for name in bench.TEST_FUNCTIONS:
        recs = bench.run_signal_bench(bench.TestFunctionSpec(name, 1024, 8.0), methods, trials=20)
        mse = {m: v[0] for (_, m), v in bench.summarize(recs).items()}
        base = min(mse["IDENTITY"], mse["ANSCOMBE_UNIV_HARD"])
        for m in ("SS", "SB", "SH"):
            margins.append(base / mse[m] - 1)
            if not mse[m] < base:
                fails.append(f"{name}:{m}")
    dt = time.perf_counter() - t0
    ok = not fails and dt < 300
    acceptance("AC9 test functions", ok,
               f"failures {fails or 'none'}, smallest margin {min(margins):.1%}, {dt:.0f}s")
    assert ok


def test_ac10_score_projection_bound(acceptance):
    t0 = time.perf_counter()
    viol, n, slack = 0, 0, math.inf
    for fam in bayes.FAMILIES:
        for var in (8.0, 32.0, 128.0):
            prior = bayes.Prior(fam, math.sqrt(var))
            for s in (10, 100):
                for y in range(-3 * s, 3 * s + 1):
                    gap = (bayes.posterior_mean(y, float(s), prior)
                           - bayes.theorem2_estimate(y, float(s), prior)) ** 2
                    bound = bayes.theorem2_bound(y, float(s), prior)
                    n += 1
                    viol += gap > bound
                    if bound > 0:
                        slack = min(slack, bound - gap)
    dt = time.perf_counter() - t0
    ok = viol == 0 and dt < 60
    acceptance("AC10 score-projection bound", ok, f"{viol} violations over {n} grid points, {dt:.0f}s")
    assert ok
