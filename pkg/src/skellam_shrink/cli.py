"""Command-line entry point: ``denoise`` and ``bench {uni,signal}``."""
from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import bench
from .errors import PGMFormatError, UsageError
from .haar import MODES, UNDECIMATED
from .pipeline import METHODS, DenoiseConfig, denoise
from .pgm import pgm_read, pgm_write

DEFAULT_SIGNAL_METHODS = ("IDENTITY", "SS", "SB", "SH", "ANSCOMBE_UNIV_HARD")


def read_signal(path):
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        return pgm_read(path), "pgm"
    vals = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            try:
                vals.append(float(row[0]))
            except ValueError:
                if vals:
                    raise UsageError(f"non-numeric CSV entry {row[0]!r} in {path}")
                continue  # header line
    arr = np.array(vals)
    if arr.size == 0 or np.any(arr != np.round(arr)) or np.any(arr < 0):
        raise UsageError(f"{path}: expected a single column of nonnegative integer counts")
    return arr.astype(np.int64), "csv"


def write_signal(path, est, kind):
    path = Path(path)
    if kind == "pgm" or path.suffix.lower() == ".pgm":
        pgm_write(path, est)
        return
    with open(path, "w", encoding="utf-8") as fh:
        for v in np.ravel(est):
            fh.write(f"{float(v)!r}\n")


def _table(header, rows, fmt):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    lines = ["  ".join(str(x).rjust(n) for x, n in zip(r, widths)) for r in [header, *rows]]
    return "\n".join(lines) + "\n"


def cmd_denoise(args):
    g, kind = read_signal(args.input)
    cfg = DenoiseConfig(method=args.method, levels=args.levels, mode=args.mode,
                        prior=args.prior, seed=args.seed)
    write_signal(args.output, denoise(g, cfg), kind)
    return 0


def cmd_bench_uni(args):
    spec = bench.UnivariateDrawSpec(args.prior, args.varx, args.s, args.n)
    res = bench.run_univariate_bench(spec, args.methods, seed=args.seed)
    rows = [[m, f"{d['mean']:.4f}", f"{d['median']:.4f}", f"{d['std']:.4f}"] for m, d in res.items()]
    sys.stdout.write(_table(["method", "mean", "median", "std"], rows, args.format))
    return 0


def cmd_bench_signal(args):
    spec = bench.TestFunctionSpec(args.fn, args.n, args.peak)
    recs = bench.run_signal_bench(spec, args.methods, trials=args.trials, levels=args.levels,
                                  seed0=args.seed, csv_path=args.output,
                                  record_runtime=args.runtime)
    if args.format == "csv" and args.output is None:
        sys.stdout.write(bench.records_to_csv(recs, args.runtime))
        return 0
    rows = [[sig, m, f"{mse:.5f}", f"{snr:.3f}"]
            for (sig, m), (mse, snr) in bench.summarize(recs).items()]
    sys.stdout.write(_table(["signal", "method", "mean_mse", "mean_snr_db"], rows, args.format))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="skellam-shrink",
                                description="Haar-domain Skellam shrinkage for Poisson counts")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("denoise", help="denoise a PGM image or a one-column CSV signal")
    d.add_argument("--input", required=True)
    d.add_argument("--output", required=True)
    d.add_argument("--method", default="SS", type=str.upper, choices=METHODS)
    d.add_argument("--levels", type=int, default=3)
    d.add_argument("--mode", default=UNDECIMATED, choices=MODES)
    d.add_argument("--prior", default="laplace", choices=("gaussian", "laplace"))
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=cmd_denoise)

    b = sub.add_parser("bench", help="run benchmarks")
    bsub = b.add_subparsers(dest="bench", required=True)
    u = bsub.add_parser("uni", help="single-coefficient MSE under a known prior")
    u.add_argument("--prior", default="gaussian", choices=("gaussian", "laplace"))
    u.add_argument("--varx", type=float, default=32.0)
    u.add_argument("--s", type=float, default=100.0)
    u.add_argument("--n", type=int, default=10_000)
    u.add_argument("--methods", nargs="+", type=str.upper, default=list(bench.UNIVARIATE_METHODS))
    u.add_argument("--seed", type=int, default=0)
    u.add_argument("--format", choices=("table", "csv"), default="table")
    u.set_defaults(func=cmd_bench_uni)

    s = bsub.add_parser("signal", help="full pipeline on a 1-D test function")
    s.add_argument("--fn", required=True, choices=bench.TEST_FUNCTIONS)
    s.add_argument("--peak", type=float, default=8.0)
    s.add_argument("--n", type=int, default=1024)
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--levels", type=int, default=3)
    s.add_argument("--methods", nargs="+", type=str.upper, default=list(DEFAULT_SIGNAL_METHODS))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--output", help="write per-trial records as CSV")
    s.add_argument("--runtime", action="store_true", help="fill the runtime_ms column")
    s.add_argument("--format", choices=("table", "csv"), default="table")
    s.set_defaults(func=cmd_bench_signal)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, PGMFormatError, ValueError, OSError) as exc:
        print(f"skellam-shrink: error: {exc}", file=sys.stderr)
        return 2
