"""Unnormalized Haar transforms for 1-D signals and 2-D images.

Filters are plain sums and differences (taps of +1/-1, no 1/sqrt(2)), so the
transform of a count signal stays integer valued: every wavelet coefficient
``y`` is a difference of two disjoint count sums and its scaling coefficient
``t`` is their total.  Boundaries are periodic throughout.

Two modes are available: the decimated (critically sampled) transform and the
undecimated one, in which level ``k`` pairs samples ``2**(k-1)`` apart
without subsampling.  Undecimated reconstruction averages the two redundant
inverses at each level.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import LevelOverflowError, MalformedPyramidError

DECIMATED = "decimated"
UNDECIMATED = "undecimated"
MODES = (DECIMATED, UNDECIMATED)

BANDS_1D = ("detail",)
BANDS_2D = ("LH", "HL", "HH")


@dataclass
class Subband:
    """Wavelet coefficients ``y`` and matching scaling coefficients ``t``."""

    y: np.ndarray
    t: np.ndarray


@dataclass
class CoefficientPyramid:
    """Multi-level Haar decomposition.

    ``details[k - 1]`` maps band names to the :class:`Subband` of level ``k``;
    ``coarse`` is the scaling band of the last level.  ``sizes[k - 1]`` is the
    shape of the scaling array fed into level ``k`` (before any padding).
    """

    mode: str
    details: list
    coarse: np.ndarray
    sizes: list = field(default_factory=list)

    @property
    def levels(self) -> int:
        return len(self.details)

    @property
    def ndim(self) -> int:
        return self.coarse.ndim

    def subbands(self):
        """Yield ``(level, band_name, Subband)`` from finest to coarsest."""
        for k, bands in enumerate(self.details, start=1):
            for name, band in bands.items():
                yield k, name, band

    def replace_details(self, new_y) -> "CoefficientPyramid":
        """Copy with wavelet coefficients swapped; ``new_y[(k, name)]`` -> array."""
        details = []
        for k, bands in enumerate(self.details, start=1):
            details.append({name: Subband(np.asarray(new_y.get((k, name), b.y)), b.t)
                            for name, b in bands.items()})
        return CoefficientPyramid(self.mode, details, self.coarse, list(self.sizes))


def _is_int(a) -> bool:
    return np.asarray(a).dtype.kind in "iub"


def _split(s, axis, lag, decimated):
    if decimated:
        n = s.shape[axis]
        if n % 2:
            s = np.concatenate([s, np.take(s, [0], axis=axis)], axis=axis)
        a = np.take(s, np.arange(0, s.shape[axis], 2), axis=axis)
        b = np.take(s, np.arange(1, s.shape[axis], 2), axis=axis)
    else:
        a = s
        b = np.roll(s, -lag, axis=axis)
    return a + b, a - b


def _merge(lo, hi, axis, lag, decimated, n):
    exact = _is_int(lo) and _is_int(hi)
    plus = lo + hi
    minus = lo - hi
    if decimated:
        if exact:
            if np.any(plus % 2):
                raise MalformedPyramidError("wavelet and scaling coefficients differ in parity")
            a, b = plus // 2, minus // 2
        else:
            a, b = 0.5 * plus, 0.5 * minus
        shape = list(a.shape)
        shape[axis] *= 2
        out = np.empty(shape, dtype=a.dtype)
        idx = [slice(None)] * a.ndim
        idx[axis] = slice(0, None, 2)
        out[tuple(idx)] = a
        idx[axis] = slice(1, None, 2)
        out[tuple(idx)] = b
        return np.take(out, np.arange(n), axis=axis)
    # two estimates of every sample: from its own pair and from the pair lag behind
    total = plus + np.roll(minus, lag, axis=axis)
    if exact and not np.any(total % 4):
        return total // 4
    return 0.25 * total


def forward_level_decimated(s_prev):
    """One decimated level: ``x_i = s[2i] - s[2i+1]``, ``s_i = s[2i] + s[2i+1]``.

    Odd lengths are padded with one periodic wrap-around sample.
    """
    lo, hi = _split(np.asarray(s_prev), -1, 1, True)
    return hi, lo


def inverse_level_decimated(x, s, n=None):
    """Invert :func:`forward_level_decimated`; ``n`` trims wrap padding."""
    x = np.asarray(x)
    s = np.asarray(s)
    if _is_int(x) and _is_int(s) and np.any(np.abs(x) > s):
        raise MalformedPyramidError("scaling coefficient smaller than |wavelet coefficient|")
    n = 2 * s.shape[-1] if n is None else n
    return _merge(s, x, -1, 1, True, n)


def forward_level_undecimated(s_prev, lag):
    """One undecimated level at the given lag (periodic)."""
    if lag < 1:
        raise ValueError("lag must be >= 1")
    lo, hi = _split(np.asarray(s_prev), -1, lag, False)
    return hi, lo


def inverse_level_undecimated(x, s, lag):
    """Average of the two redundant single-level inverses."""
    x = np.asarray(x)
    s = np.asarray(s)
    return _merge(s, x, -1, lag, False, s.shape[-1])


def max_levels(shape, mode=UNDECIMATED) -> int:
    """Largest K accepted by :func:`decompose` for this input shape."""
    shape = (shape,) if np.isscalar(shape) else tuple(shape)
    if mode == UNDECIMATED:
        k = 0
        while 2**k < min(shape):
            k += 1
        return k
    dims = list(shape)
    k = 0
    while min(dims) >= 2:
        dims = [(d + 1) // 2 for d in dims]
        k += 1
    return k


def _check_levels(shape, levels, mode):
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if len(shape) not in (1, 2):
        raise ValueError("only 1-D and 2-D inputs are supported")
    k_max = max_levels(shape, mode)
    if levels > k_max:
        raise LevelOverflowError(f"{levels} levels requested, shape {shape} supports {k_max}")


def decompose(g, levels: int, mode: str = UNDECIMATED) -> CoefficientPyramid:
    """K-level Haar decomposition of a 1-D signal or 2-D image.

    2-D levels are separable (rows, then columns) and produce three detail
    bands, each a difference of two disjoint block sums whose scaling
    coefficient is the total block sum.
    """
    s = np.asarray(g)
    if s.dtype.kind == "b":
        s = s.astype(np.int64)
    _check_levels(s.shape, levels, mode)
    dec = mode == DECIMATED
    details, sizes = [], []
    for k in range(1, levels + 1):
        lag = 2 ** (k - 1)
        sizes.append(s.shape)
        if s.ndim == 1:
            lo, hi = _split(s, 0, lag, dec)
            details.append({"detail": Subband(hi, lo)})
            s = lo
        else:
            lo1, hi1 = _split(s, 1, lag, dec)
            ll, hl = _split(lo1, 0, lag, dec)
            lh, hh = _split(hi1, 0, lag, dec)
            details.append({"LH": Subband(lh, ll), "HL": Subband(hl, ll), "HH": Subband(hh, ll)})
            s = ll
    return CoefficientPyramid(mode, details, s, sizes)


def reconstruct(pyr: CoefficientPyramid) -> np.ndarray:
    """Inverse of :func:`decompose` from the coarse band and the wavelet bands."""
    dec = pyr.mode == DECIMATED
    s = pyr.coarse
    for k in range(pyr.levels, 0, -1):
        lag = 2 ** (k - 1)
        bands = pyr.details[k - 1]
        shape = pyr.sizes[k - 1]
        if s.ndim == 1:
            s = _merge(s, bands["detail"].y, 0, lag, dec, shape[0])
        else:
            lo1 = _merge(s, bands["HL"].y, 0, lag, dec, shape[0])
            hi1 = _merge(bands["LH"].y, bands["HH"].y, 0, lag, dec, shape[0])
            s = _merge(lo1, hi1, 1, lag, dec, shape[1])
    return s
