"""Minimal 8-bit PGM (P2 ASCII / P5 binary) reader and writer."""
from __future__ import annotations

import numpy as np

from .errors import PGMFormatError


def _tokens(data: bytes, count: int, pos: int):
    """Read ``count`` whitespace-separated header tokens, skipping comments."""
    out = []
    n = len(data)
    while len(out) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise PGMFormatError("truncated PGM header")
        out.append(data[start:pos])
    return out, pos


def parse_pgm(data: bytes) -> np.ndarray:
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PGMFormatError(f"not a P2/P5 PGM (magic {magic!r})")
    try:
        (w, h, maxval), pos = _tokens(data, 3, 2)
        w, h, maxval = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise PGMFormatError(f"bad PGM header: {exc}") from exc
    if w <= 0 or h <= 0:
        raise PGMFormatError("PGM dimensions must be positive")
    if not 0 < maxval <= 255:
        raise PGMFormatError(f"only 8-bit PGM supported (maxval {maxval})")
    if magic == b"P5":
        body = data[pos + 1:pos + 1 + w * h]
        if len(body) != w * h:
            raise PGMFormatError("truncated P5 pixel data")
        img = np.frombuffer(body, dtype=np.uint8).reshape(h, w)
    else:
        try:
            vals = [int(v) for v in data[pos:].split()]
        except ValueError as exc:
            raise PGMFormatError(f"bad P2 pixel data: {exc}") from exc
        if len(vals) != w * h:
            raise PGMFormatError(f"expected {w * h} P2 samples, found {len(vals)}")
        img = np.array(vals, dtype=np.int64).reshape(h, w)
    if img.max(initial=0) > maxval:
        raise PGMFormatError("sample exceeds maxval")
    return img.astype(np.int64)


def pgm_read(path) -> np.ndarray:
    """Read a P2 or P5 8-bit PGM as an int64 count image."""
    with open(path, "rb") as fh:
        return parse_pgm(fh.read())


def encode_pgm(image, binary=True) -> bytes:
    """Round and clip to ``[0, 255]`` and encode."""
    img = np.asarray(image)
    if img.ndim != 2:
        raise PGMFormatError("PGM images are 2-D")
    img = np.clip(np.rint(img), 0, 255).astype(np.uint8)
    h, w = img.shape
    if binary:
        return f"P5\n{w} {h}\n255\n".encode() + img.tobytes()
    rows = "\n".join(" ".join(str(v) for v in r) for r in img)
    return f"P2\n{w} {h}\n255\n{rows}\n".encode()


def pgm_write(path, image, binary=True):
    with open(path, "wb") as fh:
        fh.write(encode_pgm(image, binary))
