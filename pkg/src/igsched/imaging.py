"""Portable graymap/pixmap I/O and attribution heatmaps.

Readers accept P2/P5 graymaps and P3/P6 pixmaps; the heatmap writer emits
binary P5. The formats are parsed directly so image handling stays
dependency-free and bit-exact.
"""

from __future__ import annotations

import numpy as np

from .errors import InputShapeError, ParseError
from .tensor import Tensor, as_tensor


def _header_tokens(data: bytes, count: int) -> tuple[list[int], int]:
    """First `count` whitespace-separated integer tokens after the magic,
    skipping '#' comments; returns (values, offset past the final separator)."""
    tokens: list[int] = []
    i = 2  # past the two magic bytes
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i] == ord("#"):
            while i < n and data[i] != ord("\n"):
                i += 1
            continue
        start = i
        while i < n and not data[i : i + 1].isspace():
            i += 1
        if start == i:
            raise ParseError("truncated image header")
        tok = data[start:i]
        if not tok.isdigit():
            raise ParseError(f"bad header token {tok!r}")
        tokens.append(int(tok))
    return tokens, i + 1  # single whitespace byte separates header from raster


def read_image(path) -> Tensor:
    """Image as floats in [0, 1]: (H, W) for graymaps, (H, W, 3) for pixmaps."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic = data[:2]
    if magic not in (b"P2", b"P3", b"P5", b"P6"):
        raise ParseError(f"unsupported image magic {magic!r}")
    (width, height, maxval), offset = _header_tokens(data, 3)
    if maxval < 1 or maxval > 65535:
        raise ParseError(f"bad maxval {maxval}")
    channels = 3 if magic in (b"P3", b"P6") else 1
    n_values = width * height * channels
    if magic in (b"P2", b"P3"):
        toks = data[offset - 1 :].split()
        if len(toks) != n_values:
            raise ParseError(
                f"expected {n_values} raster values, found {len(toks)}"
            )
        values = np.array([int(t) for t in toks], dtype=np.float64)
    else:
        if maxval > 255:
            raise ParseError("16-bit binary rasters are not supported")
        raster = data[offset : offset + n_values]
        if len(raster) != n_values:
            raise ParseError(
                f"expected {n_values} raster bytes, found {len(raster)}"
            )
        values = np.frombuffer(raster, dtype=np.uint8).astype(np.float64)
    if np.any(values > maxval):
        raise ParseError("raster value exceeds maxval")
    arr = values / maxval
    shape = (height, width) if channels == 1 else (height, width, 3)
    return Tensor(arr.reshape(shape))


def write_pgm(path, gray_u8: np.ndarray) -> None:
    """Binary portable graymap (P5, maxval 255) from a (H, W) uint8 array."""
    arr = np.asarray(gray_u8)
    if arr.ndim != 2:
        raise InputShapeError("P5 output needs a 2-D array")
    arr = arr.astype(np.uint8)
    header = f"P5\n{arr.shape[1]} {arr.shape[0]}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header + arr.tobytes())


def heatmap_u8(phi) -> np.ndarray:
    """Grayscale attribution map: |phi|, channel-summed, percentile-clipped.

    Magnitudes are clipped at the 99th percentile (falling back to the max
    when that percentile is not positive) and mapped linearly to [0, 255], so
    one extreme outlier cannot darken the rest of the map.
    """
    phi = as_tensor(phi)
    arr = np.abs(phi.data.astype(np.float64))
    if arr.ndim == 3:
        arr = arr.sum(axis=2)
    if arr.ndim != 2:
        raise InputShapeError(
            f"heatmap needs a 2-D or 3-D (trailing channel) phi, got {phi.shape}"
        )
    peak = arr.max()
    if peak == 0.0:
        return np.zeros(arr.shape, dtype=np.uint8)
    clip_at = np.percentile(arr, 99.0)
    if clip_at <= 0.0:
        clip_at = peak
    scaled = np.minimum(arr, clip_at) * (255.0 / clip_at)
    return np.rint(scaled).astype(np.uint8)


def render_heatmap(phi, out_path) -> None:
    write_pgm(out_path, heatmap_u8(phi))
