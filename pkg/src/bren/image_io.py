"""Reading and writing RGB images as PPM (P6) or PNG, 8 or 16 bit.

Decoded images are float64 in [0, 1] (value / maxval). Files are assumed
linear; callers wanting sRGB-encoded files apply srgb_decode after
reading and srgb_encode before writing. The PPM codec is self-contained
so its byte-level behavior (big-endian 16-bit samples, canonical header)
stays under our control; PNG goes through OpenCV.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import cv2
import numpy as np

from .core import as_image


class ImageFormatError(Exception):
    """Raised for files this package cannot decode or encode."""


@dataclass(frozen=True)
class ImageInfo:
    format: str  # "ppm" or "png"
    bit_depth: int  # 8 or 16


_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _ppm_header_tokens(data: bytes, count: int):
    """Pull whitespace-separated header tokens, honoring '#' comments.
    Returns the tokens and the offset one byte past the final separator."""
    tokens = []
    i = 0
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i] == ord("#"):
            while i < n and data[i] not in (0x0A, 0x0D):
                i += 1
            continue
        start = i
        while i < n and not data[i : i + 1].isspace():
            i += 1
        if start == i:
            raise ImageFormatError("truncated PPM header")
        tokens.append(data[start:i])
        if len(tokens) < count:
            continue
        # exactly one whitespace byte separates the header from the raster
        i += 1
    return tokens, i


def read_ppm(path) -> tuple[np.ndarray, ImageInfo]:
    data = Path(path).read_bytes()
    if data[:2] != b"P6":
        raise ImageFormatError(f"{path}: not a binary PPM (P6) file")
    try:
        (_, w_tok, h_tok, max_tok), offset = _ppm_header_tokens(data, 4)
        width, height, maxval = int(w_tok), int(h_tok), int(max_tok)
    except (ValueError, ImageFormatError) as exc:
        raise ImageFormatError(f"{path}: bad PPM header ({exc})") from exc
    if width < 1 or height < 1 or not 0 < maxval < 65536:
        raise ImageFormatError(f"{path}: bad PPM dimensions or maxval")
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    expected = width * height * 3 * dtype.itemsize
    raster = data[offset : offset + expected]
    if len(raster) != expected:
        raise ImageFormatError(f"{path}: truncated PPM raster")
    samples = np.frombuffer(raster, dtype=dtype).reshape(height, width, 3)
    img = samples.astype(np.float64) / maxval
    return img, ImageInfo(format="ppm", bit_depth=8 if maxval <= 255 else 16)


def write_ppm(path, image, bit_depth: int = 8) -> None:
    img = as_image(image)
    maxval = _maxval(bit_depth)
    q = np.rint(np.clip(img, 0.0, 1.0) * maxval)
    samples = q.astype(">u2" if bit_depth == 16 else "u1")
    header = f"P6\n{img.shape[1]} {img.shape[0]}\n{maxval}\n".encode("ascii")
    Path(path).write_bytes(header + samples.tobytes())


def read_png(path) -> tuple[np.ndarray, ImageInfo]:
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise ImageFormatError(f"{path}: not a decodable PNG file")
    if raw.dtype == np.uint8:
        maxval, depth = 255, 8
    elif raw.dtype == np.uint16:
        maxval, depth = 65535, 16
    else:
        raise ImageFormatError(f"{path}: unsupported PNG sample type {raw.dtype}")
    if raw.ndim == 2:
        raw = np.stack([raw] * 3, axis=2)
    elif raw.ndim == 3 and raw.shape[2] == 4:
        raw = raw[:, :, :3]
    if raw.ndim != 3 or raw.shape[2] != 3:
        raise ImageFormatError(f"{path}: expected an RGB PNG")
    img = raw[:, :, ::-1].astype(np.float64) / maxval  # BGR -> RGB
    return img, ImageInfo(format="png", bit_depth=depth)


def write_png(path, image, bit_depth: int = 8) -> None:
    img = as_image(image)
    maxval = _maxval(bit_depth)
    q = np.rint(np.clip(img, 0.0, 1.0) * maxval)
    samples = q.astype(np.uint16 if bit_depth == 16 else np.uint8)
    if not cv2.imwrite(str(path), samples[:, :, ::-1]):
        raise ImageFormatError(f"{path}: PNG encode failed")


def _maxval(bit_depth: int) -> int:
    if bit_depth == 8:
        return 255
    if bit_depth == 16:
        return 65535
    raise ValueError(f"bit_depth must be 8 or 16, got {bit_depth}")


def read_image(path) -> tuple[np.ndarray, ImageInfo]:
    """Decode a PPM or PNG file, sniffing the format from its magic
    bytes."""
    p = Path(path)
    with open(p, "rb") as fh:
        magic = fh.read(8)
    if magic[:2] == b"P6":
        return read_ppm(p)
    if magic == _PNG_MAGIC:
        return read_png(p)
    raise ImageFormatError(f"{path}: unrecognized image format")


def write_image(path, image, bit_depth: int = 8) -> None:
    """Encode to PPM or PNG depending on the file extension."""
    suffix = Path(path).suffix.lower()
    if suffix == ".png":
        write_png(path, image, bit_depth)
    elif suffix in (".ppm", ".pnm"):
        write_ppm(path, image, bit_depth)
    else:
        raise ImageFormatError(f"{path}: unsupported output extension {suffix!r}")


def srgb_decode(encoded) -> np.ndarray:
    """Standard piecewise sRGB transfer function, encoded -> linear."""
    v = np.asarray(encoded, dtype=np.float64)
    return np.where(v <= 0.04045, v / 12.92, ((v + 0.055) / 1.055) ** 2.4)


def srgb_encode(linear) -> np.ndarray:
    """Standard piecewise sRGB transfer function, linear -> encoded."""
    v = np.asarray(linear, dtype=np.float64)
    v = np.clip(v, 0.0, None)
    return np.where(v <= 0.0031308, v * 12.92, 1.055 * v ** (1.0 / 2.4) - 0.055)
