"""Illumination input paths: user-supplied triples and the gray-world mean.

The separation algebra needs the illumination triple E. Either the caller
knows it (validated here) or it is estimated by averaging each channel
over all pixels. The estimate is deliberately left unnormalized: the
reflectance-space pipeline is invariant to a global scale on E.
"""

from __future__ import annotations

import numpy as np

from .core import CHANNELS, EPS_ILLUM, as_image


def validate_illumination(e) -> np.ndarray:
    """Check an illumination triple and return it as a float64 (3,) array.

    Rejects any channel below EPS_ILLUM: dividing by a near-zero channel
    would blow up the mixed reflectance.
    """
    arr = np.asarray(e, dtype=np.float64)
    if arr.shape != (CHANNELS,):
        raise ValueError(f"illumination must be a triple, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("illumination must be finite")
    if arr.min() < EPS_ILLUM:
        raise ValueError(
            f"illumination channel below {EPS_ILLUM}: {tuple(arr.tolist())}"
        )
    return arr


def estimate_illumination_gray_world(image) -> np.ndarray:
    """Estimate illumination as the per-channel mean over all pixels.

    Raises ValueError if any channel mean falls below EPS_ILLUM (for
    example an image whose blue channel is black everywhere), since such
    an estimate cannot be divided by.
    """
    img = as_image(image)
    e = img.reshape(-1, CHANNELS).mean(axis=0)
    if e.min() < EPS_ILLUM:
        raise ValueError(
            "gray-world estimate has a channel below "
            f"{EPS_ILLUM}: {tuple(e.tolist())}; supply the illumination explicitly"
        )
    return e
