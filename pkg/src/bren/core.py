"""Exact algebra of the essence-neuter reflectance decomposition.

Dividing an RGB radiance image per channel by the scene illumination gives
the mixed reflectance P. Its channel mean, the mixed neuter, absorbs all
interface (specular) reflection plus the neutral part of body reflection;
the zero-mean remainder, the body essence, is untouched by highlights.

Conventions used across the package:

- images and per-pixel triples: float64 arrays of shape (H, W, 3)
- per-pixel scalar fields (neuter, masks, shading): shape (H, W)
- illumination: shape (3,), every channel strictly positive

All functions are pure: inputs are never mutated and outputs are fresh
arrays, so everything here is safe to call concurrently.
"""

from __future__ import annotations

import numpy as np

# RGB only; no spectral generalization.
CHANNELS = 3

# Smallest illumination channel considered usable as a divisor.
EPS_ILLUM = 1e-6


def as_image(arr, name: str = "image") -> np.ndarray:
    """Coerce to a float64 (H, W, 3) array, validating the shape."""
    a = np.asarray(arr, dtype=np.float64)
    if a.ndim != 3 or a.shape[2] != CHANNELS:
        raise ValueError(f"{name} must have shape (H, W, {CHANNELS}), got {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must contain at least one pixel")
    return a


def compute_mixed_reflectance(image, illum) -> np.ndarray:
    """Divide radiance by illumination per channel.

    Args:
        image: (H, W, 3) nonnegative linear radiance.
        illum: (3,) illumination, every channel >= EPS_ILLUM.

    Returns:
        (H, W, 3) mixed reflectance.
    """
    from .illumination import validate_illumination

    img = as_image(image)
    if img.min() < 0.0:
        raise ValueError("radiance image must be nonnegative")
    e = validate_illumination(illum)
    return img / e


def compute_mixed_neuter(field) -> np.ndarray:
    """Channel mean of a mixed reflectance field: the spectrally flat part.

    Summation is an explicit left fold (R + G + B) so the result is
    reproducible bit for bit.
    """
    f = as_image(field, "reflectance field")
    return (f[:, :, 0] + f[:, :, 1] + f[:, :, 2]) / 3.0


def compute_body_essence(field, neuter) -> np.ndarray:
    """Subtract the mixed neuter from each channel.

    The result sums to ~0 per pixel and carries no interface reflection;
    it is the entity the separation stage uses to compare body colors.
    """
    f = as_image(field, "reflectance field")
    n = np.asarray(neuter, dtype=np.float64)
    if n.shape != f.shape[:2]:
        raise ValueError(f"neuter shape {n.shape} does not match field {f.shape[:2]}")
    return f - n[:, :, None]


def reconstruct_mixed_reflectance(neuter, essence) -> np.ndarray:
    """Recombine neuter + essence, clamping negatives to zero.

    Negative channels can only appear after the neuter has been demoted;
    reflectance is physically nonnegative, so they are clipped.
    """
    n = np.asarray(neuter, dtype=np.float64)
    s = as_image(essence, "essence field")
    if n.shape != s.shape[:2]:
        raise ValueError(f"neuter shape {n.shape} does not match essence {s.shape[:2]}")
    return np.maximum(n[:, :, None] + s, 0.0)


def reconstruct_radiance(field, illum) -> np.ndarray:
    """Multiply a reflectance field by the illumination (inverse of
    compute_mixed_reflectance)."""
    from .illumination import validate_illumination

    f = as_image(field, "reflectance field")
    e = validate_illumination(illum)
    return f * e
