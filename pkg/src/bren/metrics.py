"""Numeric comparison of images and diagnostics of demotion runs.

All metrics work in linear radiance/reflectance space, matching the
algebra of the rest of the package; nothing here is perceptual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import as_image


@dataclass(frozen=True)
class EvalReport:
    rmse: float
    psnr: float  # dB against peak 1.0; math.inf when the images match
    max_abs_err: float
    clamp_count: int
    compared_pixels: int


def _pair(a, b, mask=None):
    ia = as_image(a, "a")
    ib = as_image(b, "b")
    if ia.shape != ib.shape:
        raise ValueError(f"image shapes differ: {ia.shape} vs {ib.shape}")
    if mask is not None:
        m = np.asarray(mask, dtype=bool)
        if m.shape != ia.shape[:2]:
            raise ValueError(f"mask shape {m.shape} does not match images {ia.shape[:2]}")
        if not m.any():
            raise ValueError("mask selects no pixels")
        ia = ia[m]
        ib = ib[m]
    return ia, ib


def rmse(a, b, mask=None) -> float:
    """Root-mean-square difference over all channels of the compared
    pixels (all pixels, or those selected by the boolean mask)."""
    ia, ib = _pair(a, b, mask)
    return float(np.sqrt(np.mean((ia - ib) ** 2)))


def psnr(a, b, mask=None) -> float:
    """Peak signal-to-noise ratio in dB, peak 1.0; inf for identical
    inputs."""
    ia, ib = _pair(a, b, mask)
    mse = float(np.mean((ia - ib) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)


def evaluate(a, b, mask=None, clamp_count: int = 0) -> EvalReport:
    """Bundle rmse/psnr/worst-deviation into one report."""
    ia, ib = _pair(a, b, mask)
    diff = ia - ib
    mse = float(np.mean(diff**2))
    n_pixels = diff.size // 3
    return EvalReport(
        rmse=math.sqrt(mse),
        psnr=math.inf if mse == 0.0 else 10.0 * math.log10(1.0 / mse),
        max_abs_err=float(np.abs(diff).max()),
        clamp_count=clamp_count,
        compared_pixels=n_pixels,
    )


def neuter_trace(states):
    """Per-step statistics of a demotion run.

    Args:
        states: nonempty sequence of DemotionState, as collected by the
            on_state callback of separate() or by stepping manually.

    Returns:
        One (max_change, changed_count) tuple per executed step. A
        converged run ends with changed_count 0.
    """
    states = list(states)
    if not states:
        raise ValueError("states sequence is empty")
    out = []
    for prev, cur in zip(states, states[1:]):
        max_change = float(np.abs(cur.neuter - prev.neuter).max())
        out.append((max_change, int(cur.changed)))
    return out
