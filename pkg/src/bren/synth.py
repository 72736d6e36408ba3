"""Forward dichromatic renderer: composite images with exact ground truth.

A scene is lit by illumination E and reflects light two ways: body
(diffuse) reflection carrying the surface color S scaled by a shading
factor m_b, and interface (specular) reflection that is spectrally flat
with albedo S_n scaled by a geometry factor m_f. Per channel:

    composite = m_f * S_n * E  +  m_b * S * E

Everything downstream of the renderer is closed form, so the returned
ground truth (diffuse and specular components, interface and body
reflectance, body neuter and essence) is exact up to float64 rounding.
These scenes are the quantitative oracle for the separation stage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_image, compute_body_essence, compute_mixed_neuter, compute_mixed_reflectance
from .illumination import validate_illumination

PRESETS = ("blob", "bars", "ramp")

# The two body colors used by the blob preset: one dominated by a single
# channel (near red) and one with two comparable channels (near magenta),
# the case where single-degree-of-freedom color descriptors struggle.
NEAR_R = (0.9, 0.03, 0.07)
NEAR_M = (0.47, 0.05, 0.48)


@dataclass(frozen=True)
class SyntheticScene:
    """Latent description of a dichromatic scene.

    body_reflectance: (H, W, 3) surface color S in [0, 1].
    interface_reflectance: scalar interface albedo S_n in [0, 1],
        spectrally flat by construction.
    shading: (H, W) body geometry factor m_b >= 0.
    specular_coeff: (H, W) interface geometry factor m_f >= 0.
    illumination: (3,) triple E.
    """

    body_reflectance: np.ndarray
    interface_reflectance: float
    shading: np.ndarray
    specular_coeff: np.ndarray
    illumination: np.ndarray

    @property
    def height(self) -> int:
        return self.body_reflectance.shape[0]

    @property
    def width(self) -> int:
        return self.body_reflectance.shape[1]


@dataclass(frozen=True)
class GroundTruth:
    """Rendered composite plus every latent field, all exact.

    composite is computed as diffuse + specular (one addition, not two
    independently rounded renders), so the identity holds bit for bit.
    """

    composite: np.ndarray
    diffuse: np.ndarray
    specular: np.ndarray
    interface_reflectance: np.ndarray  # (H, W): m_f * S_n
    body_reflectance: np.ndarray  # (H, W, 3): m_b * S
    body_neuter: np.ndarray  # (H, W): channel mean of body_reflectance
    body_essence: np.ndarray  # (H, W, 3): body_reflectance - body_neuter


@dataclass(frozen=True)
class IdentityReport:
    """Worst-case deviations of the observable decomposition from the
    latent ground truth."""

    max_neuter_dev: float
    max_essence_dev: float


def render(scene: SyntheticScene) -> GroundTruth:
    """Evaluate the forward model and collect the exact ground truth."""
    s = as_image(scene.body_reflectance, "body_reflectance")
    m_b = np.asarray(scene.shading, dtype=np.float64)
    m_f = np.asarray(scene.specular_coeff, dtype=np.float64)
    if m_b.shape != s.shape[:2] or m_f.shape != s.shape[:2]:
        raise ValueError("shading / specular_coeff shapes must match body_reflectance")
    if s.min() < 0 or m_b.min() < 0 or m_f.min() < 0 or not 0 <= scene.interface_reflectance <= 1:
        raise ValueError("scene fields must be nonnegative (interface albedo in [0, 1])")
    e = validate_illumination(scene.illumination)

    interface = m_f * scene.interface_reflectance
    body = m_b[:, :, None] * s
    body_neuter = (body[:, :, 0] + body[:, :, 1] + body[:, :, 2]) / 3.0
    body_essence = body - body_neuter[:, :, None]

    diffuse = body * e
    specular = interface[:, :, None] * e
    composite = diffuse + specular
    return GroundTruth(
        composite=composite,
        diffuse=diffuse,
        specular=specular,
        interface_reflectance=interface,
        body_reflectance=body,
        body_neuter=body_neuter,
        body_essence=body_essence,
    )


def verify_identities(gt: GroundTruth, illum) -> IdentityReport:
    """Check the observable decomposition against the latent fields.

    On every pixel of a rendered scene, the channel mean of the mixed
    reflectance must equal interface reflectance + body neuter, and the
    observable essence must equal the latent body essence. Returns the
    maximum absolute deviation of each identity.
    """
    e = validate_illumination(illum)
    comp = as_image(gt.composite, "composite")
    if comp.shape != gt.body_essence.shape:
        raise ValueError("ground truth fields have inconsistent shapes")
    reflectance = compute_mixed_reflectance(comp, e)
    neuter = compute_mixed_neuter(reflectance)
    essence = compute_body_essence(reflectance, neuter)
    neuter_dev = np.abs(neuter - (gt.interface_reflectance + gt.body_neuter)).max()
    essence_dev = np.abs(essence - gt.body_essence).max()
    return IdentityReport(
        max_neuter_dev=float(neuter_dev), max_essence_dev=float(essence_dev)
    )


def _gaussian_lobe(height, width, cy, cx, sigma, amplitude):
    """Isotropic Gaussian bump in m_f, cut to exactly zero beyond 3 sigma
    so the surrounding pixels are genuine zero-specular anchors."""
    y = np.arange(height, dtype=np.float64)[:, None]
    x = np.arange(width, dtype=np.float64)[None, :]
    r2 = (y - cy) ** 2 + (x - cx) ** 2
    lobe = amplitude * np.exp(-r2 / (2.0 * sigma**2))
    lobe[r2 > (3.0 * sigma) ** 2] = 0.0
    return lobe


def _jitter(rng, scale):
    return float(rng.uniform(-scale, scale))


def preset_scene(name: str, width: int, height: int, seed: int = 0) -> SyntheticScene:
    """Deterministic test scenes; the same arguments always give the same
    scene.

    blob: two constant-color halves (near-R left, near-M right), one
        truncated Gaussian specular lobe centered in each half.
    bars: two adjacent bars with proportional body colors (same
        chromaticity, strongly different magnitude), one lobe fully
        inside the left bar.
    ramp: body color blends smoothly across the width, one central lobe.

    All presets keep the composite within [0, 1] so 8/16-bit files hold
    them without clipping. Randomness (seeded) only jitters lobe centers,
    amplitudes and the illumination.
    """
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESETS}")
    if width < 16 or height < 16:
        raise ValueError(f"preset size must be at least 16x16, got {width}x{height}")
    rng = np.random.default_rng(seed)
    body = np.empty((height, width, 3))
    m_f = np.zeros((height, width))
    sigma = min(width, height) / 20.0
    wobble = min(width, height) / 40.0

    if name == "blob":
        m_b = np.full((height, width), 0.7)
        half = width // 2
        body[:, :half] = NEAR_R
        body[:, half:] = NEAR_M
        for cx0 in (width * 0.25, width * 0.75):
            amp = rng.uniform(0.2, 0.3)
            cy = height * 0.5 + _jitter(rng, wobble)
            cx = cx0 + _jitter(rng, wobble)
            m_f += _gaussian_lobe(height, width, cy, cx, sigma, amp)
    elif name == "bars":
        m_b = np.full((height, width), 0.85)
        half = width // 2
        left = np.array([0.78, 0.12, 0.12])
        body[:, :half] = left
        body[:, half:] = 0.15 * left
        amp = rng.uniform(0.2, 0.3)
        cy = height * 0.5 + _jitter(rng, wobble)
        cx = width * 0.25 + _jitter(rng, wobble)
        m_f += _gaussian_lobe(height, width, cy, cx, sigma, amp)
    else:  # ramp
        m_b = np.full((height, width), 0.8)
        t = np.linspace(0.0, 1.0, width)[None, :, None]
        c0 = np.array([0.85, 0.15, 0.10])
        c1 = np.array([0.15, 0.25, 0.85])
        body[:] = (1.0 - t) * c0 + t * c1
        amp = rng.uniform(0.2, 0.3)
        cy = height * 0.5 + _jitter(rng, wobble)
        cx = width * 0.5 + _jitter(rng, wobble)
        m_f += _gaussian_lobe(height, width, cy, cx, min(width, height) / 16.0, amp)

    illum = rng.uniform(0.85, 1.0, size=3)
    return SyntheticScene(
        body_reflectance=body,
        interface_reflectance=1.0,
        shading=m_b,
        specular_coeff=m_f,
        illumination=illum,
    )


def random_scene(seed: int, min_size: int = 16, max_size: int = 128) -> SyntheticScene:
    """Fully random scene for property sweeps: iid body colors, shading,
    specular coefficients, interface albedo and illumination."""
    rng = np.random.default_rng(seed)
    h = int(rng.integers(min_size, max_size + 1))
    w = int(rng.integers(min_size, max_size + 1))
    return SyntheticScene(
        body_reflectance=rng.uniform(0.0, 1.0, size=(h, w, 3)),
        interface_reflectance=float(rng.uniform(0.0, 1.0)),
        shading=rng.uniform(0.0, 1.2, size=(h, w)),
        specular_coeff=rng.uniform(0.0, 0.5, size=(h, w)),
        illumination=rng.uniform(0.2, 2.0, size=3),
    )
