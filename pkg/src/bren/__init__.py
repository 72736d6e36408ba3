"""Diffuse/specular separation for single RGB images.

The observable mixed reflectance of a dichromatic surface splits into a
spectrally flat mixed neuter and a zero-mean body essence; specular
highlights live entirely in the neuter. This package decomposes images
accordingly, removes highlights by Gaussian-weighted iterative neuter
demotion, renders synthetic scenes with exact ground truth for
verification, and ships a small CLI (``bren separate|synth|eval``).
"""

from .core import (
    CHANNELS,
    EPS_ILLUM,
    compute_body_essence,
    compute_mixed_neuter,
    compute_mixed_reflectance,
    reconstruct_mixed_reflectance,
    reconstruct_radiance,
)
from .illumination import estimate_illumination_gray_world, validate_illumination
from .image_io import (
    ImageFormatError,
    ImageInfo,
    read_image,
    read_ppm,
    read_png,
    srgb_decode,
    srgb_encode,
    write_image,
    write_ppm,
    write_png,
)
from .metrics import EvalReport, evaluate, neuter_trace, psnr, rmse
from .separation import (
    MEAN,
    DemotionState,
    SeparationParams,
    SeparationResult,
    demotion_delta,
    demotion_step,
    essence_gradient,
    high_neuter_mask,
    initial_state,
    neuter_gradients,
    resolve_threshold,
    separate,
)
from .synth import (
    GroundTruth,
    IdentityReport,
    PRESETS,
    SyntheticScene,
    preset_scene,
    random_scene,
    render,
    verify_identities,
)

__version__ = "0.1.0"

__all__ = [
    "CHANNELS",
    "EPS_ILLUM",
    "MEAN",
    "PRESETS",
    "DemotionState",
    "EvalReport",
    "GroundTruth",
    "IdentityReport",
    "ImageFormatError",
    "ImageInfo",
    "SeparationParams",
    "SeparationResult",
    "SyntheticScene",
    "compute_body_essence",
    "compute_mixed_neuter",
    "compute_mixed_reflectance",
    "demotion_delta",
    "demotion_step",
    "essence_gradient",
    "estimate_illumination_gray_world",
    "evaluate",
    "high_neuter_mask",
    "initial_state",
    "neuter_gradients",
    "neuter_trace",
    "preset_scene",
    "psnr",
    "random_scene",
    "read_image",
    "read_png",
    "read_ppm",
    "reconstruct_mixed_reflectance",
    "reconstruct_radiance",
    "render",
    "resolve_threshold",
    "rmse",
    "separate",
    "srgb_decode",
    "srgb_encode",
    "validate_illumination",
    "verify_identities",
    "write_image",
    "write_png",
    "write_ppm",
]
