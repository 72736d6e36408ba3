"""Command-line front end: separate, synth and eval subcommands.

Every subcommand is a thin composition of library calls; no algorithmic
logic lives here. Exit codes: 0 success, 2 I/O failure, 3 invalid
parameters, 4 dimension mismatch (eval).

Each run that writes images also writes a ``<output>.meta`` sidecar of
``key=value`` lines recording everything needed to reproduce it.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .illumination import estimate_illumination_gray_world, validate_illumination
from .image_io import ImageFormatError, read_image, srgb_decode, srgb_encode, write_image
from .metrics import evaluate
from .separation import MEAN, SeparationParams, separate
from .synth import PRESETS, preset_scene, render

EXIT_OK = 0
EXIT_IO = 2
EXIT_PARAMS = 3
EXIT_DIMENSIONS = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bren",
        description="Separate diffuse and specular reflection in RGB images.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sep = sub.add_parser("separate", help="split an image into diffuse + specular")
    p_sep.add_argument("input", help="input image (PPM P6 or PNG)")
    p_sep.add_argument("--diffuse", required=True, help="output path for the diffuse component")
    p_sep.add_argument("--specular", required=True, help="output path for the specular component")
    p_sep.add_argument(
        "--illumination",
        default="auto",
        help="'auto' (gray-world mean) or an explicit R,G,B triple",
    )
    p_sep.add_argument("--tau", default=MEAN, help="neuter threshold: a float or 'mean'")
    p_sep.add_argument("--lambda", dest="lam", type=float, default=100.0,
                       help="Gaussian falloff on squared essence distance")
    p_sep.add_argument("--max-iters", type=int, default=500)
    p_sep.add_argument("--epsilon", type=float, default=1e-6)
    p_sep.add_argument("--connectivity", type=int, default=8, help="4 or 8")
    p_sep.add_argument("--srgb", action="store_true",
                       help="decode input from sRGB and re-encode outputs")
    p_sep.add_argument("--dump-neuter", help="write the final neuter field as a grayscale image")
    p_sep.add_argument("--dump-essence", help="write the essence field visualized as 0.5 + essence/2")

    p_synth = sub.add_parser("synth", help="render a synthetic scene with ground truth")
    p_synth.add_argument("--preset", required=True, help="|".join(PRESETS))
    p_synth.add_argument("--size", required=True, help="WxH, e.g. 128x128")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--out-dir", required=True)

    p_eval = sub.add_parser("eval", help="compare two images")
    p_eval.add_argument("image_a")
    p_eval.add_argument("image_b")
    p_eval.add_argument("--mask", help="restrict the comparison to pixels where this "
                                       "image's channel mean exceeds 0.5")
    p_eval.add_argument("--srgb", action="store_true", help="decode both images from sRGB")

    return parser


def _parse_illumination(raw: str, image: np.ndarray):
    """Returns (illumination, source) with source 'auto' or 'user'."""
    if raw == "auto":
        return estimate_illumination_gray_world(image), "auto"
    parts = raw.split(",")
    if len(parts) != 3:
        raise ValueError(f"--illumination must be 'auto' or R,G,B; got {raw!r}")
    try:
        triple = [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"--illumination components must be numbers; got {raw!r}") from None
    return validate_illumination(triple), "user"


def _parse_tau(raw: str):
    if raw == MEAN:
        return MEAN
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"--tau must be a float or 'mean'; got {raw!r}") from None


def _parse_size(raw: str):
    try:
        w_str, h_str = raw.lower().split("x")
        w, h = int(w_str), int(h_str)
    except ValueError:
        raise ValueError(f"--size must look like WxH; got {raw!r}") from None
    return w, h


def _format_value(v) -> str:
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        return format(v, ".12g")
    return str(v)


def write_meta(path, entries: dict) -> None:
    lines = "".join(f"{k}={_format_value(v)}\n" for k, v in entries.items())
    Path(path).write_text(lines, encoding="utf-8")


def read_meta(path) -> dict:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            key, _, value = line.partition("=")
            out[key] = value
    return out


def cmd_separate(args) -> int:
    image, info = read_image(args.input)
    if args.srgb:
        image = srgb_decode(image)
    clipped = int(np.count_nonzero((image >= 1.0).any(axis=2)))

    illum, source = _parse_illumination(args.illumination, image)
    params = SeparationParams(
        tau=_parse_tau(args.tau),
        lam=args.lam,
        max_iters=args.max_iters,
        epsilon=args.epsilon,
        connectivity=args.connectivity,
    )
    result = separate(image, illum, params)

    def emit(path, img):
        write_image(path, srgb_encode(img) if args.srgb else img, info.bit_depth)

    emit(args.diffuse, result.diffuse)
    emit(args.specular, result.specular)
    if args.dump_neuter:
        emit(args.dump_neuter, np.repeat(result.final_neuter[:, :, None], 3, axis=2))
    if args.dump_essence:
        emit(args.dump_essence, 0.5 + result.essence / 2.0)

    write_meta(
        str(args.diffuse) + ".meta",
        {
            "illumination_r": float(illum[0]),
            "illumination_g": float(illum[1]),
            "illumination_b": float(illum[2]),
            "illumination_source": source,
            "tau_resolved": result.tau_resolved,
            "lambda": params.lam,
            "epsilon": params.epsilon,
            "max_iters": params.max_iters,
            "connectivity": params.connectivity,
            "iterations_run": result.iterations_run,
            "clamp_count": result.clamp_count,
            "clipped_count": clipped,
        },
    )
    return EXIT_OK


def cmd_synth(args) -> int:
    width, height = _parse_size(args.size)
    scene = preset_scene(args.preset, width, height, args.seed)
    gt = render(scene)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    # 16-bit keeps quantization (~1/65535) far below test tolerances
    write_image(out / "composite.ppm", gt.composite, bit_depth=16)
    write_image(out / "diffuse_gt.ppm", gt.diffuse, bit_depth=16)
    write_image(out / "specular_gt.ppm", gt.specular, bit_depth=16)
    write_meta(
        out / "composite.ppm.meta",
        {
            "preset": args.preset,
            "seed": args.seed,
            "width": width,
            "height": height,
            "illumination_r": float(scene.illumination[0]),
            "illumination_g": float(scene.illumination[1]),
            "illumination_b": float(scene.illumination[2]),
        },
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    image_a, _ = read_image(args.image_a)
    image_b, _ = read_image(args.image_b)
    if args.srgb:
        image_a = srgb_decode(image_a)
        image_b = srgb_decode(image_b)
    if image_a.shape != image_b.shape:
        print(
            f"error: image dimensions differ: {image_a.shape[1]}x{image_a.shape[0]} "
            f"vs {image_b.shape[1]}x{image_b.shape[0]}",
            file=sys.stderr,
        )
        return EXIT_DIMENSIONS
    mask = None
    if args.mask:
        mask_img, _ = read_image(args.mask)
        if mask_img.shape[:2] != image_a.shape[:2]:
            print("error: mask dimensions differ from images", file=sys.stderr)
            return EXIT_DIMENSIONS
        mask = mask_img.mean(axis=2) > 0.5
    report = evaluate(image_a, image_b, mask=mask)
    print(f"rmse={_format_value(report.rmse)}")
    print(f"psnr={_format_value(report.psnr)}")
    print(f"max_abs_err={_format_value(report.max_abs_err)}")
    return EXIT_OK


_HANDLERS = {"separate": cmd_separate, "synth": cmd_synth, "eval": cmd_eval}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (OSError, ImageFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS


def entrypoint() -> None:
    sys.exit(main())
