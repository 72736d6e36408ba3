"""Full highlight-removal pipeline against exact ground truth.

Separates the blob scene, scores the recovered diffuse component against
the renderer's ground truth, traces the demotion iteration, and shows
what the essence weighting buys: with it, demotion stops at body-color
boundaries; without it (lambda = 0), highlights on the bars scene drain
into the darker neighboring region.

Run: python demos/03_highlight_removal.py
"""

from pathlib import Path

import numpy as np

from bren import (
    SeparationParams,
    compute_mixed_neuter,
    compute_mixed_reflectance,
    evaluate,
    high_neuter_mask,
    neuter_trace,
    preset_scene,
    render,
    separate,
    write_image,
)

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

print("=== Separating the blob scene (256x256) ===\n")
scene = preset_scene("blob", 256, 256, seed=1)
gt = render(scene)
states = []
result = separate(gt.composite, scene.illumination, on_state=states.append)

neuter0 = compute_mixed_neuter(
    compute_mixed_reflectance(gt.composite, scene.illumination)
)
mask = high_neuter_mask(neuter0, result.tau_resolved)
report = evaluate(result.diffuse, gt.diffuse, mask=mask, clamp_count=result.clamp_count)
print(f"threshold (mean neuter): {result.tau_resolved:.4f}")
print(f"masked pixels:           {int(mask.sum())} of {mask.size}")
print(f"iterations to converge:  {result.iterations_run}")
print(f"diffuse vs ground truth over masked pixels:")
print(f"  rmse={report.rmse:.3g}  psnr={report.psnr:.1f} dB  max={report.max_abs_err:.3g}")
print(f"clamped pixels:          {report.clamp_count}")

trace = neuter_trace(states)
print("\ndemotion trace (step: max change / changed pixels):")
for k, (max_change, changed) in enumerate(trace, start=1):
    if k <= 3 or changed == 0 or k % 10 == 0:
        print(f"  step {k:3d}: {max_change:.2e} / {changed}")

for stem, img in (
    ("input", gt.composite),
    ("diffuse", result.diffuse),
    ("specular", result.specular),
):
    write_image(out_dir / f"separated_{stem}.png", img, bit_depth=16)
print(f"\nwrote separated_input/diffuse/specular .png to {out_dir}")

print("\n=== Why the Gaussian essence weight matters (bars scene) ===\n")
bars = preset_scene("bars", 192, 192, seed=3)
bars_gt = render(bars)
for lam, label in ((100.0, "with essence weighting"), (0.0, "without (lambda=0)")):
    res = separate(bars_gt.composite, bars.illumination, SeparationParams(lam=lam))
    err = evaluate(res.diffuse, bars_gt.diffuse).rmse
    drained = np.maximum(bars_gt.body_neuter - res.final_neuter, 0.0).max()
    print(f"{label:28} rmse={err:.3g}  worst over-demotion={drained:.3g}")
print(
    "\nWithout the weight, bright-region pixels adjacent to the darker"
    "\nequal-chromaticity bar are demoted straight across the boundary;"
    "\nthe Gaussian similarity term suppresses that flow."
)
