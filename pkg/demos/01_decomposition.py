"""Walk through the reflectance decomposition on a few hand-picked pixels.

Shows how dividing radiance by illumination, taking the channel mean
(mixed neuter) and keeping the zero-mean remainder (body essence) splits
a color into a part that soaks up specular highlights and a part that
does not.

Run: python demos/01_decomposition.py
"""

import numpy as np

from bren import (
    compute_body_essence,
    compute_mixed_neuter,
    compute_mixed_reflectance,
    reconstruct_mixed_reflectance,
    reconstruct_radiance,
)


def show(label, triple):
    print(f"  {label:<28} ({triple[0]: .4f}, {triple[1]: .4f}, {triple[2]: .4f})")


# Three surface colors under the same illumination: a saturated red, a
# magenta-like color with two strong channels, and a neutral gray.
colors = {
    "near-R surface": (0.9, 0.03, 0.07),
    "near-M surface": (0.47, 0.05, 0.48),
    "neutral gray": (0.4, 0.4, 0.4),
}
illumination = np.array([0.95, 1.0, 0.9])

print("=== Decomposing mixed reflectance into neuter + essence ===\n")
for label, color in colors.items():
    radiance = np.array(color).reshape(1, 1, 3) * illumination
    reflectance = compute_mixed_reflectance(radiance, illumination)
    neuter = compute_mixed_neuter(reflectance)
    essence = compute_body_essence(reflectance, neuter)

    print(f"{label}:")
    show("radiance", radiance[0, 0])
    show("mixed reflectance", reflectance[0, 0])
    print(f"  {'mixed neuter':<28}  {neuter[0, 0]: .4f}")
    show("body essence", essence[0, 0])
    print(f"  {'essence channel sum':<28}  {essence[0, 0].sum(): .2e}")
    print()

print("=== A highlight moves the neuter but never the essence ===\n")
base = np.array([0.47, 0.05, 0.48]).reshape(1, 1, 3)
for highlight in (0.0, 0.1, 0.3):
    radiance = (base + highlight) * illumination  # spectrally flat addition
    reflectance = compute_mixed_reflectance(radiance, illumination)
    neuter = compute_mixed_neuter(reflectance)
    essence = compute_body_essence(reflectance, neuter)
    print(
        f"highlight strength {highlight:.1f}: "
        f"neuter={neuter[0, 0]:.4f}  "
        f"essence=({essence[0, 0, 0]:.4f}, {essence[0, 0, 1]:.4f}, {essence[0, 0, 2]:.4f})"
    )

print("\n=== The decomposition is exactly invertible ===\n")
rng = np.random.default_rng(0)
image = rng.uniform(0.0, 1.0, size=(32, 32, 3))
reflectance = compute_mixed_reflectance(image, illumination)
neuter = compute_mixed_neuter(reflectance)
essence = compute_body_essence(reflectance, neuter)
rebuilt = reconstruct_mixed_reflectance(neuter, essence)
back = reconstruct_radiance(rebuilt, illumination)
print(f"reflectance round-trip max deviation: {np.abs(rebuilt - reflectance).max():.2e}")
print(f"radiance round-trip max deviation:    {np.abs(back - image).max():.2e}")
