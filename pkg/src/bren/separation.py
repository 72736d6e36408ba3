"""Highlight removal by iterative, Gaussian-weighted neuter demotion.

Pixels whose mixed neuter exceeds a threshold are suspected of carrying
interface (specular) reflection. Each such pixel repeatedly lowers its
neuter toward neighbors that are both darker in neuter and similar in
body essence: among the neighbors with a negative neuter gradient, the
applied step is the minimum of ``exp(-lam * ||dS||^2) * dP``, where dS is
the essence gradient to that neighbor. Equal essences give weight exactly
1 (full propagation); dissimilar essences suppress flow across body-color
boundaries, so no region segmentation is needed.

Updates are synchronous: every step reads a frozen snapshot of the neuter
field and writes a fresh buffer, which makes results independent of pixel
enumeration order and of how the work is split across threads. The
essence field and the high-neuter mask are computed once from the initial
decomposition and never change.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    as_image,
    compute_body_essence,
    compute_mixed_neuter,
    compute_mixed_reflectance,
    reconstruct_radiance,
)
from .illumination import validate_illumination

# Token selecting the image-adaptive threshold (mean of the neuter field).
MEAN = "mean"

# Fixed neighbor enumeration; the minimum is unambiguous on ties but a
# fixed order keeps any provenance-dependent logic deterministic.
_OFFSETS_8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
_OFFSETS_4 = ((-1, 0), (0, -1), (0, 1), (1, 0))


@dataclass(frozen=True)
class SeparationParams:
    """Knobs of the demotion iteration.

    tau: neuter threshold, a nonnegative float or the token MEAN
        (resolved to the mean of the initial neuter field).
    lam: Gaussian falloff on squared essence distance, >= 0. 0 disables
        essence weighting entirely.
    max_iters: hard cap on demotion steps.
    epsilon: a pixel counts as changed only when its neuter moves by
        more than this; the run stops once no pixel changed.
    connectivity: 8 or 4 neighbors.
    """

    tau: float | str = MEAN
    lam: float = 100.0
    max_iters: int = 500
    epsilon: float = 1e-6
    connectivity: int = 8

    def __post_init__(self):
        if isinstance(self.tau, str):
            if self.tau != MEAN:
                raise ValueError(f"tau must be a float or {MEAN!r}, got {self.tau!r}")
        elif not (self.tau >= 0.0):
            raise ValueError(f"tau must be nonnegative, got {self.tau}")
        if not (self.lam >= 0.0):
            raise ValueError(f"lam must be nonnegative, got {self.lam}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not (self.epsilon > 0.0):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.connectivity not in (4, 8):
            raise ValueError(f"connectivity must be 4 or 8, got {self.connectivity}")


@dataclass(frozen=True)
class DemotionState:
    """One snapshot of the iteration.

    changed is the number of pixels that moved by more than epsilon in
    the step that produced this state; None for the initial state.
    """

    k: int
    neuter: np.ndarray
    essence: np.ndarray
    mask: np.ndarray
    changed: int | None


@dataclass(frozen=True)
class SeparationResult:
    diffuse: np.ndarray
    specular: np.ndarray
    iterations_run: int
    final_neuter: np.ndarray
    essence: np.ndarray
    tau_resolved: float
    clamp_count: int


def resolve_threshold(neuter, tau_spec) -> float:
    """Turn the tau parameter into a concrete value (MEAN -> field mean)."""
    n = np.asarray(neuter, dtype=np.float64)
    if isinstance(tau_spec, str):
        if tau_spec != MEAN:
            raise ValueError(f"unknown threshold token {tau_spec!r}")
        return float(n.mean())
    return float(tau_spec)


def high_neuter_mask(neuter, tau: float) -> np.ndarray:
    """Boolean mask of pixels participating in demotion: neuter strictly
    above tau."""
    if tau < 0.0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    return np.asarray(neuter, dtype=np.float64) > tau


def _offsets(connectivity: int):
    if connectivity == 8:
        return _OFFSETS_8
    if connectivity == 4:
        return _OFFSETS_4
    raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")


def _check_coord(shape, p, name="p"):
    y, x = p
    if not (0 <= y < shape[0] and 0 <= x < shape[1]):
        raise ValueError(f"{name}={p!r} outside image of shape {shape}")
    return int(y), int(x)


def neuter_gradients(neuter, p, connectivity: int = 8):
    """Neuter differences to the in-bounds neighbors of pixel p=(y, x).

    Returns a list of ((ny, nx), neighbor_neuter - center_neuter) in the
    fixed enumeration order; border pixels yield fewer entries.
    """
    n = np.asarray(neuter, dtype=np.float64)
    y, x = _check_coord(n.shape, p)
    out = []
    for dy, dx in _offsets(connectivity):
        ny, nx = y + dy, x + dx
        if 0 <= ny < n.shape[0] and 0 <= nx < n.shape[1]:
            out.append(((ny, nx), float(n[ny, nx] - n[y, x])))
    return out


def essence_gradient(essence, p, p_i) -> np.ndarray:
    """Componentwise essence difference essence[p_i] - essence[p]."""
    s = as_image(essence, "essence field")
    y, x = _check_coord(s.shape, p, "p")
    yi, xi = _check_coord(s.shape, p_i, "p_i")
    return s[yi, xi] - s[y, x]


def demotion_delta(p, state: DemotionState, params: SeparationParams) -> float:
    """Neuter step for one masked pixel (always <= 0).

    Over neighbors with strictly smaller neuter, the step is the minimum
    of the Gaussian-weighted neuter gradient; a pixel at a local neuter
    minimum gets 0.
    """
    n, s = state.neuter, state.essence
    y, x = _check_coord(n.shape, p)
    if not state.mask[y, x]:
        raise ValueError(f"pixel {p!r} is not in the high-neuter mask")
    dps = []
    d2s = []
    for dy, dx in _offsets(params.connectivity):
        ny, nx = y + dy, x + dx
        if not (0 <= ny < n.shape[0] and 0 <= nx < n.shape[1]):
            continue
        dp = n[ny, nx] - n[y, x]
        if dp < 0.0:
            ds = s[ny, nx] - s[y, x]
            dps.append(dp)
            d2s.append(ds[0] * ds[0] + ds[1] * ds[1] + ds[2] * ds[2])
    if not dps:
        return 0.0
    weighted = np.exp(-params.lam * np.asarray(d2s)) * np.asarray(dps)
    return float(weighted.min())


def _band_delta(neuter, essence, lam, offsets, r0, r1):
    """Demotion deltas for image rows [r0, r1), read from the full
    snapshot. Out-of-bounds neighbors are simply skipped, so borders use
    whatever neighbors exist."""
    h, w = neuter.shape
    best = np.full((r1 - r0, w), np.inf)
    for dy, dx in offsets:
        y0 = max(r0, -dy)
        y1 = min(r1, h - dy)
        if y0 >= y1:
            continue
        x0 = max(0, -dx)
        x1 = min(w, w - dx)
        if x0 >= x1:
            continue
        pc = neuter[y0:y1, x0:x1]
        pn = neuter[y0 + dy : y1 + dy, x0 + dx : x1 + dx]
        dp = pn - pc
        ds = essence[y0 + dy : y1 + dy, x0 + dx : x1 + dx] - essence[y0:y1, x0:x1]
        d2 = ds[:, :, 0] ** 2 + ds[:, :, 1] ** 2 + ds[:, :, 2] ** 2
        cand = np.where(dp < 0.0, np.exp(-lam * d2) * dp, np.inf)
        sub = best[y0 - r0 : y1 - r0, x0:x1]
        np.minimum(sub, cand, out=sub)
    return np.where(np.isinf(best), 0.0, best)


def initial_state(neuter, essence, mask) -> DemotionState:
    """Bundle the decomposition outputs into the k=0 iteration state."""
    n = np.asarray(neuter, dtype=np.float64)
    s = as_image(essence, "essence field")
    m = np.asarray(mask, dtype=bool)
    if not (n.shape == m.shape == s.shape[:2]):
        raise ValueError(
            f"shape mismatch: neuter {n.shape}, essence {s.shape[:2]}, mask {m.shape}"
        )
    return DemotionState(k=0, neuter=n, essence=s, mask=m, changed=None)


def demotion_step(
    state: DemotionState, params: SeparationParams, workers: int = 1
) -> DemotionState:
    """One synchronous demotion step over all masked pixels.

    Every delta is computed from the incoming state, then applied at
    once; unmasked pixels are untouched. With workers > 1 the rows are
    split across threads, each reading the same immutable snapshot, so
    the result is bitwise identical for any worker count.
    """
    neuter, essence, mask = state.neuter, state.essence, state.mask
    offsets = _offsets(params.connectivity)
    h = neuter.shape[0]
    if workers <= 1 or h < 2 * workers:
        delta = _band_delta(neuter, essence, params.lam, offsets, 0, h)
    else:
        bounds = np.linspace(0, h, workers + 1).astype(int)
        bands = list(zip(bounds[:-1], bounds[1:]))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(
                    lambda b: _band_delta(neuter, essence, params.lam, offsets, *b),
                    bands,
                )
            )
        delta = np.vstack(parts)
    delta = np.where(mask, delta, 0.0)
    changed = int(np.count_nonzero(np.abs(delta) > params.epsilon))
    return DemotionState(
        k=state.k + 1,
        neuter=neuter + delta,
        essence=essence,
        mask=mask,
        changed=changed,
    )


def separate(
    image,
    illum,
    params: SeparationParams | None = None,
    workers: int = 1,
    on_state=None,
) -> SeparationResult:
    """Split a radiance image into diffuse and specular components.

    Pipeline: decompose into neuter + essence, mask high-neuter pixels,
    iterate demotion_step until no pixel changes by more than epsilon (or
    max_iters), then rebuild the diffuse radiance from the demoted neuter
    and take the specular part as the nonnegative remainder.

    Args:
        image: (H, W, 3) nonnegative linear radiance.
        illum: (3,) illumination triple.
        params: SeparationParams; defaults apply when omitted.
        workers: thread count for the per-step pixel map.
        on_state: optional callback invoked with every DemotionState
            (including the initial one), e.g. to record a trace.

    Returns:
        SeparationResult; diffuse + specular reproduces the input except
        where clamping fired (counted in clamp_count).
    """
    if params is None:
        params = SeparationParams()
    img = as_image(image)
    e = validate_illumination(illum)
    reflectance = compute_mixed_reflectance(img, e)
    neuter0 = compute_mixed_neuter(reflectance)
    essence = compute_body_essence(reflectance, neuter0)
    tau = resolve_threshold(neuter0, params.tau)
    mask = high_neuter_mask(neuter0, tau)

    state = initial_state(neuter0, essence, mask)
    if on_state is not None:
        on_state(state)
    while True:
        state = demotion_step(state, params, workers=workers)
        if on_state is not None:
            on_state(state)
        if state.changed == 0 or state.k >= params.max_iters:
            break

    recombined = state.neuter[:, :, None] + essence
    # pixels where demotion overshot and nonnegativity clamping fired
    clamp_count = int(np.count_nonzero((recombined < 0.0).any(axis=2)))
    diffuse = reconstruct_radiance(np.maximum(recombined, 0.0), e)
    specular = np.maximum(img - diffuse, 0.0)

    return SeparationResult(
        diffuse=diffuse,
        specular=specular,
        iterations_run=state.k,
        final_neuter=state.neuter,
        essence=essence,
        tau_resolved=tau,
        clamp_count=clamp_count,
    )
