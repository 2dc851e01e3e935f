"""Numerical replay of Burch holograms and recovery of the secret.

Replaying a hologram is an inverse centred DFT of its transmittance. The
replay plane holds the DC spike at the centre and two twin orders at
``+-offset`` along the carrier axis. With the ``cos(2 pi c t + phi)``
carrier the upright object (the "plus" order) lands at ``centre - offset``
in array indices; the conjugate (the "minus" order) is its point
reflection through the DC sample.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from hvc.cgh import Hologram
from hvc.numerics import crop_center, idft2_centered

ORDERS = ("plus", "minus")
NORMALIZATIONS = ("max", "percentile99")
COMBINE_MODES = ("product", "min")
BINARIZE_METHODS = ("fixed", "otsu")


@dataclass(frozen=True)
class ReconstructionResult:
    full_field: np.ndarray = field(repr=False)
    plus_order: np.ndarray = field(repr=False)
    minus_order: np.ndarray = field(repr=False)
    dc_peak: float


def reconstruct_field(h: Hologram) -> np.ndarray:
    return idft2_centered(h.values)


def order_window_offsets(h: Hologram, which: str) -> tuple[int, int]:
    """Centre offsets (rows, cols) handed to ``crop_center`` for one order."""
    if which not in ORDERS:
        raise ValueError(f"order must be one of {ORDERS}, got {which!r}")
    plus = (0, -h.offset) if h.params.axis == 1 else (-h.offset, 0)
    if which == "plus":
        return plus
    # Mirror of the plus window through the DC sample. An even-sized window
    # has its centre sample right of middle, hence the extra sample.
    return (
        -plus[0] + 1 - h.share_height % 2,
        -plus[1] + 1 - h.share_width % 2,
    )


def extract_order(field_, h: Hologram, which: str = "plus") -> np.ndarray:
    """Share-sized intensity window of one diffraction order.

    The minus window is flipped in both axes so its pixels line up with the
    plus window.
    """
    rows, cols = order_window_offsets(h, which)
    window = crop_center(field_, h.share_width, h.share_height, rows, cols)
    intensity = np.abs(window) ** 2
    if which == "minus":
        intensity = intensity[::-1, ::-1].copy()
    return intensity


def reconstruct(h: Hologram) -> ReconstructionResult:
    full = reconstruct_field(h)
    cy, cx = full.shape[0] // 2, full.shape[1] // 2
    return ReconstructionResult(
        full_field=full,
        plus_order=extract_order(full, h, "plus"),
        minus_order=extract_order(full, h, "minus"),
        dc_peak=float(np.abs(full[cy, cx]) ** 2),
    )


def normalize_intensity(window, method: str = "max") -> np.ndarray:
    """Scale a nonnegative intensity grid into [0, 1].

    ``percentile99`` divides by the 99th percentile and clips, so a few hot
    samples do not darken the rest. An all-zero grid stays all zero.
    """
    w = np.asarray(window, dtype=float)
    if np.any(w < 0):
        raise ValueError("intensity must be nonnegative")
    if method not in NORMALIZATIONS:
        raise ValueError(f"method must be one of {NORMALIZATIONS}, got {method!r}")
    peak = float(w.max()) if w.size else 0.0
    if peak == 0.0:
        return np.zeros_like(w)
    scale = peak
    if method == "percentile99":
        p = float(np.percentile(w, 99))
        if p > 0.0:
            scale = p
    return np.clip(w / scale, 0.0, 1.0)


def superpose(windows, mode: str = "product") -> np.ndarray:
    """Overlay reconstructed shares.

    ``product`` multiplies transmittances like stacked transparencies; ``min``
    keeps the darkest value.
    """
    grids = [np.asarray(w, dtype=float) for w in windows]
    if len(grids) < 2:
        raise ValueError("superposition needs at least two windows")
    for g in grids[1:]:
        if g.shape != grids[0].shape:
            raise ValueError(f"window dimensions differ: {grids[0].shape} vs {g.shape}")
    if mode == "product":
        return np.prod(np.stack(grids), axis=0)
    if mode == "min":
        return np.min(np.stack(grids), axis=0)
    raise ValueError(f"mode must be one of {COMBINE_MODES}, got {mode!r}")


def otsu_threshold(image, bins: int = 256) -> float:
    img = np.asarray(image, dtype=float).ravel()
    hist, edges = np.histogram(img, bins=bins, range=(0.0, 1.0))
    p = hist / hist.sum()
    centers = 0.5 * (edges[:-1] + edges[1:])
    w0 = np.cumsum(p)
    w1 = 1.0 - w0
    mu0_sum = np.cumsum(p * centers)
    mu_total = mu0_sum[-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        between = (mu_total * w0 - mu0_sum) ** 2 / (w0 * w1)
    between[~np.isfinite(between)] = 0.0
    if between.max() <= 0.0:
        return 0.5
    k = int(np.argmax(between))
    return float(edges[k + 1])


def binarize(image, method: str = "fixed", threshold: float = 0.25) -> np.ndarray:
    """Dark is ink: pixels below the threshold become black (1)."""
    img = np.asarray(image, dtype=float)
    if method == "otsu":
        threshold = otsu_threshold(img)
    elif method != "fixed":
        raise ValueError(f"method must be one of {BINARIZE_METHODS}, got {method!r}")
    return (img < threshold).astype(np.uint8)


def decrypt_holograms(
    holograms,
    order: str = "plus",
    normalization: str = "max",
    combine: str = "product",
    method: str = "fixed",
    threshold: float = 0.25,
):
    """Full decryption: replay, cut out one order, normalize, superpose, binarize.

    Returns ``(decrypted, superposed, windows)``.
    """
    holograms = list(holograms)
    if len(holograms) < 2:
        raise ValueError("decryption needs at least two holograms")
    windows = [
        normalize_intensity(extract_order(reconstruct_field(h), h, order), normalization)
        for h in holograms
    ]
    combined = superpose(windows, combine)
    return binarize(combined, method, threshold), combined, windows
