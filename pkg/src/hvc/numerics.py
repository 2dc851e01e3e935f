"""Centered, unitary 2-D DFTs and centre-aligned grid helpers.

The zero-frequency sample sits at ``(rows // 2, cols // 2)``. Both transforms
are scaled by ``1 / sqrt(rows * cols)`` so Parseval holds in either direction.
"""

from __future__ import annotations

import numpy as np


def _as_field(f, name="field") -> np.ndarray:
    arr = np.asarray(f)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def dft2_centered(f) -> np.ndarray:
    f = _as_field(f)
    return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(f), norm="ortho"))


def idft2_centered(F) -> np.ndarray:
    F = _as_field(F)
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(F), norm="ortho"))


def zero_pad_center(f, new_width: int, new_height: int) -> np.ndarray:
    """Embed ``f`` in a zero grid so the two centre samples coincide."""
    f = np.asarray(f)
    h, w = f.shape
    if new_width < w or new_height < h:
        raise ValueError(f"cannot pad {w}x{h} down to {new_width}x{new_height}")
    out = np.zeros((new_height, new_width), dtype=f.dtype)
    top = new_height // 2 - h // 2
    left = new_width // 2 - w // 2
    out[top : top + h, left : left + w] = f
    return out


def crop_center(
    f,
    window_width: int,
    window_height: int,
    center_row_offset: int = 0,
    center_col_offset: int = 0,
) -> np.ndarray:
    """Window whose centre sample sits at the grid centre plus the given offsets.

    No wraparound: a window reaching past the grid edge is an error.
    """
    f = np.asarray(f)
    h, w = f.shape
    if window_width < 1 or window_height < 1:
        raise ValueError("window dimensions must be positive")
    top = h // 2 + center_row_offset - window_height // 2
    left = w // 2 + center_col_offset - window_width // 2
    if top < 0 or left < 0 or top + window_height > h or left + window_width > w:
        raise ValueError(
            f"{window_width}x{window_height} window at offset "
            f"({center_row_offset}, {center_col_offset}) leaves the {w}x{h} grid"
        )
    return f[top : top + window_height, left : left + window_width].copy()

