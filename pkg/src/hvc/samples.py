"""Test secrets: block-letter text rendered from a built-in 5x7 font."""

from __future__ import annotations

import numpy as np

_FONT = {
    "A": ["01110", "10001", "10001", "11111", "10001", "10001", "10001"],
    "B": ["11110", "10001", "10001", "11110", "10001", "10001", "11110"],
    "C": ["01110", "10001", "10000", "10000", "10000", "10001", "01110"],
    "D": ["11110", "10001", "10001", "10001", "10001", "10001", "11110"],
    "E": ["11111", "10000", "10000", "11110", "10000", "10000", "11111"],
    "G": ["01110", "10001", "10000", "10111", "10001", "10001", "01111"],
    "H": ["10001", "10001", "10001", "11111", "10001", "10001", "10001"],
    "I": ["01110", "00100", "00100", "00100", "00100", "00100", "01110"],
    "L": ["10000", "10000", "10000", "10000", "10000", "10000", "11111"],
    "O": ["01110", "10001", "10001", "10001", "10001", "10001", "01110"],
    "R": ["11110", "10001", "10001", "11110", "10100", "10010", "10001"],
    "S": ["01111", "10000", "10000", "01110", "00001", "00001", "11110"],
    "T": ["11111", "00100", "00100", "00100", "00100", "00100", "00100"],
    "V": ["10001", "10001", "10001", "10001", "10001", "01010", "00100"],
    " ": ["00000"] * 7,
}


def text_secret(text: str, width: int = 64, height: int = 64) -> np.ndarray:
    """Render ``text`` in black on white, scaled up by whole pixels and centred."""
    glyphs = []
    for ch in text.upper():
        if ch not in _FONT:
            raise ValueError(f"no glyph for {ch!r}")
        glyphs.append(np.array([[int(b) for b in row] for row in _FONT[ch]], dtype=np.uint8))
    gap = np.zeros((7, 1), dtype=np.uint8)
    parts = []
    for i, g in enumerate(glyphs):
        if i:
            parts.append(gap)
        parts.append(g)
    line = np.hstack(parts)
    scale = max(1, min((width - 2) // line.shape[1], (height - 2) // line.shape[0]))
    big = np.kron(line, np.ones((scale, scale), dtype=np.uint8))
    if big.shape[0] > height or big.shape[1] > width:
        raise ValueError(f"{text!r} does not fit in {width}x{height}")
    out = np.zeros((height, width), dtype=np.uint8)
    top = (height - big.shape[0]) // 2
    left = (width - big.shape[1]) // 2
    out[top : top + big.shape[0], left : left + big.shape[1]] = big
    return out
