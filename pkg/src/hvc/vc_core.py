"""
Naor-Shamir visual cryptography: share generation, film stacking and the
contrast / per-share statistics of a scheme.

Binary images are 2-D ``uint8`` numpy arrays over {0, 1} with 1 = black ink
(opaque) and 0 = white (transparent).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import stats

MAX_SEED = 2**64


def as_binary_image(image, name="image") -> np.ndarray:
    """Validate ``image`` as a non-empty 2-D {0,1} grid and return it as uint8."""
    arr = np.asarray(image)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if arr.dtype == bool:
        return arr.astype(np.uint8)
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError(f"{name} must contain only 0 and 1")
    return arr.astype(np.uint8)


@dataclass(frozen=True, eq=False)
class VcScheme:
    """Basis matrices of an (n, m) visual cryptography scheme.

    ``s0`` builds white secret pixels and ``s1`` black ones. Row ``i`` of the
    column-permuted matrix is the sub-pixel pattern of share ``i``; it is laid
    out row-major into a ``block_rows x block_cols`` block.
    """

    name: str
    s0: np.ndarray
    s1: np.ndarray
    block_rows: int
    block_cols: int

    def __post_init__(self):
        s0 = as_binary_image(self.s0, "s0")
        s1 = as_binary_image(self.s1, "s1")
        if s0.shape != s1.shape:
            raise ValueError(f"s0 and s1 differ in shape: {s0.shape} vs {s1.shape}")
        if self.block_rows < 1 or self.block_cols < 1:
            raise ValueError("block geometry must be positive")
        if self.block_rows * self.block_cols != s0.shape[1]:
            raise ValueError(
                f"pixel expansion m={s0.shape[1]} != block_rows*block_cols="
                f"{self.block_rows * self.block_cols}"
            )
        s0.setflags(write=False)
        s1.setflags(write=False)
        object.__setattr__(self, "s0", s0)
        object.__setattr__(self, "s1", s1)

    @property
    def n(self) -> int:
        return self.s0.shape[0]

    @property
    def m(self) -> int:
        return self.s0.shape[1]

    def basis(self, color: int) -> np.ndarray:
        if color not in (0, 1):
            raise ValueError(f"color must be 0 or 1, got {color!r}")
        return self.s1 if color else self.s0

    def stacked_weights(self) -> tuple[int, int]:
        """Hamming weight of the OR over all rows, for white and black pixels."""
        return int(self.s0.max(axis=0).sum()), int(self.s1.max(axis=0).sum())

    def is_valid(self) -> bool:
        """True when stacked black blocks are darker than white ones for every permutation.

        Exhaustive over column permutations, so only intended for m <= 8.
        """
        for perm in itertools.permutations(range(self.m)):
            w0 = int(self.s0[:, perm].max(axis=0).sum())
            w1 = int(self.s1[:, perm].max(axis=0).sum())
            if w1 <= w0:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, VcScheme):
            return NotImplemented
        return (
            self.name == other.name
            and self.block_rows == other.block_rows
            and self.block_cols == other.block_cols
            and np.array_equal(self.s0, other.s0)
            and np.array_equal(self.s1, other.s1)
        )

    __hash__ = None


NS_2X2 = VcScheme(
    name="ns-2x2",
    s0=np.array([[1, 1, 0, 0], [1, 1, 0, 0]]),
    s1=np.array([[1, 1, 0, 0], [0, 0, 1, 1]]),
    block_rows=2,
    block_cols=2,
)

BUILTIN_SCHEMES = {NS_2X2.name: NS_2X2}


def get_scheme(name: str) -> VcScheme:
    try:
        return BUILTIN_SCHEMES[name]
    except KeyError:
        raise ValueError(
            f"unknown scheme {name!r}; built-in schemes: {', '.join(BUILTIN_SCHEMES)}"
        ) from None


@dataclass(frozen=True, eq=False)
class ShareSet:
    shares: list
    scheme: VcScheme
    seed: int

    def __eq__(self, other):
        if not isinstance(other, ShareSet):
            return NotImplemented
        return (
            self.seed == other.seed
            and self.scheme == other.scheme
            and len(self.shares) == len(other.shares)
            and all(np.array_equal(a, b) for a, b in zip(self.shares, other.shares))
        )

    __hash__ = None


def _check_permutation(permutation, m: int) -> np.ndarray:
    perm = np.asarray(permutation)
    if perm.shape != (m,) or not np.array_equal(np.sort(perm), np.arange(m)):
        raise ValueError(f"permutation must be a bijection on 0..{m - 1}, got {permutation!r}")
    return perm


def expand_pixel(color: int, scheme: VcScheme, permutation) -> list[np.ndarray]:
    """Sub-pixel blocks of one secret pixel, one per share.

    Block ``i`` is row ``i`` of the basis matrix for ``color`` with its columns
    reordered by ``permutation``, reshaped row-major.
    """
    perm = _check_permutation(permutation, scheme.m)
    permuted = scheme.basis(color)[:, perm]
    return [row.reshape(scheme.block_rows, scheme.block_cols).copy() for row in permuted]


def _rng(seed: int) -> np.random.Generator:
    if not isinstance(seed, (int, np.integer)) or not 0 <= int(seed) < MAX_SEED:
        raise ValueError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def _draw_permutations(rng: np.random.Generator, count: int, m: int) -> np.ndarray:
    # One independent uniform shuffle per row, rows in pixel order.
    return rng.permuted(np.tile(np.arange(m), (count, 1)), axis=1)


def generate_shares(secret, scheme: VcScheme = NS_2X2, seed: int = 0) -> ShareSet:
    """Split ``secret`` into ``scheme.n`` shares.

    Every secret pixel (row-major order) gets its own uniformly random column
    permutation drawn from a PCG64 stream seeded with ``seed``.
    """
    secret = as_binary_image(secret, "secret")
    h, w = secret.shape
    r, c, n, m = scheme.block_rows, scheme.block_cols, scheme.n, scheme.m

    perms = _draw_permutations(_rng(seed), h * w, m)
    basis = np.where(secret.reshape(-1, 1, 1).astype(bool), scheme.s1, scheme.s0)
    permuted = np.take_along_axis(basis, perms[:, None, :], axis=2)
    # (pixel, share, sub-pixel) -> (share, row, r, col, c)
    blocks = permuted.reshape(h, w, n, r, c).transpose(2, 0, 3, 1, 4)
    shares = [np.ascontiguousarray(b.reshape(h * r, w * c)) for b in blocks]
    return ShareSet(shares=shares, scheme=scheme, seed=int(seed))


def stack_shares(shares) -> np.ndarray:
    """Overlay transparencies: a pixel is black if it is black in any share."""
    images = [as_binary_image(s, "share") for s in shares]
    if len(images) < 2:
        raise ValueError("stacking needs at least two shares")
    shape = images[0].shape
    for img in images[1:]:
        if img.shape != shape:
            raise ValueError(f"share dimensions differ: {shape} vs {img.shape}")
    return np.bitwise_or.reduce(np.stack(images), axis=0)


def block_means(image, block_rows: int, block_cols: int) -> np.ndarray:
    """Mean over each non-overlapping ``block_rows x block_cols`` block."""
    img = np.asarray(image, dtype=float)
    h, w = img.shape
    if h % block_rows or w % block_cols:
        raise ValueError(f"image {img.shape} is not tiled by {block_rows}x{block_cols} blocks")
    return img.reshape(h // block_rows, block_rows, w // block_cols, block_cols).mean(axis=(1, 3))


@dataclass(frozen=True)
class ContrastReport:
    """Black fraction of stacked blocks, split by the colour of the secret pixel.

    A mean is ``None`` when the secret has no pixel of that colour; the
    contrast is then ``None`` as well.
    """

    white_mean: float | None
    black_mean: float | None
    contrast: float | None


def measure_contrast(stacked, secret, scheme: VcScheme = NS_2X2) -> ContrastReport:
    stacked = np.asarray(stacked, dtype=float)
    secret = as_binary_image(secret, "secret")
    r, c = scheme.block_rows, scheme.block_cols
    expected = (secret.shape[0] * r, secret.shape[1] * c)
    if stacked.shape != expected:
        raise ValueError(f"stacked image is {stacked.shape}, expected {expected}")
    fractions = block_means(stacked, r, c)
    black = fractions[secret == 1]
    white = fractions[secret == 0]
    black_mean = float(black.mean()) if black.size else None
    white_mean = float(white.mean()) if white.size else None
    contrast = None
    if black_mean is not None and white_mean is not None:
        contrast = black_mean - white_mean
    return ContrastReport(white_mean=white_mean, black_mean=black_mean, contrast=contrast)


def pattern_support(scheme: VcScheme, color: int, share_index: int) -> list[tuple[int, ...]]:
    """All blocks reachable for one share by column permutations, flattened row-major.

    A permuted row is uniform over the distinct arrangements of its entries,
    which for a 0/1 row are the placements of its ones.
    """
    row = _share_row(scheme, color, share_index)
    ones = int(row.sum())
    support = []
    for positions in itertools.combinations(range(scheme.m), ones):
        block = [0] * scheme.m
        for p in positions:
            block[p] = 1
        support.append(tuple(block))
    return sorted(support)


def share_marginal(scheme: VcScheme, color: int, share_index: int) -> dict:
    """Exact distribution of one share's block, enumerating all m! permutations."""
    row = _share_row(scheme, color, share_index)
    counts = Counter(
        tuple(int(v) for v in row[list(perm)])
        for perm in itertools.permutations(range(scheme.m))
    )
    total = math.factorial(scheme.m)
    return {block: Fraction(k, total) for block, k in sorted(counts.items())}


def _share_row(scheme: VcScheme, color: int, share_index: int) -> np.ndarray:
    if not 0 <= share_index < scheme.n:
        raise ValueError(f"share_index must be in [0, {scheme.n}), got {share_index}")
    return scheme.basis(color)[share_index]


@dataclass(frozen=True)
class PatternHistogram:
    counts: dict = field(repr=False)
    support: list = field(repr=False)
    trials: int
    chi_square: float
    df: int

    def critical_value(self, alpha: float = 0.01) -> float:
        return float(stats.chi2.ppf(1.0 - alpha, self.df)) if self.df > 0 else 0.0

    def passes(self, alpha: float = 0.01) -> bool:
        return self.chi_square < self.critical_value(alpha)


def share_pattern_histogram(
    scheme: VcScheme, color: int, share_index: int, trials: int, seed: int
) -> PatternHistogram:
    """Histogram one share's sub-pixel block over ``trials`` random expansions.

    The chi-square statistic is taken against the uniform distribution over
    the blocks reachable by column permutations.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    row = _share_row(scheme, color, share_index)
    perms = _draw_permutations(_rng(seed), trials, scheme.m)
    blocks = row[perms]
    observed = Counter(map(tuple, blocks.tolist()))

    support = pattern_support(scheme, color, share_index)
    counts = {block: observed.get(block, 0) for block in support}
    if set(observed) - set(support):
        raise RuntimeError("expansion produced a block outside the reachable support")
    expected = trials / len(support)
    chi_square = float(sum((k - expected) ** 2 for k in counts.values()) / expected)
    return PatternHistogram(
        counts=counts, support=support, trials=trials, chi_square=chi_square, df=len(support) - 1
    )
