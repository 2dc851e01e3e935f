"""Figures written next to the CLI's text reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def figure_path(report_path) -> Path:
    return Path(report_path).with_suffix(".png")


def _show_binary(ax, image, title):
    # Black ink is 1, so invert for display.
    ax.imshow(1 - np.asarray(image), cmap="gray", vmin=0, vmax=1, interpolation="nearest")
    ax.set_title(title, fontsize=9)
    ax.set_axis_off()


def _show_gray(ax, image, title, cmap="gray"):
    ax.imshow(image, cmap=cmap, interpolation="nearest")
    ax.set_title(title, fontsize=9)
    ax.set_axis_off()


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)


def plot_encryption(secret, shares, holograms, path):
    """Secret, every share and every hologram in one row each."""
    cols = max(len(shares), 1) + 1
    fig, axes = plt.subplots(2, cols, figsize=(2.6 * cols, 5.2), squeeze=False)
    _show_binary(axes[0, 0], secret, "secret")
    axes[1, 0].set_axis_off()
    for i, share in enumerate(shares):
        _show_binary(axes[0, i + 1], share, f"share {i + 1}")
    for i, h in enumerate(holograms):
        _show_gray(axes[1, i + 1], h.values, f"hologram {i + 1}")
    _save(fig, path)


def plot_decryption(replay_intensity, windows, superposed, decrypted, path):
    """Replay plane of the first hologram, the extracted orders and the result."""
    cols = len(windows) + 3
    fig, axes = plt.subplots(1, cols, figsize=(2.6 * cols, 2.8), squeeze=False)
    axes = axes[0]
    _show_gray(axes[0], np.log10(replay_intensity + 1e-12), "replay plane (log)", "magma")
    for i, w in enumerate(windows):
        _show_gray(axes[i + 1], w, f"order, hologram {i + 1}")
    _show_gray(axes[-2], superposed, "superposed")
    _show_binary(axes[-1], decrypted, "decrypted")
    _save(fig, path)


def plot_verification(secret, decrypted, darkness, path):
    fig, axes = plt.subplots(1, 3, figsize=(7.8, 2.8))
    _show_binary(axes[0], secret, "secret")
    _show_binary(axes[1], decrypted, "decrypted")
    _show_gray(axes[2], 1 - darkness, "block mean")
    _save(fig, path)


def plot_security(histograms, path):
    """Bar chart per (colour, share) of block counts against the uniform level.

    ``histograms`` maps ``(color, share_index)`` to a ``PatternHistogram``.
    """
    keys = sorted(histograms)
    fig, axes = plt.subplots(1, len(keys), figsize=(3.0 * len(keys), 2.8), squeeze=False)
    for ax, key in zip(axes[0], keys):
        hist = histograms[key]
        counts = [hist.counts[b] for b in hist.support]
        ax.bar(range(len(counts)), counts, color="0.4")
        ax.axhline(hist.trials / len(hist.support), color="C3", lw=1)
        color, share = key
        ax.set_title(
            f"{'black' if color else 'white'}, share {share + 1}\n"
            f"chi2 = {hist.chi_square:.2f}",
            fontsize=9,
        )
        ax.set_xlabel("block pattern", fontsize=8)
        ax.tick_params(labelsize=7)
    axes[0, 0].set_ylabel("count", fontsize=8)
    _save(fig, path)
