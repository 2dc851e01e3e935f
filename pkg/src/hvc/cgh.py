"""Burch off-axis amplitude holograms of visual cryptography shares."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from hvc.numerics import dft2_centered, zero_pad_center
from hvc.vc_core import MAX_SEED, as_binary_image

CARRIER_AXES = ("horizontal", "vertical")
DIFFUSERS = ("off", "random_phase")


@dataclass(frozen=True)
class CghParams:
    """Hologram synthesis settings.

    The hologram grid is ``pad_factor`` times the share grid. The carrier is
    given in cycles per hologram sample, so the replayed orders sit
    ``round(carrier_cycles * N)`` samples from the DC term, N being the
    hologram size along ``carrier_axis``.
    """

    pad_factor: int = 4
    carrier_cycles: float = 0.25
    carrier_axis: str = "horizontal"
    diffuser: str = "off"
    diffuser_seed: int = 0

    def __post_init__(self):
        if int(self.pad_factor) != self.pad_factor or self.pad_factor < 2:
            raise ValueError(f"pad_factor must be an integer >= 2, got {self.pad_factor!r}")
        if not 0.0 < self.carrier_cycles < 0.5:
            raise ValueError(f"carrier_cycles must lie in (0, 0.5), got {self.carrier_cycles!r}")
        if self.carrier_axis not in CARRIER_AXES:
            raise ValueError(f"carrier_axis must be one of {CARRIER_AXES}, got {self.carrier_axis!r}")
        if self.diffuser not in DIFFUSERS:
            raise ValueError(f"diffuser must be one of {DIFFUSERS}, got {self.diffuser!r}")
        if not 0 <= int(self.diffuser_seed) < MAX_SEED:
            raise ValueError("diffuser_seed must be in [0, 2**64)")

    @property
    def axis(self) -> int:
        """Array axis the carrier runs along (1 = columns, 0 = rows)."""
        return 1 if self.carrier_axis == "horizontal" else 0

    def hologram_shape(self, share_shape) -> tuple[int, int]:
        return share_shape[0] * self.pad_factor, share_shape[1] * self.pad_factor

    def order_offset(self, hologram_shape) -> int:
        return int(round(self.carrier_cycles * hologram_shape[self.axis]))

    def check_order_separation(self, share_shape):
        """Raise unless the +-1 orders clear the DC term and stay inside the grid."""
        s = max(share_shape)
        n = self.pad_factor * s
        shift = self.carrier_cycles * n
        if not (shift > s / 2 and shift + s / 2 <= n / 2):
            raise ValueError(
                f"carrier {self.carrier_cycles} with pad_factor {self.pad_factor} does not "
                f"separate the orders of a {share_shape[1]}x{share_shape[0]} share: need "
                f"{s / 2} < carrier*N={shift:g} <= {n / 2 - s / 2}"
            )


@dataclass(frozen=True, eq=False)
class Hologram:
    values: np.ndarray = field(repr=False)
    params: CghParams
    share_width: int
    share_height: int
    spectrum_max: float

    def __post_init__(self):
        if np.iscomplexobj(self.values):
            raise ValueError("hologram values must be real")
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError("hologram values must be 2-D")
        if not np.all((values >= 0.0) & (values <= 1.0)):
            raise ValueError("hologram values must lie in [0, 1]")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def offset(self) -> int:
        return self.params.order_offset(self.values.shape)

    def __eq__(self, other):
        if not isinstance(other, Hologram):
            return NotImplemented
        return (
            self.params == other.params
            and self.share_width == other.share_width
            and self.share_height == other.share_height
            and self.spectrum_max == other.spectrum_max
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None


def share_to_object_field(share, params: CghParams = CghParams()) -> np.ndarray:
    """Object wave of a share: transmittance ``1 - pixel``, optional random phase, centred padding."""
    share = as_binary_image(share, "share")
    g = (1 - share).astype(np.complex128)
    if params.diffuser == "random_phase":
        rng = np.random.default_rng(np.random.SeedSequence(int(params.diffuser_seed)))
        g = g * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=g.shape))
    else:
        g = g.real
    h, w = params.hologram_shape(share.shape)
    return zero_pad_center(g, w, h)


def burch_encode(object_field, params: CghParams = CghParams(), share_shape=None) -> Hologram:
    """Encode the spectrum of ``object_field`` as ``(1 + A cos(2 pi c t + phi)) / 2``.

    ``A`` is the spectrum magnitude normalized by its global maximum, ``phi``
    its phase and ``t`` the centred sample index along the carrier axis.
    ``share_shape`` defaults to the object grid divided by ``pad_factor``.
    """
    obj = np.asarray(object_field)
    if obj.ndim != 2:
        raise ValueError("object field must be 2-D")
    if share_shape is None:
        if obj.shape[0] % params.pad_factor or obj.shape[1] % params.pad_factor:
            raise ValueError(
                f"object grid {obj.shape} is not a multiple of pad_factor {params.pad_factor}"
            )
        share_shape = (obj.shape[0] // params.pad_factor, obj.shape[1] // params.pad_factor)
    if obj.shape != params.hologram_shape(share_shape):
        raise ValueError(
            f"object grid {obj.shape} does not match padded share grid "
            f"{params.hologram_shape(share_shape)}"
        )
    params.check_order_separation(share_shape)

    spectrum = dft2_centered(obj)
    magnitude = np.abs(spectrum)
    spectrum_max = float(magnitude.max())
    amplitude = magnitude / spectrum_max if spectrum_max > 0 else np.zeros_like(magnitude)
    phase = np.angle(spectrum)

    size = obj.shape[params.axis]
    t = np.arange(size) - size // 2
    t = t[None, :] if params.axis == 1 else t[:, None]
    values = 0.5 * (1.0 + amplitude * np.cos(2.0 * np.pi * params.carrier_cycles * t + phase))
    # Rounding can nudge |A cos| a hair past 1.
    np.clip(values, 0.0, 1.0, out=values)
    return Hologram(
        values=values,
        params=params,
        share_width=int(share_shape[1]),
        share_height=int(share_shape[0]),
        spectrum_max=spectrum_max,
    )


def encode_share(share, params: CghParams = CghParams()) -> Hologram:
    share = as_binary_image(share, "share")
    return burch_encode(share_to_object_field(share, params), params, share.shape)


def quantize_hologram(h: Hologram, bits: int) -> Hologram:
    """Round transmittance to ``bits`` of depth, as a printer or display would."""
    if bits not in (8, 16):
        raise ValueError(f"bits must be 8 or 16, got {bits!r}")
    levels = float(2**bits - 1)
    # Round half up, so 0.5 -> 128/255 at 8 bits.
    return replace(h, values=np.floor(h.values * levels + 0.5) / levels)
