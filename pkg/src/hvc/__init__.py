"""Visual cryptography shares carried by Burch computer-generated holograms."""

from hvc.errors import FormatError
from hvc.vc_core import (
    NS_2X2,
    ContrastReport,
    PatternHistogram,
    ShareSet,
    VcScheme,
    expand_pixel,
    generate_shares,
    get_scheme,
    measure_contrast,
    share_pattern_histogram,
    stack_shares,
)
from hvc.numerics import crop_center, dft2_centered, idft2_centered, zero_pad_center
from hvc.cgh import CghParams, Hologram, burch_encode, quantize_hologram, share_to_object_field
from hvc.reconstruction import (
    ReconstructionResult,
    binarize,
    extract_order,
    normalize_intensity,
    reconstruct,
    reconstruct_field,
    superpose,
)

__version__ = "0.1.0"

__all__ = [
    "FormatError",
    "NS_2X2",
    "ContrastReport",
    "PatternHistogram",
    "ShareSet",
    "VcScheme",
    "expand_pixel",
    "generate_shares",
    "get_scheme",
    "measure_contrast",
    "share_pattern_histogram",
    "stack_shares",
    "crop_center",
    "dft2_centered",
    "idft2_centered",
    "zero_pad_center",
    "CghParams",
    "Hologram",
    "burch_encode",
    "quantize_hologram",
    "share_to_object_field",
    "ReconstructionResult",
    "binarize",
    "extract_order",
    "normalize_intensity",
    "reconstruct",
    "reconstruct_field",
    "superpose",
]
