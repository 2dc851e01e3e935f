"""
Bit-exact file formats: binary PGM (P5), HVCF holograms, scheme files and the
run manifest.

Scheme file (UTF-8 text, ``#`` comments and blank lines ignored)::

    name=ns-2x2
    block_rows=2
    block_cols=2
    s0=1,1,0,0;1,1,0,0
    s1=1,1,0,0;0,0,1,1

Rows of a basis matrix are comma-separated 0/1 lists joined by ``;``. ``n``
and ``m`` may be given and are then checked against the matrices.

Manifest: one ``key=value`` per line, LF endings, keys always written in
``MANIFEST_KEYS`` order. File lists are comma-separated names relative to
the manifest's directory. Share ``i`` uses diffuser seed ``diffuser_seed + i``.
"""

from __future__ import annotations

import os
import re
import struct
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from hvc.cgh import CARRIER_AXES, DIFFUSERS, CghParams, Hologram
from hvc.errors import FormatError
from hvc.vc_core import VcScheme, as_binary_image

HVCF_MAGIC = b"HVCF"
HVCF_VERSION = 1
_HVCF_HEADER = struct.Struct("<4sHIIIIdBHd")

MANIFEST_VERSION = 1


def atomic_write_bytes(path, data: bytes):
    """Write through a temp file in the target directory, then rename over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --------------------------------------------------------------------- PGM


def _pgm_header(data: bytes):
    """Parse the P5 header; returns (width, height, maxval, payload offset)."""
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < 4:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos >= n:
            raise FormatError("truncated PGM header")
        if data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        tokens.append(data[start:pos])
    # Exactly one whitespace byte separates maxval from the raster.
    if pos >= n or not data[pos : pos + 1].isspace():
        raise FormatError("missing whitespace after PGM maxval")
    pos += 1
    if tokens[0] != b"P5":
        raise FormatError(f"not a binary PGM (magic {tokens[0]!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise FormatError(f"malformed PGM header fields {tokens[1:]!r}") from None
    if width < 1 or height < 1:
        raise FormatError(f"PGM dimensions must be positive, got {width}x{height}")
    if maxval not in (255, 65535):
        raise FormatError(f"unsupported PGM maxval {maxval} (need 255 or 65535)")
    return width, height, maxval, pos


def read_pgm_raw(path) -> tuple[np.ndarray, int]:
    """Gray levels of a P5 file as an integer array, plus the maxval."""
    data = Path(path).read_bytes()
    width, height, maxval, offset = _pgm_header(data)
    dtype = np.dtype(">u2") if maxval == 65535 else np.dtype("u1")
    expected = width * height * dtype.itemsize
    payload = data[offset:]
    if len(payload) != expected:
        raise FormatError(f"PGM raster is {len(payload)} bytes, expected {expected}")
    levels = np.frombuffer(payload, dtype=dtype).reshape(height, width)
    if levels.max() > maxval:
        raise FormatError("PGM sample exceeds maxval")
    return levels.astype(np.uint16 if maxval == 65535 else np.uint8), maxval


def read_pgm(path, strict: bool = True) -> np.ndarray:
    """Read a P5 file as a binary image: level 0 is black (1), maxval is white (0).

    In strict mode intermediate grays are a format error; otherwise they are
    split at half of maxval.
    """
    levels, maxval = read_pgm_raw(path)
    if strict:
        if not np.all((levels == 0) | (levels == maxval)):
            raise FormatError("PGM holds intermediate gray levels, not a binary image")
        return (levels == 0).astype(np.uint8)
    return (levels < (maxval + 1) // 2).astype(np.uint8)


def read_pgm_gray(path) -> np.ndarray:
    """Read a P5 file as floats in [0, 1]."""
    levels, maxval = read_pgm_raw(path)
    return levels.astype(np.float64) / maxval


def _pgm_bytes(levels: np.ndarray, maxval: int) -> bytes:
    h, w = levels.shape
    header = f"P5\n{w} {h}\n{maxval}\n".encode("ascii")
    dtype = ">u2" if maxval == 65535 else "u1"
    return header + np.ascontiguousarray(levels, dtype=dtype).tobytes()


def write_pgm(image, path, maxval: int = 255):
    """Write a binary image: black (1) -> level 0, white (0) -> maxval."""
    if maxval not in (255, 65535):
        raise ValueError(f"maxval must be 255 or 65535, got {maxval}")
    img = as_binary_image(image)
    atomic_write_bytes(path, _pgm_bytes(np.where(img == 1, 0, maxval), maxval))


def write_pgm_gray(values, path, maxval: int = 65535):
    """Write floats in [0, 1] as gray levels ``floor(v * maxval + 0.5)``."""
    if maxval not in (255, 65535):
        raise ValueError(f"maxval must be 255 or 65535, got {maxval}")
    v = np.asarray(values, dtype=float)
    if v.ndim != 2 or v.size == 0:
        raise ValueError("gray image must be a non-empty 2-D array")
    if np.any(~np.isfinite(v)) or v.min() < 0.0 or v.max() > 1.0:
        raise ValueError("gray values must lie in [0, 1]")
    atomic_write_bytes(path, _pgm_bytes(np.floor(v * maxval + 0.5), maxval))


# -------------------------------------------------------------------- HVCF


def hologram_to_bytes(h: Hologram) -> bytes:
    header = _HVCF_HEADER.pack(
        HVCF_MAGIC,
        HVCF_VERSION,
        h.width,
        h.height,
        h.share_width,
        h.share_height,
        float(h.params.carrier_cycles),
        CARRIER_AXES.index(h.params.carrier_axis),
        h.params.pad_factor,
        float(h.spectrum_max),
    )
    return header + np.ascontiguousarray(h.values, dtype="<f8").tobytes()


def hologram_from_bytes(data: bytes) -> Hologram:
    if len(data) < _HVCF_HEADER.size:
        raise FormatError("truncated HVCF header")
    (magic, version, width, height, share_w, share_h, carrier, axis, pad, smax) = (
        _HVCF_HEADER.unpack_from(data)
    )
    if magic != HVCF_MAGIC:
        raise FormatError(f"bad HVCF magic {magic!r}")
    if version != HVCF_VERSION:
        raise FormatError(f"unsupported HVCF version {version}")
    if axis >= len(CARRIER_AXES):
        raise FormatError(f"bad carrier axis code {axis}")
    payload = data[_HVCF_HEADER.size :]
    if len(payload) != 8 * width * height:
        raise FormatError(f"HVCF payload is {len(payload)} bytes, expected {8 * width * height}")
    values = np.frombuffer(payload, dtype="<f8").reshape(height, width).astype(np.float64)
    try:
        params = CghParams(pad_factor=pad, carrier_cycles=carrier, carrier_axis=CARRIER_AXES[axis])
        if (height, width) != params.hologram_shape((share_h, share_w)):
            raise ValueError(
                f"hologram {width}x{height} is not pad_factor {pad} x share {share_w}x{share_h}"
            )
        return Hologram(
            values=values,
            params=params,
            share_width=share_w,
            share_height=share_h,
            spectrum_max=smax,
        )
    except ValueError as exc:
        raise FormatError(f"invalid HVCF contents: {exc}") from None


def write_hologram(h: Hologram, path):
    atomic_write_bytes(path, hologram_to_bytes(h))


def read_hologram(path) -> Hologram:
    return hologram_from_bytes(Path(path).read_bytes())


# ---------------------------------------------------------- key=value text


def _parse_key_values(text: str, source: str) -> list[tuple[str, str]]:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise FormatError(f"{source}:{lineno}: expected key=value, got {raw!r}")
        pairs.append((key.strip(), value.strip()))
    return pairs


def format_matrix(matrix) -> str:
    return ";".join(",".join(str(int(v)) for v in row) for row in np.asarray(matrix))


def parse_matrix(text: str) -> np.ndarray:
    if not re.fullmatch(r"[01](,[01])*(;[01](,[01])*)*", text):
        raise FormatError(f"bad basis matrix {text!r}")
    rows = [[int(v) for v in row.split(",")] for row in text.split(";")]
    if len({len(r) for r in rows}) != 1:
        raise FormatError(f"basis matrix rows differ in length: {text!r}")
    return np.array(rows, dtype=np.uint8)


def scheme_to_text(scheme: VcScheme) -> str:
    lines = [
        f"name={scheme.name}",
        f"n={scheme.n}",
        f"m={scheme.m}",
        f"block_rows={scheme.block_rows}",
        f"block_cols={scheme.block_cols}",
        f"s0={format_matrix(scheme.s0)}",
        f"s1={format_matrix(scheme.s1)}",
    ]
    return "\n".join(lines) + "\n"


def scheme_from_text(text: str, source: str = "<scheme>") -> VcScheme:
    known = {"name", "n", "m", "block_rows", "block_cols", "s0", "s1"}
    values = {}
    for key, value in _parse_key_values(text, source):
        if key not in known:
            raise FormatError(f"{source}: unknown key {key!r}")
        if key in values:
            raise FormatError(f"{source}: duplicate key {key!r}")
        values[key] = value
    missing = {"name", "block_rows", "block_cols", "s0", "s1"} - set(values)
    if missing:
        raise FormatError(f"{source}: missing keys {sorted(missing)}")
    try:
        scheme = VcScheme(
            name=values["name"],
            s0=parse_matrix(values["s0"]),
            s1=parse_matrix(values["s1"]),
            block_rows=int(values["block_rows"]),
            block_cols=int(values["block_cols"]),
        )
        if "n" in values and int(values["n"]) != scheme.n:
            raise ValueError(f"n={values['n']} but matrices have {scheme.n} rows")
        if "m" in values and int(values["m"]) != scheme.m:
            raise ValueError(f"m={values['m']} but matrices have {scheme.m} columns")
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(f"{source}: {exc}") from None
    return scheme


def write_scheme(scheme: VcScheme, path):
    atomic_write_bytes(path, scheme_to_text(scheme).encode("utf-8"))


def read_scheme(path) -> VcScheme:
    return scheme_from_text(Path(path).read_text(encoding="utf-8"), str(path))


# ---------------------------------------------------------------- manifest


@dataclass
class RunManifest:
    scheme: VcScheme
    seed: int
    params: CghParams
    shares: list = field(default_factory=list)
    holograms: list = field(default_factory=list)
    bits: int | None = None
    format_version: int = MANIFEST_VERSION

    def share_params(self, index: int) -> CghParams:
        """CGH settings of share ``index``; each share gets its own diffuser seed."""
        return CghParams(
            pad_factor=self.params.pad_factor,
            carrier_cycles=self.params.carrier_cycles,
            carrier_axis=self.params.carrier_axis,
            diffuser=self.params.diffuser,
            diffuser_seed=(self.params.diffuser_seed + index) % 2**64,
        )


MANIFEST_KEYS = (
    "format_version",
    "scheme",
    "n",
    "m",
    "block_rows",
    "block_cols",
    "s0",
    "s1",
    "seed",
    "pad_factor",
    "carrier_cycles",
    "carrier_axis",
    "diffuser",
    "diffuser_seed",
    "bits",
    "shares",
    "holograms",
)


def manifest_to_text(manifest: RunManifest) -> str:
    s, p = manifest.scheme, manifest.params
    values = {
        "format_version": str(manifest.format_version),
        "scheme": s.name,
        "n": str(s.n),
        "m": str(s.m),
        "block_rows": str(s.block_rows),
        "block_cols": str(s.block_cols),
        "s0": format_matrix(s.s0),
        "s1": format_matrix(s.s1),
        "seed": str(manifest.seed),
        "pad_factor": str(p.pad_factor),
        "carrier_cycles": repr(float(p.carrier_cycles)),
        "carrier_axis": p.carrier_axis,
        "diffuser": p.diffuser,
        "diffuser_seed": str(p.diffuser_seed),
        "bits": "none" if manifest.bits is None else str(manifest.bits),
        "shares": ",".join(manifest.shares),
        "holograms": ",".join(manifest.holograms),
    }
    return "".join(f"{k}={values[k]}\n" for k in MANIFEST_KEYS)


def manifest_from_text(text: str, strict: bool = True, source: str = "<manifest>") -> RunManifest:
    values = {}
    for key, value in _parse_key_values(text, source):
        if key not in MANIFEST_KEYS:
            if strict:
                raise FormatError(f"{source}: unknown key {key!r}")
            continue
        if key in values:
            raise FormatError(f"{source}: duplicate key {key!r}")
        values[key] = value
    missing = [k for k in MANIFEST_KEYS if k not in values]
    if missing:
        raise FormatError(f"{source}: missing keys {missing}")
    try:
        version = int(values["format_version"])
        if version != MANIFEST_VERSION:
            raise ValueError(f"unsupported manifest version {version}")
        scheme = VcScheme(
            name=values["scheme"],
            s0=parse_matrix(values["s0"]),
            s1=parse_matrix(values["s1"]),
            block_rows=int(values["block_rows"]),
            block_cols=int(values["block_cols"]),
        )
        if int(values["n"]) != scheme.n or int(values["m"]) != scheme.m:
            raise ValueError("n/m disagree with the basis matrices")
        if values["carrier_axis"] not in CARRIER_AXES or values["diffuser"] not in DIFFUSERS:
            raise ValueError("bad carrier_axis or diffuser")
        params = CghParams(
            pad_factor=int(values["pad_factor"]),
            carrier_cycles=float(values["carrier_cycles"]),
            carrier_axis=values["carrier_axis"],
            diffuser=values["diffuser"],
            diffuser_seed=int(values["diffuser_seed"]),
        )
        bits = None if values["bits"] == "none" else int(values["bits"])
        if bits not in (None, 8, 16):
            raise ValueError(f"bits must be none, 8 or 16, got {bits}")
        seed = int(values["seed"])
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(f"{source}: {exc}") from None
    shares = values["shares"].split(",") if values["shares"] else []
    holograms = values["holograms"].split(",") if values["holograms"] else []
    return RunManifest(
        scheme=scheme,
        seed=seed,
        params=params,
        shares=shares,
        holograms=holograms,
        bits=bits,
        format_version=version,
    )


def write_manifest(manifest: RunManifest, path):
    atomic_write_bytes(path, manifest_to_text(manifest).encode("utf-8"))


def read_manifest(path, strict: bool = True) -> RunManifest:
    return manifest_from_text(Path(path).read_text(encoding="utf-8"), strict, str(path))
