"""Image planes, file I/O and whole-image point operations.

Samples live in float64 with a nominal [0, 1] range; quantization to bytes
happens only when a file is written. PPM/PGM are parsed here directly (the
header error contract is ours), PNG goes through Pillow.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError
from scipy import ndimage

LUMA_WEIGHTS = (0.299, 0.587, 0.114)

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class FormatError(ValueError):
    """An image file (or byte stream) violates the formats this tool reads."""


@dataclass(frozen=True)
class GrayPlane:
    """Single-channel raster of float64 samples, row-major, nominal range [0, 1]."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"plane must be a non-empty 2-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("plane contains non-finite samples")
        object.__setattr__(self, "data", arr)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class RgbImage:
    """Three aligned GrayPlanes."""

    r: GrayPlane
    g: GrayPlane
    b: GrayPlane

    def __post_init__(self):
        dims = {(p.height, p.width) for p in (self.r, self.g, self.b)}
        if len(dims) != 1:
            raise ValueError(f"channel dimensions differ: {sorted(dims)}")

    @property
    def height(self) -> int:
        return self.r.height

    @property
    def width(self) -> int:
        return self.r.width

    @classmethod
    def from_planes(cls, r: np.ndarray, g: np.ndarray, b: np.ndarray) -> "RgbImage":
        return cls(GrayPlane(r), GrayPlane(g), GrayPlane(b))

    @classmethod
    def from_gray(cls, plane: GrayPlane) -> "RgbImage":
        return cls(plane, plane, plane)


@dataclass(frozen=True)
class FovMask:
    """Boolean plane; true marks pixels inside the field of view."""

    bits: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.bits, dtype=bool)
        if arr.ndim != 2:
            raise ValueError(f"mask must be 2-D, got shape {arr.shape}")
        object.__setattr__(self, "bits", arr)

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]


@dataclass(frozen=True)
class BrightnessContrast:
    brightness: float = 0.0
    contrast: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.brightness) and -1.0 <= self.brightness <= 1.0):
            raise ValueError(f"brightness must be in [-1, 1], got {self.brightness}")
        if not (math.isfinite(self.contrast) and -1.0 <= self.contrast <= 1.0):
            raise ValueError(f"contrast must be in [-1, 1], got {self.contrast}")


# ---------------------------------------------------------------------------
# decoding

def _parse_pnm_header(data: bytes):
    """Parse a P5/P6 header, honoring '#' comments, and return
    (magic, width, height, payload offset)."""
    magic = data[:2]
    pos = 2
    fields = []  # width, height, maxval
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            eol = data.find(b"\n", pos)
            if eol < 0:
                raise FormatError("PNM header ends inside a comment")
            pos = eol + 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        token = data[start:pos]
        if not token:
            raise FormatError("PNM header is truncated")
        try:
            fields.append(int(token))
        except ValueError:
            raise FormatError(f"PNM header field is not an integer: {token!r}") from None
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise FormatError("PNM header must end with a whitespace byte before the payload")
    pos += 1
    width, height, maxval = fields
    if width <= 0 or height <= 0:
        raise FormatError(f"PNM dimensions must be positive, got {width}x{height}")
    if maxval != 255:
        raise FormatError(f"unsupported PNM maxval {maxval}, only 255 is read")
    return magic, width, height, pos


def _decode_pnm(data: bytes) -> RgbImage:
    magic, width, height, pos = _parse_pnm_header(data)
    channels = 3 if magic == b"P6" else 1
    need = width * height * channels
    payload = data[pos : pos + need]
    if len(payload) < need:
        raise FormatError(
            f"PNM payload truncated: expected {need} bytes, found {len(payload)}"
        )
    arr = np.frombuffer(payload, dtype=np.uint8).astype(np.float64) / 255.0
    if channels == 3:
        arr = arr.reshape(height, width, 3)
        return RgbImage.from_planes(arr[:, :, 0], arr[:, :, 1], arr[:, :, 2])
    plane = GrayPlane(arr.reshape(height, width))
    return RgbImage.from_gray(plane)


def _decode_png(data: bytes) -> RgbImage:
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except UnidentifiedImageError:
        raise FormatError("not a decodable PNG stream") from None
    except OSError as exc:
        raise FormatError(f"broken PNG stream: {exc}") from None
    if img.mode in ("I", "I;16", "I;16B", "F"):
        raise FormatError(f"unsupported PNG bit depth (mode {img.mode}), need 8-bit")
    if img.mode == "L":
        arr = np.asarray(img, dtype=np.float64) / 255.0
        return RgbImage.from_gray(GrayPlane(arr))
    if img.mode != "RGB":
        img = img.convert("RGB")
    arr = np.asarray(img, dtype=np.float64) / 255.0
    return RgbImage.from_planes(arr[:, :, 0], arr[:, :, 1], arr[:, :, 2])


def decode_image_bytes(data: bytes) -> RgbImage:
    """Decode PPM (P6), PGM (P5) or 8-bit PNG bytes into an RgbImage.

    PGM input yields r = g = b. Samples are scaled from [0, 255] to [0, 1].
    """
    if data[:2] in (b"P6", b"P5"):
        return _decode_pnm(data)
    if data[: len(PNG_MAGIC)] == PNG_MAGIC:
        return _decode_png(data)
    raise FormatError(f"unsupported image magic {data[:2]!r}, need P6, P5 or PNG")


def load_image(path) -> RgbImage:
    """Read a PPM/PGM/PNG file. Unreadable files raise OSError, bad content FormatError."""
    return decode_image_bytes(Path(path).read_bytes())


# ---------------------------------------------------------------------------
# encoding

def quantize(plane: GrayPlane) -> np.ndarray:
    """Clamp to [0, 1] and round half up to bytes."""
    return np.floor(np.clip(plane.data, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def _stacked_bytes(image: RgbImage) -> np.ndarray:
    return np.dstack([quantize(image.r), quantize(image.g), quantize(image.b)])


def encode_png_bytes(image: RgbImage) -> bytes:
    buf = io.BytesIO()
    # low deflate level: interactive-tuning latency matters more than size
    Image.fromarray(_stacked_bytes(image), mode="RGB").save(
        buf, format="PNG", compress_level=1
    )
    return buf.getvalue()


def encode_ppm_bytes(image: RgbImage) -> bytes:
    header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + _stacked_bytes(image).tobytes()


def save_image(image: RgbImage, path) -> None:
    """Write the image; the extension picks the format (.ppm -> P6, .png -> PNG)."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".ppm":
        data = encode_ppm_bytes(image)
    elif suffix == ".png":
        data = encode_png_bytes(image)
    else:
        raise FormatError(f"unsupported output extension {suffix!r}, use .ppm or .png")
    path.write_bytes(data)


# ---------------------------------------------------------------------------
# point operations

def to_gray(image: RgbImage) -> GrayPlane:
    """Rec. 601 luma: 0.299 r + 0.587 g + 0.114 b."""
    wr, wg, wb = LUMA_WEIGHTS
    return GrayPlane(wr * image.r.data + wg * image.g.data + wb * image.b.data)


def adjust_brightness_contrast(plane: GrayPlane, bc: BrightnessContrast) -> GrayPlane:
    """Pivot-at-0.5 law: out = clamp((in - 0.5) * tan(pi (c+1)/4) + 0.5 + b)."""
    if bc.brightness == 0.0 and bc.contrast == 0.0:
        return plane  # neutral params stay a bitwise no-op
    slope = math.tan(math.pi * (bc.contrast + 1.0) / 4.0)
    out = (plane.data - 0.5) * slope + 0.5 + bc.brightness
    return GrayPlane(np.clip(out, 0.0, 1.0))


def _open_3x3(mask: np.ndarray) -> np.ndarray:
    # edge padding keeps small all-true planes all-true after the opening
    box = np.ones((3, 3), dtype=bool)
    eroded = ndimage.binary_erosion(np.pad(mask, 1, mode="edge"), box)[1:-1, 1:-1]
    return ndimage.binary_dilation(np.pad(eroded, 1, mode="edge"), box)[1:-1, 1:-1]


def detect_fov_mask(plane: GrayPlane, threshold: float = 0.08) -> FovMask:
    """Threshold the luma, then open with a 3x3 box to drop isolated speckle."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    return FovMask(_open_3x3(plane.data > threshold))


def replace_background(image: RgbImage, mask: FovMask, tone) -> RgbImage:
    """Set every pixel outside the mask to `tone`; masked pixels pass through untouched."""
    if (mask.height, mask.width) != (image.height, image.width):
        raise ValueError(
            f"mask is {mask.width}x{mask.height}, image is {image.width}x{image.height}"
        )
    tr, tg, tb = (float(c) for c in tone)
    for name, c in (("r", tr), ("g", tg), ("b", tb)):
        if not 0.0 <= c <= 1.0:
            raise ValueError(f"tone {name} must be in [0, 1], got {c}")
    planes = [
        np.where(mask.bits, chan.data, c)
        for chan, c in ((image.r, tr), (image.g, tg), (image.b, tb))
    ]
    return RgbImage.from_planes(*planes)
