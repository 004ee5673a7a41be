"""Binary portable graymap (P5) and pixmap (P6) images"""

from pathlib import Path

import numpy as np

from context_pyramid.exceptions import ContextPyramidInputOutputError
from context_pyramid.types import PathType

MAGIC_GRAYMAP = b"P5"
MAGIC_PIXMAP = b"P6"


def _header_tokens(data: bytes, count: int) -> tuple[list[int], int]:
    """Read `count` whitespace-separated integers after the magic, skipping comments"""
    tokens: list[int] = []
    position = 2
    while len(tokens) < count:
        while position < len(data) and data[position : position + 1].isspace():
            position += 1
        if position >= len(data):
            msg = "Image header ended unexpectedly."
            raise ContextPyramidInputOutputError(msg)
        if data[position : position + 1] == b"#":
            end = data.find(b"\n", position)
            position = len(data) if end < 0 else end + 1
            continue
        start = position
        while position < len(data) and data[position : position + 1].isdigit():
            position += 1
        if start == position:
            msg = f"Unexpected byte {data[start:start + 1]!r} in image header."
            raise ContextPyramidInputOutputError(msg)
        tokens.append(int(data[start:position]))
    # Exactly one whitespace byte separates the header from the raster
    return tokens, position + 1


def decode_netpbm(data: bytes) -> np.ndarray:
    """
    Decode a binary PGM or PPM image.

    Returns:
        unsigned integer pixels of shape (channels, height, width)

    Raises:
        ContextPyramidInputOutputError: if the data is not a well-formed P5 or P6 image
    """
    magic = data[:2]
    if magic not in (MAGIC_GRAYMAP, MAGIC_PIXMAP):
        msg = f"Expected a binary PGM (P5) or PPM (P6) image, found magic {magic!r}."
        raise ContextPyramidInputOutputError(msg)
    (width, height, maxval), offset = _header_tokens(data, 3)
    if not 0 < maxval < 2**16:
        msg = f"Image maximum value {maxval} is outside the range 1 to 65535."
        raise ContextPyramidInputOutputError(msg)
    channels = 1 if magic == MAGIC_GRAYMAP else 3
    dtype = np.dtype(np.uint8) if maxval < 256 else np.dtype(">u2")
    expected = width * height * channels * dtype.itemsize
    raster = data[offset : offset + expected]
    if len(raster) != expected:
        msg = f"Image raster has {len(raster)} bytes, expected {expected}."
        raise ContextPyramidInputOutputError(msg)
    pixels = np.frombuffer(raster, dtype=dtype).reshape(height, width, channels)
    if np.any(pixels > maxval):
        msg = f"Image contains pixel values above its declared maximum {maxval}."
        raise ContextPyramidInputOutputError(msg)
    return pixels.transpose(2, 0, 1).astype(np.uint16 if maxval > 255 else np.uint8)


def read_netpbm(path: PathType) -> tuple[np.ndarray, int]:
    """Read a P5 or P6 file, returning (channels, height, width) pixels and maxval"""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        msg = f"Could not read image file {path}."
        raise ContextPyramidInputOutputError(msg) from exc
    pixels = decode_netpbm(data)
    (_, _, maxval), _ = _header_tokens(data, 3)
    return pixels, maxval


def read_image(path: PathType) -> np.ndarray:
    """
    Read a P5 or P6 image as three channels scaled to [0, 1].

    Graymaps are replicated across the three channels.
    """
    pixels, maxval = read_netpbm(path)
    scaled = pixels.astype(np.float64) / maxval
    if scaled.shape[0] == 1:
        scaled = np.repeat(scaled, 3, axis=0)
    return scaled


def write_pgm(path: PathType, pixels: np.ndarray) -> None:
    """Write an (height, width) array of 8-bit values as a binary P5 graymap"""
    if pixels.ndim != 2 or pixels.dtype != np.uint8:
        msg = f"Graymaps are written from 2-d uint8 arrays, got {pixels.dtype} of shape {pixels.shape}."
        raise ContextPyramidInputOutputError(msg)
    height, width = pixels.shape
    header = b"%s\n%d %d\n255\n" % (MAGIC_GRAYMAP, width, height)
    output = Path(path)
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_bytes(header + np.ascontiguousarray(pixels).tobytes())


def read_pgm(path: PathType) -> np.ndarray:
    """Read a binary P5 graymap as an (height, width) array"""
    pixels, _ = read_netpbm(path)
    if pixels.shape[0] != 1:
        msg = f"Expected a graymap but {path} has {pixels.shape[0]} channels."
        raise ContextPyramidInputOutputError(msg)
    return pixels[0]


def to_graymap(values: np.ndarray) -> np.ndarray:
    """
    Min-max normalise a 2-d map to 8-bit levels.

    A constant map has no range and is written as all zeros.
    """
    low = float(values.min()) if values.size else 0.0
    high = float(values.max()) if values.size else 0.0
    if high <= low:
        return np.zeros(values.shape, dtype=np.uint8)
    scaled = (values.astype(np.float64) - low) / (high - low)
    return np.rint(scaled * 255.0).astype(np.uint8)
