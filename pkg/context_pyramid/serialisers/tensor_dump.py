"""Raw tensor dumps: 'ACFT' magic, four little-endian uint32 dimensions, float32 data"""

import struct
from pathlib import Path

import numpy as np

from context_pyramid.exceptions import ContextPyramidInputOutputError
from context_pyramid.ops.tensor import check_tensor
from context_pyramid.types import PathType, Tensor

MAGIC = b"ACFT"
HEADER = struct.Struct("<4s4I")


def encode_tensor(tensor: Tensor) -> bytes:
    check_tensor(tensor, "tensor")
    data = np.ascontiguousarray(tensor, dtype="<f4")
    return HEADER.pack(MAGIC, *tensor.shape) + data.tobytes()


def decode_tensor(data: bytes) -> Tensor:
    """
    Decode a raw tensor dump into a single precision NCHW array.

    Raises:
        ContextPyramidInputOutputError: if the header or payload is malformed
    """
    if len(data) < HEADER.size:
        msg = f"Tensor dump of {len(data)} bytes is shorter than its header."
        raise ContextPyramidInputOutputError(msg)
    magic, *shape = HEADER.unpack_from(data)
    if magic != MAGIC:
        msg = f"Expected tensor dump magic {MAGIC!r}, found {magic!r}."
        raise ContextPyramidInputOutputError(msg)
    payload = data[HEADER.size :]
    expected = int(np.prod(shape)) * 4
    if len(payload) != expected:
        msg = f"Tensor dump of shape {tuple(shape)} needs {expected} data bytes, found {len(payload)}."
        raise ContextPyramidInputOutputError(msg)
    return np.frombuffer(payload, dtype="<f4").astype(np.float32).reshape(shape)


def write_tensor(path: PathType, tensor: Tensor) -> None:
    output = Path(path)
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_bytes(encode_tensor(tensor))


def read_tensor(path: PathType) -> Tensor:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        msg = f"Could not read tensor dump {path}."
        raise ContextPyramidInputOutputError(msg) from exc
    return decode_tensor(data)
