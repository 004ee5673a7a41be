from .config_serialisable_model import ConfigSerialisableModel
from .portable_graymap import (
    decode_netpbm,
    read_image,
    read_netpbm,
    read_pgm,
    to_graymap,
    write_pgm,
)
from .tensor_dump import decode_tensor, encode_tensor, read_tensor, write_tensor

__all__ = [
    "ConfigSerialisableModel",
    "decode_netpbm",
    "decode_tensor",
    "encode_tensor",
    "read_image",
    "read_netpbm",
    "read_pgm",
    "read_tensor",
    "to_graymap",
    "write_pgm",
    "write_tensor",
]
