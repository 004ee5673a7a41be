import struct

import numpy as np
import pytest

from context_pyramid.exceptions import ContextPyramidInputOutputError
from context_pyramid.serialisers import (
    decode_tensor,
    encode_tensor,
    read_tensor,
    write_tensor,
)


class TestEncodeTensor:
    def test_header(self):
        data = encode_tensor(np.zeros((1, 2, 3, 4)))
        assert data[:4] == b"ACFT"
        assert struct.unpack("<4I", data[4:20]) == (1, 2, 3, 4)
        assert len(data) == 20 + 24 * 4

    def test_little_endian_single_precision(self):
        data = encode_tensor(np.full((1, 1, 1, 1), 1.5, dtype=np.float64))
        assert data[20:] == struct.pack("<f", 1.5)


class TestDecodeTensor:
    def test_decode(self, rng):
        tensor = rng.standard_normal((1, 3, 2, 2)).astype(np.float32)
        decoded = decode_tensor(encode_tensor(tensor))
        assert decoded.dtype == np.float32
        assert np.array_equal(decoded, tensor)

    @pytest.mark.parametrize(
        "data,message",
        [
            (b"ACFT", "shorter than its header"),
            (b"XXXX" + struct.pack("<4I", 1, 1, 1, 1) + bytes(4), "found b'XXXX'"),
            (b"ACFT" + struct.pack("<4I", 1, 1, 1, 2) + bytes(4), "needs 8 data bytes"),
        ],
    )
    def test_malformed(self, data, message):
        with pytest.raises(ContextPyramidInputOutputError, match=message):
            decode_tensor(data)


class TestTensorFiles:
    def test_write_then_read(self, tmp_path):
        tensor = np.arange(8, dtype=np.float32).reshape(1, 2, 2, 2)
        write_tensor(tmp_path / "dumps" / "p2.acft", tensor)
        assert np.array_equal(read_tensor(tmp_path / "dumps" / "p2.acft"), tensor)

    def test_missing(self, tmp_path):
        with pytest.raises(ContextPyramidInputOutputError, match="Could not read"):
            read_tensor(tmp_path / "p2.acft")
