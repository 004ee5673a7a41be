import numpy as np
import pytest

from context_pyramid.config import InputConfig
from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.pyramid import load_input, synthetic_image
from context_pyramid.serialisers import write_pgm
from context_pyramid.types import InputDistribution, InputKind, Precision


class TestSyntheticImage:
    def test_seeded(self):
        first = synthetic_image([1, 3, 32, 32], InputDistribution.NORMAL, 7)
        second = synthetic_image([1, 3, 32, 32], InputDistribution.NORMAL, 7)
        assert first.dtype == np.float32
        assert np.array_equal(first, second)

    def test_seed_changes_image(self):
        first = synthetic_image([1, 3, 32, 32], InputDistribution.UNIFORM, 1)
        second = synthetic_image([1, 3, 32, 32], InputDistribution.UNIFORM, 2)
        assert not np.array_equal(first, second)
        assert first.min() >= 0.0
        assert first.max() < 1.0

    def test_zeros(self):
        image = synthetic_image(
            [2, 3, 64, 32], InputDistribution.ZEROS, 0, Precision.DOUBLE
        )
        assert image.shape == (2, 3, 64, 32)
        assert image.dtype == np.float64
        assert not image.any()


class TestLoadInput:
    def test_synthetic(self):
        config = InputConfig(shape=[1, 3, 64, 64], distribution=InputDistribution.ZEROS)
        image = load_input(config, 0, Precision.SINGLE)
        assert image.shape == (1, 3, 64, 64)

    def test_graymap(self, tmp_path):
        pixels = np.full((32, 64), 51, dtype=np.uint8)
        write_pgm(tmp_path / "input.pgm", pixels)
        config = InputConfig(kind=InputKind.FILE, path=tmp_path / "input.pgm")
        image = load_input(config, 0, Precision.DOUBLE)
        assert image.shape == (1, 3, 32, 64)
        assert np.allclose(image, 0.2)

    def test_graymap_not_divisible(self, tmp_path):
        write_pgm(tmp_path / "input.pgm", np.zeros((32, 40), dtype=np.uint8))
        config = InputConfig(kind=InputKind.FILE, path=tmp_path / "input.pgm")
        with pytest.raises(ContextPyramidShapeError, match="divisible by 32"):
            load_input(config, 0, Precision.SINGLE)
