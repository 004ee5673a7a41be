import numpy as np
import pytest

from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.ops import (
    global_avg_pool,
    global_avg_pool_backward,
    grad_check,
    max_pool2d,
    max_pool2d_backward,
)


class TestMaxPool2d:
    def test_two_by_two(self):
        x = np.array([1.0, 2.0, 3.0, 4.0]).reshape(1, 1, 2, 2)
        assert max_pool2d(x, (2, 2), (2, 2)).tolist() == [[[[4.0]]]]

    def test_constant(self):
        x = np.full((1, 2, 6, 6), 3.5, dtype=np.float32)
        out = max_pool2d(x, (2, 2), (2, 2))
        assert out.shape == (1, 2, 3, 3)
        assert out.dtype == np.float32
        assert np.all(out == 3.5)

    def test_against_oracle(self, rng):
        x = rng.standard_normal((1, 3, 8, 8))
        expected = x.reshape(1, 3, 4, 2, 4, 2).max(axis=(3, 5))
        assert np.array_equal(max_pool2d(x, (2, 2), (2, 2)), expected)

    def test_kernel_one_stride_two(self, rng):
        x = rng.standard_normal((1, 2, 4, 4))
        assert np.array_equal(max_pool2d(x, (1, 1), (2, 2)), x[:, :, ::2, ::2])

    def test_padding_never_wins(self):
        x = np.full((1, 1, 2, 2), -5.0)
        out = max_pool2d(x, (3, 3), (1, 1), (1, 1))
        assert np.all(out == -5.0)

    def test_empty(self):
        with pytest.raises(ContextPyramidShapeError, match="non-empty spatial"):
            max_pool2d(np.zeros((1, 1, 0, 4)), (2, 2), (2, 2))


class TestMaxPool2dBackward:
    def test_routes_to_first_maximum(self):
        x = np.ones((1, 1, 2, 2))
        result = max_pool2d_backward(x, (2, 2), (2, 2), np.full((1, 1, 1, 1), 7.0))
        assert result.grads["input"].tolist() == [[[[7.0, 0.0], [0.0, 0.0]]]]

    def test_routes_to_maximum(self):
        x = np.array([1.0, 9.0, 3.0, 4.0]).reshape(1, 1, 2, 2)
        result = max_pool2d_backward(x, (2, 2), (2, 2), np.ones((1, 1, 1, 1)))
        assert result.grads["input"].tolist() == [[[[0.0, 1.0], [0.0, 0.0]]]]

    def test_overlapping_windows_accumulate(self):
        x = np.array([0.0, 5.0, 0.0]).reshape(1, 1, 1, 3)
        result = max_pool2d_backward(x, (1, 2), (1, 1), np.ones((1, 1, 1, 2)))
        assert result.grads["input"].tolist() == [[[[0.0, 2.0, 0.0]]]]

    def test_grad_check(self, rng):
        inputs = {"input": rng.standard_normal((1, 3, 8, 8))}
        error = grad_check(
            "max_pool2d", inputs, options={"kernel": (2, 2), "stride": (2, 2)}
        )
        assert error <= 1e-5


class TestGlobalAvgPool:
    def test_shape(self):
        out = global_avg_pool(np.zeros((1, 2048, 16, 16), dtype=np.float32))
        assert out.shape == (1, 2048, 1, 1)

    def test_constant(self):
        assert np.allclose(global_avg_pool(np.full((2, 3, 5, 4), -1.25)), -1.25)

    def test_mean(self):
        x = np.array([1.0, 2.0, 3.0, 4.0]).reshape(1, 1, 2, 2)
        assert global_avg_pool(x).item() == 2.5

    def test_empty(self):
        with pytest.raises(ContextPyramidShapeError, match="non-empty spatial"):
            global_avg_pool(np.zeros((1, 1, 3, 0)))

    def test_backward_spreads_evenly(self):
        result = global_avg_pool_backward(np.zeros((1, 2, 2, 2)), np.ones((1, 2, 1, 1)))
        assert np.array_equal(result.grads["input"], np.full((1, 2, 2, 2), 0.25))

    def test_grad_check(self, rng):
        inputs = {"input": rng.standard_normal((1, 3, 4, 4))}
        assert grad_check("global_avg_pool", inputs, 1e-4) <= 1e-5
