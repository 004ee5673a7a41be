import numpy as np
import pytest

from context_pyramid.deform import (
    DeformConv2d,
    bilinear_sample,
    deform_conv2d,
    deform_conv2d_backward,
    sampling_positions,
)
from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.ops import ConvSpec, conv2d, conv2d_backward, grad_check


@pytest.fixture
def dilated_layer(rng):
    spec = ConvSpec.square(3, padding=2, dilation=2)
    return DeformConv2d.with_zero_offsets(
        rng.standard_normal((3, 2, 3, 3)), rng.standard_normal(3), spec
    )


class TestDeformConv2dLayer:
    def test_with_zero_offsets(self, dilated_layer):
        assert dilated_layer.offset_weight.shape == (18, 2, 3, 3)
        assert dilated_layer.offset_bias.shape == (18,)
        assert not dilated_layer.offset_weight.any()
        assert dilated_layer.offset_bias.dtype == dilated_layer.weight.dtype

    def test_offset_weight_shape(self):
        with pytest.raises(ContextPyramidShapeError, match="Offset weight"):
            DeformConv2d(
                weight=np.zeros((1, 2, 3, 3)),
                bias=np.zeros(1),
                offset_weight=np.zeros((9, 2, 3, 3)),
                offset_bias=np.zeros(9),
                spec=ConvSpec.square(3),
            )

    def test_kernel_mismatch(self):
        with pytest.raises(ContextPyramidShapeError, match="does not match"):
            DeformConv2d.with_zero_offsets(
                np.zeros((1, 2, 3, 3)), np.zeros(1), ConvSpec.square(1)
            )


class TestSamplingPositions:
    def test_regular_grid(self):
        spec = ConvSpec.square(3, padding=1)
        y, x = sampling_positions(np.zeros((1, 18, 4, 4)), spec)
        assert y.shape == (1, 9, 4, 4)
        # Tap 5 is the middle-right tap
        assert y[0, 5, 2, 3] == 2.0
        assert x[0, 5, 2, 3] == 4.0
        assert y[0, 0, 0, 0] == -1.0
        assert x[0, 0, 0, 0] == -1.0

    def test_offsets_are_added(self):
        spec = ConvSpec.square(1)
        offsets = np.zeros((1, 2, 2, 2))
        offsets[:, 0] = 0.25
        offsets[:, 1] = -1.5
        y, x = sampling_positions(offsets, spec)
        assert y[0, 0].tolist() == [[0.25, 0.25], [1.25, 1.25]]
        assert x[0, 0].tolist() == [[-1.5, -0.5], [-1.5, -0.5]]


class TestBilinearSample:
    def test_integer_position(self, rng):
        feature = rng.standard_normal((3, 4, 5))
        assert np.array_equal(bilinear_sample(feature, 2.0, 3.0), feature[:, 2, 3])

    def test_midpoint(self):
        feature = np.array([[[2.0, 6.0]]])
        assert bilinear_sample(feature, 0.0, 0.5).tolist() == [4.0]

    def test_quarter_point(self):
        feature = np.array([[[0.0, 4.0], [8.0, 12.0]]])
        assert bilinear_sample(feature, 0.5, 0.25).item() == pytest.approx(5.0)

    @pytest.mark.parametrize("position", [(-10.0, 0.0), (0.0, 50.0), (100.0, -100.0)])
    def test_outside(self, position):
        assert not bilinear_sample(np.ones((2, 3, 3)), *position).any()

    def test_border_fades_to_zero(self):
        assert bilinear_sample(np.ones((1, 2, 2)), -0.5, 0.0).item() == 0.5

    def test_rank(self):
        with pytest.raises(ContextPyramidShapeError, match=r"\(c, h, w\)"):
            bilinear_sample(np.ones((1, 1, 2, 2)), 0.0, 0.0)


class TestDeformConv2d:
    def test_zero_offsets_reduce_to_conv(self, rng, dilated_layer):
        x = rng.standard_normal((2, 2, 7, 6))
        expected = conv2d(x, dilated_layer.weight, dilated_layer.bias, dilated_layer.spec)
        out = deform_conv2d(x, dilated_layer)
        assert out.shape == expected.shape
        assert np.allclose(out, expected, rtol=0.0, atol=1e-12)

    @pytest.mark.parametrize("case", range(100))
    def test_zero_offsets_reduce_to_conv_randomised(self, request, case):
        rng = np.random.default_rng([request.config.seed, case])
        kernel = int(rng.choice([1, 3]))
        dilation = int(rng.integers(1, 4))
        spec = ConvSpec.square(
            kernel,
            stride=int(rng.integers(1, 3)),
            padding=int(rng.integers(0, 3)) * dilation,
            dilation=dilation,
        )
        ci, co = rng.integers(1, 4, size=2)
        reach = dilation * (kernel - 1) + 1
        size = rng.integers(reach, reach + 5, size=2)
        x = rng.standard_normal((int(rng.integers(1, 3)), ci, *size))
        layer = DeformConv2d.with_zero_offsets(
            rng.standard_normal((co, ci, kernel, kernel)), rng.standard_normal(co), spec
        )
        expected = conv2d(x, layer.weight, layer.bias, spec)
        assert np.allclose(deform_conv2d(x, layer), expected, rtol=0.0, atol=1e-12)

    def test_single_precision(self, rng):
        spec = ConvSpec.square(3, padding=1)
        layer = DeformConv2d.with_zero_offsets(
            rng.standard_normal((2, 2, 3, 3)).astype(np.float32),
            np.zeros(2, dtype=np.float32),
            spec,
        )
        out = deform_conv2d(np.ones((1, 2, 4, 4), dtype=np.float32), layer)
        assert out.dtype == np.float32

    def test_constant_input(self, rng):
        spec = ConvSpec.square(3, padding=1)
        layer = DeformConv2d(
            weight=rng.standard_normal((2, 2, 3, 3)),
            bias=rng.standard_normal(2),
            offset_weight=0.01 * rng.standard_normal((18, 2, 3, 3)),
            offset_bias=rng.uniform(-0.4, 0.4, size=18),
            spec=spec,
        )
        x = np.full((1, 2, 8, 8), 2.0)
        out = deform_conv2d(x, layer)
        expected = conv2d(x, layer.weight, layer.bias, spec)
        assert np.allclose(out[:, :, 2:6, 2:6], expected[:, :, 2:6, 2:6])

    def test_integer_shift(self, rng):
        offset_bias = np.array([1.0, 0.0])
        layer = DeformConv2d(
            weight=np.ones((1, 1, 1, 1)),
            bias=np.zeros(1),
            offset_weight=np.zeros((2, 1, 1, 1)),
            offset_bias=offset_bias,
            spec=ConvSpec(),
        )
        x = rng.standard_normal((1, 1, 5, 4))
        out = deform_conv2d(x, layer)
        assert np.array_equal(out[:, :, :-1], x[:, :, 1:])
        assert not out[:, :, -1].any()

    def test_channel_mismatch(self, dilated_layer):
        with pytest.raises(ContextPyramidShapeError, match="expects 2 input channels"):
            deform_conv2d(np.zeros((1, 3, 5, 5)), dilated_layer)

    def test_empty_spatial(self, dilated_layer):
        out = deform_conv2d(np.zeros((1, 2, 0, 0)), dilated_layer)
        assert out.shape == (1, 3, 0, 0)


class TestDeformConv2dBackward:
    def test_zero_upstream(self, rng, dilated_layer):
        x = rng.standard_normal((1, 2, 5, 5))
        result = deform_conv2d_backward(x, dilated_layer, np.zeros((1, 3, 5, 5)))
        assert set(result.grads) == {
            "input",
            "weight",
            "bias",
            "offset_weight",
            "offset_bias",
        }
        assert all(not grad.any() for grad in result.grads.values())

    def test_zero_offsets_match_conv(self, rng, dilated_layer):
        x = rng.standard_normal((1, 2, 5, 5))
        grad_out = rng.standard_normal((1, 3, 5, 5))
        result = deform_conv2d_backward(x, dilated_layer, grad_out)
        expected = conv2d_backward(
            x, dilated_layer.weight, dilated_layer.bias, dilated_layer.spec, grad_out
        )
        for name in ("input", "weight", "bias"):
            assert np.allclose(result.grads[name], expected.grads[name])

    def test_integer_coordinates_have_zero_offset_gradient(self, rng, dilated_layer):
        x = rng.standard_normal((1, 2, 5, 5))
        result = deform_conv2d_backward(x, dilated_layer, np.ones((1, 3, 5, 5)))
        assert not result.grads["offset_bias"].any()

    def test_empty_batch(self, dilated_layer):
        result = deform_conv2d_backward(
            np.zeros((0, 2, 5, 5)), dilated_layer, np.zeros((0, 3, 5, 5))
        )
        assert result.value.shape == (0, 3, 5, 5)
        assert result.grads["input"].shape == (0, 2, 5, 5)
        assert result.grads["offset_weight"].shape == dilated_layer.offset_weight.shape
        assert all(not grad.any() for grad in result.grads.values())

    def test_upstream_mismatch(self, rng, dilated_layer):
        with pytest.raises(ContextPyramidShapeError, match="Shape mismatch"):
            deform_conv2d_backward(
                rng.standard_normal((1, 2, 5, 5)), dilated_layer, np.ones((1, 3, 4, 4))
            )

    def test_grad_check(self, rng):
        inputs = {
            "input": rng.standard_normal((1, 2, 6, 6)),
            "weight": rng.standard_normal((2, 2, 3, 3)),
            "bias": rng.standard_normal(2),
            "offset_weight": 0.005 * rng.standard_normal((18, 2, 3, 3)),
            "offset_bias": rng.uniform(0.2, 0.4, size=18),
        }
        error = grad_check(
            "deform_conv2d",
            inputs,
            options={"spec": ConvSpec.square(3, padding=2, dilation=2)},
        )
        assert error <= 1e-4
