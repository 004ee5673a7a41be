"""Sections for use in configuration files"""

from __future__ import annotations

from pathlib import Path

from pydantic import BaseModel, PositiveInt, model_validator

from context_pyramid.types import (
    ChannelWidth,
    DilationRates,
    Epsilon,
    ImageShape,
    InputDistribution,
    InputKind,
    PyramidLevel,
    StageWidths,
    Tolerance,
    UniqueList,
)


def _scaled(width: int, divisor: int) -> int:
    return max(1, width // divisor)


class CemConfig(BaseModel, validate_assignment=True, extra="forbid"):
    """Paths, dilation rates and widths of the context extraction module"""

    rates: DilationRates = [3, 6, 12, 18, 24]
    in_channels: ChannelWidth = 2048
    mid_channels: ChannelWidth = 512
    path_channels: ChannelWidth = 256
    out_channels: ChannelWidth = 256
    use_deformable: bool = True
    use_dense: bool = True

    @property
    def paths(self) -> int:
        return len(self.rates)

    def scaled(self, divisor: int) -> CemConfig:
        return self.model_copy(
            update={
                "in_channels": _scaled(self.in_channels, divisor),
                "mid_channels": _scaled(self.mid_channels, divisor),
                "path_channels": _scaled(self.path_channels, divisor),
                "out_channels": _scaled(self.out_channels, divisor),
            }
        )


class AttentionConfig(BaseModel, validate_assignment=True, extra="forbid"):
    cxam: bool = True
    cnam: bool = True
    cxam_channels: ChannelWidth = 128
    cnam_channels: ChannelWidth = 256

    @property
    def enabled(self) -> bool:
        return self.cxam or self.cnam

    def scaled(self, divisor: int) -> AttentionConfig:
        return self.model_copy(
            update={
                "cxam_channels": _scaled(self.cxam_channels, divisor),
                "cnam_channels": _scaled(self.cnam_channels, divisor),
            }
        )


class BackboneConfig(BaseModel, validate_assignment=True, extra="forbid"):
    stem_channels: ChannelWidth = 64
    stage_channels: StageWidths = [256, 512, 1024, 2048]

    def scaled(self, divisor: int) -> BackboneConfig:
        return self.model_copy(
            update={
                "stem_channels": _scaled(self.stem_channels, divisor),
                "stage_channels": [
                    _scaled(width, divisor) for width in self.stage_channels
                ],
            }
        )


class PyramidConfig(BaseModel, validate_assignment=True, extra="forbid"):
    lateral_channels: ChannelWidth = 256
    levels: UniqueList[PyramidLevel] = list(PyramidLevel)

    def scaled(self, divisor: int) -> PyramidConfig:
        return self.model_copy(
            update={"lateral_channels": _scaled(self.lateral_channels, divisor)}
        )


class InputConfig(BaseModel, validate_assignment=True, extra="forbid"):
    """Either a synthetic image of a given shape or a PGM/PPM file"""

    kind: InputKind = InputKind.SYNTHETIC
    shape: ImageShape = [1, 3, 128, 128]
    distribution: InputDistribution = InputDistribution.NORMAL
    path: Path | None = None

    @model_validator(mode="after")
    def check_path(self) -> InputConfig:
        if self.kind == InputKind.FILE and self.path is None:
            msg = "A file input needs 'path' to be set."
            raise ValueError(msg)
        return self


class OutputConfig(BaseModel, validate_assignment=True, extra="forbid"):
    directory: Path | None = None
    dump_tensors: bool = False


class GradcheckConfig(BaseModel, validate_assignment=True, extra="forbid"):
    epsilon: Epsilon = 1e-6
    max_samples: PositiveInt | None = 8
    tolerance: Tolerance = 1e-5
    loose_tolerance: Tolerance = 1e-4
