"""Configuration for a single invocation of the command line tools"""

from __future__ import annotations

from typing import ClassVar

from pydantic import BaseModel, model_validator

from context_pyramid.serialisers import ConfigSerialisableModel
from context_pyramid.types import Precision, Seed

from .config_sections import (
    AttentionConfig,
    BackboneConfig,
    CemConfig,
    GradcheckConfig,
    InputConfig,
    OutputConfig,
    PyramidConfig,
)


def check_network_widths(
    backbone: BackboneConfig, cem: CemConfig, pyramid: PyramidConfig
) -> None:
    if cem.in_channels != backbone.stage_channels[-1]:
        msg = f"CEM input width {cem.in_channels} must equal the last backbone stage width {backbone.stage_channels[-1]}."
        raise ValueError(msg)
    if pyramid.lateral_channels != cem.out_channels:
        msg = f"Pyramid lateral width {pyramid.lateral_channels} must equal the CEM output width {cem.out_channels}."
        raise ValueError(msg)


class NetworkConfig(BaseModel, validate_assignment=True, extra="forbid"):
    """Everything needed to build the pyramid network graph"""

    backbone: BackboneConfig = BackboneConfig()
    cem: CemConfig = CemConfig()
    attention: AttentionConfig = AttentionConfig()
    pyramid: PyramidConfig = PyramidConfig()

    @model_validator(mode="after")
    def check_widths(self) -> NetworkConfig:
        check_network_widths(self.backbone, self.cem, self.pyramid)
        return self

    def scaled(self, divisor: int) -> NetworkConfig:
        """The same architecture with every channel width divided by `divisor`"""
        return NetworkConfig(
            backbone=self.backbone.scaled(divisor),
            cem=self.cem.scaled(divisor),
            attention=self.attention.scaled(divisor),
            pyramid=self.pyramid.scaled(divisor),
        )


class RunConfig(ConfigSerialisableModel):
    """Serialisable config for the acfpn command line tools"""

    config_type: ClassVar[str] = "RunConfig"

    seed: Seed = 0
    precision: Precision = Precision.SINGLE
    backbone: BackboneConfig = BackboneConfig()
    cem: CemConfig = CemConfig()
    attention: AttentionConfig = AttentionConfig()
    pyramid: PyramidConfig = PyramidConfig()
    input: InputConfig = InputConfig()  # noqa: A003
    output: OutputConfig = OutputConfig()
    gradcheck: GradcheckConfig = GradcheckConfig()

    @model_validator(mode="after")
    def check_widths(self) -> RunConfig:
        check_network_widths(self.backbone, self.cem, self.pyramid)
        return self

    @property
    def network(self) -> NetworkConfig:
        return NetworkConfig(
            backbone=self.backbone,
            cem=self.cem,
            attention=self.attention,
            pyramid=self.pyramid,
        )

    @property
    def precision_is_explicit(self) -> bool:
        """Whether precision was set by the user rather than defaulted"""
        return "precision" in self.model_fields_set

    @classmethod
    def template(cls) -> RunConfig:
        return cls()
