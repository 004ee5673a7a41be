from collections.abc import Hashable
from typing import Annotated, TypeAlias, TypeVar

from annotated_types import Gt
from pydantic.functional_validators import AfterValidator, BeforeValidator

from context_pyramid import validators

ChannelWidth = Annotated[int, Gt(0)]
DilationRates = Annotated[
    list[int],
    BeforeValidator(validators.as_list),
    AfterValidator(validators.dilation_rates),
]
Epsilon = Annotated[float, AfterValidator(validators.epsilon)]
ImageShape = Annotated[list[int], AfterValidator(validators.image_shape)]
Seed = Annotated[int, AfterValidator(validators.seed)]
StageWidths = Annotated[
    list[ChannelWidth], AfterValidator(validators.channel_ladder)
]
Tolerance = Annotated[float, AfterValidator(validators.tolerance)]
TH = TypeVar("TH", bound=Hashable)
# mypy doesn't support PEP695 type statements
UniqueList: TypeAlias = Annotated[  # noqa:UP040
    list[TH],
    BeforeValidator(validators.as_list),
    AfterValidator(validators.unique_list),
]
