from collections.abc import Hashable
from pathlib import Path
from typing import Any, TypeVar

import numpy as np


def as_list(value: Any) -> Any:
    """Accept a lone scalar where a list is expected"""
    if isinstance(value, list | tuple):
        return list(value)
    return [value]


def channel_ladder(widths: list[int]) -> list[int]:
    if len(widths) != 4:
        msg = "Expected four stage widths, for example '256,512,1024,2048'."
        raise ValueError(msg)
    return widths


def dilation_rates(rates: list[int]) -> list[int]:
    if not rates:
        msg = "Expected at least one dilation rate, for example '3,6,12,18,24'."
        raise ValueError(msg)
    if any(rate < 1 for rate in rates):
        msg = "Dilation rates must be strictly positive."
        raise ValueError(msg)
    return unique_list(rates)


def epsilon(value: float) -> float:
    if not 1e-7 <= value <= 1e-4:
        msg = "Expected finite-difference step in the range [1e-7, 1e-4]."
        raise ValueError(msg)
    return value


def image_shape(shape: list[int]) -> list[int]:
    if len(shape) != 4:
        msg = "Expected an NCHW shape with four entries, for example '1,3,128,128'."
        raise ValueError(msg)
    n, c, h, w = shape
    if n < 1 or c != 3:
        msg = "Expected at least one image with three channels."
        raise ValueError(msg)
    if h % 32 or w % 32 or h < 32 or w < 32:
        msg = "Image height and width must be positive multiples of 32."
        raise ValueError(msg)
    return shape


def output_directory(path: Path) -> Path:
    if path.exists() and not path.is_dir():
        msg = f"Expected a directory for artefacts but '{path}' is a file."
        raise ValueError(msg)
    return path


def seed(value: int) -> int:
    if not 0 <= value < 2**32:
        msg = "Expected a seed between 0 and 2**32 - 1."
        raise ValueError(msg)
    return value


def tolerance(value: float) -> float:
    if not (np.isfinite(value) and value > 0):
        msg = "Expected a positive finite tolerance."
        raise ValueError(msg)
    return value


TH = TypeVar("TH", bound=Hashable)


def unique_list(items: list[TH]) -> list[TH]:
    if len(items) != len(set(items)):
        msg = "All items must be unique."
        raise ValueError(msg)
    return items
