"""A pydantic BaseModel that can be serialised to and from key-value or YAML text"""

from pathlib import Path
from typing import Any, ClassVar, TypeVar

import yaml
from pydantic import BaseModel, ValidationError

from context_pyramid.exceptions import (
    ContextPyramidConfigError,
    ContextPyramidTypeError,
)
from context_pyramid.logging import get_logger
from context_pyramid.types import PathType

T = TypeVar("T", bound="ConfigSerialisableModel")

YAML_SUFFIXES = (".yaml", ".yml")


def _parse_value(text: str) -> Any:
    """Type a key-value entry; any comma makes it a list"""
    if "," in text:
        return [yaml.safe_load(item) for item in text.split(",") if item.strip()]
    return yaml.safe_load(text) if text else None


def _format_value(value: Any) -> str:
    if isinstance(value, list):
        # A trailing comma keeps single-element lists as lists
        return ", ".join(_format_value(item) for item in value) + (
            "," if len(value) < 2 else ""
        )
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _flatten(settings: dict[str, Any], prefix: str = "") -> list[tuple[str, Any]]:
    items: list[tuple[str, Any]] = []
    for key, value in settings.items():
        if isinstance(value, dict):
            items.extend(_flatten(value, f"{prefix}{key}."))
        else:
            items.append((f"{prefix}{key}", value))
    return items


class ConfigSerialisableModel(BaseModel, validate_assignment=True, extra="forbid"):
    """
    A pydantic BaseModel that can be serialised to and from text.

    Two formats are understood: flat key-value lines with dotted section
    prefixes (`cem.rates = 3,6,12,18,24`) and YAML.
    """

    config_type: ClassVar[str] = "ConfigSerialisableModel"

    @classmethod
    def from_filepath(cls: type[T], config_file_path: PathType) -> T:
        """Construct a model from a file, choosing the format from its suffix"""
        path = Path(config_file_path)
        try:
            with open(path, encoding="utf-8") as f_config:
                settings = f_config.read()
        except FileNotFoundError as exc:
            msg = f"Could not find file {config_file_path}."
            raise ContextPyramidConfigError(msg) from exc
        if path.suffix.lower() in YAML_SUFFIXES:
            return cls.from_yaml(settings)
        return cls.from_key_values(settings)

    @classmethod
    def from_key_values(cls: type[T], settings_text: str) -> T:
        """Construct a model from flat `section.key = value` lines"""
        settings: dict[str, Any] = {}
        for line_number, raw_line in enumerate(settings_text.splitlines(), start=1):
            line = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            key, separator, value = line.partition("=")
            key = key.strip()
            if not separator or not key:
                msg = f"Line {line_number} of {cls.config_type} configuration is not a 'key = value' pair."
                raise ContextPyramidConfigError(msg)
            try:
                parsed = _parse_value(value.strip())
            except yaml.YAMLError as exc:
                msg = f"Could not parse the value of '{key}' on line {line_number}."
                raise ContextPyramidConfigError(msg) from exc
            section = settings
            *parents, leaf = key.split(".")
            for parent in parents:
                child = section.setdefault(parent, {})
                if not isinstance(child, dict):
                    msg = f"Key '{key}' conflicts with an earlier value for '{parent}'."
                    raise ContextPyramidConfigError(msg)
                section = child
            if leaf in section:
                msg = f"Key '{key}' is set more than once."
                raise ContextPyramidConfigError(msg)
            section[leaf] = parsed
        return cls.from_dict(settings)

    @classmethod
    def from_yaml(cls: type[T], settings_yaml: str) -> T:
        """Construct a model from a YAML string"""
        try:
            settings_dict = yaml.safe_load(settings_yaml)
        except yaml.YAMLError as exc:
            msg = f"Could not parse {cls.config_type} configuration as YAML."
            raise ContextPyramidConfigError(msg) from exc

        if settings_dict is None:
            settings_dict = {}
        if not isinstance(settings_dict, dict):
            msg = f"Unable to parse {cls.config_type} configuration as a dict."
            raise ContextPyramidConfigError(msg)
        return cls.from_dict(settings_dict)

    @classmethod
    def from_dict(cls: type[T], settings: dict[str, Any]) -> T:
        try:
            return cls.model_validate(settings)
        except ValidationError as exc:
            logger = get_logger()
            logger.error(
                f"Found {exc.error_count()} validation errors when trying to load {cls.config_type}."
            )
            for error in exc.errors():
                logger.error(
                    f"{error.get('msg', '')}: [red]{'.'.join(map(str, error.get('loc', [])))}.[/] Original input: [red]{error.get('input', '')}[/]"
                )
            if any(error.get("type") == "extra_forbidden" for error in exc.errors()):
                msg = f"{cls.config_type} configuration contains unknown keys."
                raise ContextPyramidConfigError(msg) from exc
            msg = f"{cls.config_type} configuration is invalid."
            raise ContextPyramidTypeError(msg) from exc

    def to_filepath(self, config_file_path: PathType) -> None:
        """Serialise to a file, choosing the format from its suffix"""
        path = Path(config_file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        text = (
            self.to_yaml()
            if path.suffix.lower() in YAML_SUFFIXES
            else self.to_key_values()
        )
        with open(path, "w", encoding="utf-8") as f_config:
            f_config.write(text)

    def to_key_values(self) -> str:
        """Serialise to flat `section.key = value` lines"""
        lines = [
            f"{key} = {_format_value(value)}".rstrip()
            for key, value in _flatten(self.model_dump(mode="json"))
        ]
        return "\n".join(lines) + "\n"

    def to_yaml(self, *, warnings: bool = True) -> str:
        """Serialise to a YAML string"""
        return yaml.dump(
            self.model_dump(by_alias=True, mode="json", warnings=warnings), indent=2
        )
