from pytest import fixture, raises

from context_pyramid.exceptions import (
    ContextPyramidConfigError,
    ContextPyramidTypeError,
)
from context_pyramid.serialisers import ConfigSerialisableModel


class ExampleSection(ConfigSerialisableModel):
    config_type = "Section"
    flag: bool = False
    rate: float = 0.5


class ExampleConfigSerialisableModel(ConfigSerialisableModel):
    config_type = "Example"
    string: str
    integer: int
    list_of_integers: list[int]
    section: ExampleSection = ExampleSection()


@fixture
def example_config_class():
    return ExampleConfigSerialisableModel(
        string="hello", integer=5, list_of_integers=[1, 2, 3]
    )


@fixture
def example_config_key_values():
    return "\n".join(
        [
            "# comment lines are ignored",
            "string = hello",
            "integer = 5  # trailing comments too",
            "list_of_integers = 1, 2, 3",
            "section.flag = true",
        ]
    )


@fixture
def example_config_yaml():
    return "\n".join(["string: 'hello'", "integer: 5", "list_of_integers: [1,2,3]"])


class TestFromKeyValues:
    def test_from_key_values(self, example_config_key_values):
        example = ExampleConfigSerialisableModel.from_key_values(
            example_config_key_values
        )
        assert example.string == "hello"
        assert example.integer == 5
        assert example.list_of_integers == [1, 2, 3]
        assert example.section.flag
        assert example.section.rate == 0.5

    def test_single_element_list(self):
        example = ExampleConfigSerialisableModel.from_key_values(
            "string = a\ninteger = 1\nlist_of_integers = 4,"
        )
        assert example.list_of_integers == [4]

    def test_not_a_pair(self):
        with raises(
            ContextPyramidConfigError,
            match="Line 2 of Example configuration is not a 'key = value' pair.",
        ):
            ExampleConfigSerialisableModel.from_key_values("string = a\ninteger 5")

    def test_repeated_key(self):
        with raises(ContextPyramidConfigError, match="'integer' is set more than once"):
            ExampleConfigSerialisableModel.from_key_values("integer = 1\ninteger = 2")

    def test_conflicting_section(self):
        with raises(ContextPyramidConfigError, match="conflicts with an earlier value"):
            ExampleConfigSerialisableModel.from_key_values(
                "section = 1\nsection.flag = true"
            )

    def test_unknown_key(self):
        with raises(
            ContextPyramidConfigError,
            match="Example configuration contains unknown keys.",
        ):
            ExampleConfigSerialisableModel.from_key_values(
                "string = a\ninteger = 1\nlist_of_integers = 1,\nsection.colour = red"
            )

    def test_invalid_value(self):
        with raises(ContextPyramidTypeError, match="Example configuration is invalid."):
            ExampleConfigSerialisableModel.from_key_values(
                "string = a\ninteger = many\nlist_of_integers = 1,"
            )


class TestToKeyValues:
    def test_to_key_values(self, example_config_class):
        assert example_config_class.to_key_values() == "\n".join(
            [
                "string = hello",
                "integer = 5",
                "list_of_integers = 1, 2, 3",
                "section.flag = false",
                "section.rate = 0.5",
                "",
            ]
        )

    def test_round_trip(self, example_config_class):
        text = example_config_class.to_key_values()
        loaded = ExampleConfigSerialisableModel.from_key_values(text)
        assert loaded.model_dump() == example_config_class.model_dump()


class TestYaml:
    def test_from_yaml(self, example_config_yaml):
        example = ExampleConfigSerialisableModel.from_yaml(example_config_yaml)
        assert example.string == "hello"
        assert example.list_of_integers == [1, 2, 3]

    def test_from_yaml_invalid_yaml(self):
        yaml = "\n".join(["string: 'abc'", "integer: -3", "list_of_integers: [-1,0,1"])
        with raises(
            ContextPyramidConfigError,
            match="Could not parse Example configuration as YAML.",
        ):
            ExampleConfigSerialisableModel.from_yaml(yaml)

    def test_from_yaml_not_dict(self):
        with raises(
            ContextPyramidConfigError,
            match="Unable to parse Example configuration as a dict.",
        ):
            ExampleConfigSerialisableModel.from_yaml("42")

    def test_from_yaml_validation_errors(self, caplog):
        yaml = "\n".join(
            ["string: 'abc'", "integer: 'not an integer'", "list_of_integers: [1]"]
        )
        with raises(ContextPyramidTypeError, match="Example configuration is invalid."):
            ExampleConfigSerialisableModel.from_yaml(yaml)
        assert "Input should be a valid integer" in caplog.text

    def test_to_yaml(self, example_config_class):
        yaml = example_config_class.to_yaml()
        assert "string: hello" in yaml
        assert "  flag: false" in yaml


class TestFilepath:
    def test_missing(self, tmp_path):
        with raises(ContextPyramidConfigError, match="Could not find file"):
            ExampleConfigSerialisableModel.from_filepath(tmp_path / "missing.cfg")

    def test_suffix_chooses_format(self, tmp_path, example_config_class):
        example_config_class.to_filepath(tmp_path / "example.yaml")
        example_config_class.to_filepath(tmp_path / "example.cfg")
        assert (tmp_path / "example.yaml").read_text().startswith("integer: 5")
        assert (tmp_path / "example.cfg").read_text().startswith("string = hello")
        for name in ("example.yaml", "example.cfg"):
            loaded = ExampleConfigSerialisableModel.from_filepath(tmp_path / name)
            assert loaded.model_dump() == example_config_class.model_dump()
