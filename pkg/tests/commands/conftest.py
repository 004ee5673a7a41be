from pytest import fixture
from typer.testing import CliRunner

from context_pyramid.config import AttentionConfig, RunConfig


@fixture
def runner(tmp_path) -> CliRunner:
    runner = CliRunner(
        env={
            "CONTEXT_PYRAMID_OUTPUT_DIRECTORY": str(tmp_path / "default-output"),
            "COLUMNS": "500",  # Set large number of columns to avoid rich wrapping text
            "TERM": "dumb",  # Disable colours, style and interactive rich features
        },
        mix_stderr=False,
    )
    return runner


@fixture
def three_path_config_file(tmp_path, tiny_config: RunConfig):
    tiny_config.cem = tiny_config.cem.model_copy(update={"rates": [3, 12, 24]})
    path = tmp_path / "three_paths.cfg"
    tiny_config.to_filepath(path)
    return path


@fixture
def no_attention_config_file(tmp_path, tiny_config: RunConfig):
    tiny_config.attention = AttentionConfig(cxam=False, cnam=False)
    path = tmp_path / "no_attention.yaml"
    tiny_config.to_filepath(path)
    return path
