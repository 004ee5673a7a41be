import logging

import numpy as np
from pytest import fixture

import context_pyramid.logging.logger
from context_pyramid.config import InputConfig, NetworkConfig, OutputConfig, RunConfig
from context_pyramid.logging import init_logging, set_console_level
from context_pyramid.types import Precision


def pytest_configure(config):
    """Define constants for use across multiple tests"""
    config.seed = 20240917
    config.tiny_shape = (1, 3, 32, 32)


@fixture(autouse=True, scope="session")
def log_directory(session_mocker, tmp_path_factory):
    session_mocker.patch.object(
        context_pyramid.logging.logger, "logfile_name", return_value="test.log"
    )
    log_dir = tmp_path_factory.mktemp("logs")
    session_mocker.patch.object(
        context_pyramid.logging.logger, "log_dir", return_value=log_dir
    )
    init_logging()
    return log_dir


@fixture(autouse=True)
def console_level():
    set_console_level(logging.INFO)


@fixture
def rng(request) -> np.random.Generator:
    return np.random.default_rng(request.config.seed)


@fixture
def tiny_config(tmp_path) -> RunConfig:
    """Network at one sixteenth of the reference widths on a 32x32 image"""
    network = NetworkConfig().scaled(16)
    return RunConfig(
        precision=Precision.DOUBLE,
        backbone=network.backbone,
        cem=network.cem,
        attention=network.attention,
        pyramid=network.pyramid,
        input=InputConfig(shape=[1, 3, 32, 32]),
        output=OutputConfig(directory=tmp_path / "out"),
    )


@fixture
def tiny_config_file(tmp_path, tiny_config):
    path = tmp_path / "tiny.cfg"
    tiny_config.to_filepath(path)
    return path
