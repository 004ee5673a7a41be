from os import getenv
from pathlib import Path

import appdirs

_appname = "context_pyramid"


def log_dir() -> Path:
    if log_directory_env := getenv("CONTEXT_PYRAMID_LOG_DIRECTORY"):
        log_directory = Path(log_directory_env).resolve()
    else:
        log_directory = Path(appdirs.user_log_dir(appname=_appname)).resolve()
        log_directory.mkdir(parents=True, exist_ok=True)

    return log_directory


def output_dir() -> Path:
    """Default directory for command artefacts"""
    if output_directory_env := getenv("CONTEXT_PYRAMID_OUTPUT_DIRECTORY"):
        return Path(output_directory_env).resolve()
    return Path.cwd() / "acfpn-output"
