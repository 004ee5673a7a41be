from .logger import (
    get_console_handler,
    get_logger,
    init_logging,
    set_console_level,
    show_console_level,
)

__all__ = [
    "get_console_handler",
    "get_logger",
    "init_logging",
    "set_console_level",
    "show_console_level",
]
