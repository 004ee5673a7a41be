"""Attention-guided context feature pyramid blocks"""

from .logging import init_logging
from .version import __version__, __version_info__

init_logging()

__all__ = ["__version__", "__version_info__"]
