from .format import tabulate
from .pretty import pretty_print as print  # noqa: A001

__all__ = [
    "print",
    "tabulate",
]
