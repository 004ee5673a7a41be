from .cli import application

__all__ = ["application"]
