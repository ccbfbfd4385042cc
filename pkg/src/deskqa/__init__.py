"""DeskQA: a self-hostable question answering platform at desk scale."""

from .core import Platform

__version__ = "0.1.0"

__all__ = ["Platform", "__version__"]
