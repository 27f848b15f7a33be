"""HTTP service wrapping the warehouse session."""

from .app import create_app

__all__ = ["create_app"]
