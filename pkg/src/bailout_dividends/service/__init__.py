"""HTTP service wrapping the solvers and simulator."""

from .app import create_app

__all__ = ["create_app"]
