"""HTTP layer: pydantic bodies and the FastAPI session service."""

from .app import create_app

__all__ = ["create_app"]
