"""HTTP service layer: pydantic schemas, table builders, FastAPI app."""

from .app import app, create_app

__all__ = ["app", "create_app"]
