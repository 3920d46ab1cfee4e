"""HTTP query service over immutable datasets."""

from .app import create_app
from .registry import DatasetRegistry

__all__ = ["create_app", "DatasetRegistry"]
