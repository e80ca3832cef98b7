"""Reference server for the embedding and generation wire protocols."""

from .app import create_app
from .config import ServerConfig

__all__ = ["create_app", "ServerConfig"]
__version__ = "0.1.0"
