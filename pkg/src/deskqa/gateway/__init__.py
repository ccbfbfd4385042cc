"""HTTP gateway: bearer-token auth and path routing over the platform."""

from .app import bootstrap, create_app
from .auth import authenticate
from .config import ServerConfig, load_config, parse_config

__all__ = ["bootstrap", "create_app", "authenticate", "ServerConfig", "load_config", "parse_config"]
