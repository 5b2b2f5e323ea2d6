"""
Logging setup and startup helpers for the ss-optics command line
"""

import logging
import sys

from pythonjsonlogger import jsonlogger

from .config import Settings, get_settings

TEXT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
JSON_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"


def setup_logging(settings: Settings = None) -> None:
    """Configure root logging on stderr; stdout is reserved for command output"""
    settings = settings or get_settings()

    handler = logging.StreamHandler(sys.stderr)
    if settings.log_format == "json":
        handler.setFormatter(jsonlogger.JsonFormatter(JSON_FORMAT))
    else:
        handler.setFormatter(logging.Formatter(TEXT_FORMAT))

    root = logging.getLogger()
    for existing in list(root.handlers):
        root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(getattr(logging, settings.log_level.upper(), logging.INFO))

    # Set specific logger levels
    logging.getLogger("numexpr").setLevel(logging.WARNING)
