import logging
import sys
from typing import Optional
from statusnet.config import Settings, get_settings

def configure_logging(settings: Optional[Settings] = None, level: Optional[str] = None) -> None:
    """Route package logs to stderr at the configured level"""
    settings = settings or get_settings()
    logging.basicConfig(
        level=(level or settings.log).upper(),
        format=settings.log_format,
        stream=sys.stderr,
        force=True,
    )
