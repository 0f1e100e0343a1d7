import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional

from app.core.config import settings


def setup_logging(
    log_level: Optional[str] = None,
    log_dir: Optional[str] = None,
    to_file: Optional[bool] = None,
) -> logging.Logger:
    """
    Configure application-wide logging.

    Diagnostics go to stderr so that stdout only carries command output.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_dir: Directory for the per-run log file
        to_file: Attach the per-run file handler

    Returns:
        Logger instance
    """
    log_level = log_level or settings.LOG_LEVEL
    log_dir = log_dir or settings.LOG_DIR
    to_file = settings.LOG_TO_FILE if to_file is None else to_file

    log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    date_format = "%Y-%m-%d %H:%M:%S"

    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]

    log_filename = None
    if to_file:
        log_path = Path(log_dir)
        log_path.mkdir(parents=True, exist_ok=True)
        # Separate file for each run
        log_filename = log_path / f"cachesim_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log"
        handlers.append(logging.FileHandler(log_filename, mode="w", encoding="utf-8"))

    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format=log_format,
        datefmt=date_format,
        handlers=handlers,
        force=True,
    )

    # Set specific log levels for noisy libraries
    logging.getLogger("git").setLevel(logging.WARNING)
    logging.getLogger("numexpr").setLevel(logging.WARNING)

    logger = logging.getLogger(__name__)
    logger.debug(f"Logging initialized - Level: {log_level}, File: {log_filename or 'disabled'}")

    return logger
