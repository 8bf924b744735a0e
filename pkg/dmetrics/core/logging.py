import logging
import sys

from pythonjsonlogger import jsonlogger

from dmetrics.core.config import settings


def setup_logging(level: str | None = None, fmt: str | None = None) -> None:
    """
    Configure structured JSON logging for the CLI.

    Logs go to stderr so that stdout stays free for command output.
    """
    logger = logging.getLogger()

    # Remove existing handlers
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)

    if (fmt or settings.LOG_FORMAT) == "plain":
        formatter: logging.Formatter = logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")
    else:
        formatter = jsonlogger.JsonFormatter(
            "%(asctime)s %(levelname)s %(name)s %(message)s",
            rename_fields={"asctime": "timestamp", "levelname": "level"},
        )

    handler.setFormatter(formatter)
    logger.addHandler(handler)

    logger.setLevel((level or settings.LOG_LEVEL).upper())
