"""
Logging configuration for the command-line tool. Library modules only create loggers.
"""

import logging
import sys

import structlog

TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S"


def _plain_renderer(_, __, event_dict) -> str:
    """asctime - name - levelname - message"""
    return (f"{event_dict.get('timestamp', '')} - {event_dict.get('logger', '')} - "
            f"{str(event_dict.get('level', '')).upper()} - {event_dict.get('event', '')}")


def configure_logging(level: str = "WARNING", fmt: str = "text") -> logging.Handler:
    """
    Route stdlib and structlog records to stderr through one structlog formatter.

    Args:
        level: Root log level name
        fmt: 'text' for the classic line layout, 'json' for one JSON object per record
    """
    shared = [
        structlog.stdlib.add_log_level,
        structlog.stdlib.add_logger_name,
        structlog.processors.TimeStamper(fmt=TIMESTAMP_FORMAT),
    ]
    renderer = structlog.processors.JSONRenderer(sort_keys=True) if fmt == 'json' else _plain_renderer

    structlog.configure(
        processors=shared + [structlog.stdlib.ProcessorFormatter.wrap_for_formatter],
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(structlog.stdlib.ProcessorFormatter(
        foreign_pre_chain=shared,
        processors=[structlog.stdlib.ProcessorFormatter.remove_processors_meta, renderer],
    ))

    root = logging.getLogger()
    root.handlers = [handler]
    root.setLevel(getattr(logging, str(level).upper(), logging.WARNING))
    return handler
