"""
Structured logging for library code and experiment commands.
التسجيل المنظم

Library modules only log at debug level. Everything goes to stderr so that
stdout summaries and result files stay machine-readable. Until
``setup_logging`` runs, importing the package installs a quiet configuration
that drops anything below WARNING.
"""

from __future__ import annotations

import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from typing import Any, Optional

import structlog


def _processors(json_format: bool, callsite: bool) -> list[Any]:
    chain: list[Any] = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="iso", utc=True),
    ]
    if callsite:
        chain.append(
            structlog.processors.CallsiteParameterAdder(
                parameters=[
                    structlog.processors.CallsiteParameter.MODULE,
                    structlog.processors.CallsiteParameter.FUNC_NAME,
                ]
            )
        )
    if json_format:
        chain += [structlog.processors.format_exc_info, structlog.processors.JSONRenderer(sort_keys=True)]
    else:
        chain.append(structlog.dev.ConsoleRenderer(colors=False))
    return chain


def _configure(level: int, json_format: bool, callsite: bool) -> None:
    structlog.configure(
        processors=_processors(json_format, callsite),
        wrapper_class=structlog.make_filtering_bound_logger(level),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def configure_default_logging() -> None:
    """Warnings and errors only, rendered for the console on stderr."""
    _configure(logging.WARNING, json_format=False, callsite=False)


def setup_logging(
    level: Optional[str] = None,
    json_format: Optional[bool] = None,
    callsite: bool = False,
) -> None:
    """
    Configure structlog for one process.

    ``level`` and ``json_format`` fall back to ``LOG_LEVEL`` and ``LOG_JSON``
    from the settings.
    """
    from loopsoup.core.settings import get_settings

    settings = get_settings()
    name = (level or settings.LOG_LEVEL).upper()
    numeric = logging.getLevelName(name)
    if not isinstance(numeric, int):
        numeric = logging.INFO
    use_json = settings.LOG_JSON if json_format is None else json_format
    _configure(numeric, use_json, callsite)


def get_logger(name: Optional[str] = None) -> Any:
    return structlog.get_logger(name)


@contextmanager
def experiment_log(experiment: str, run_id: str, **context: Any) -> Iterator[Any]:
    """
    Bind the experiment name, run id and ``context`` into every log line of
    the block, and yield the experiment logger.
    """
    with structlog.contextvars.bound_contextvars(experiment=experiment, run_id=run_id, **context):
        yield get_logger("loopsoup.experiments")


if not structlog.is_configured():
    configure_default_logging()
