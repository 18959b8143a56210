"""Logging setup and stage timing"""
import logging
import time
from contextlib import contextmanager
from typing import Iterator


LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

logger = logging.getLogger(__name__)


def configure_logging(level: str = "INFO") -> None:
    """Configure root logging for command-line runs"""
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format=LOG_FORMAT)


@contextmanager
def timed(label: str, log: logging.Logger = logger) -> Iterator[None]:
    """Log a stage start and its duration"""
    start_time = time.perf_counter()
    log.info(f"{label} started")
    try:
        yield
    finally:
        duration = time.perf_counter() - start_time
        log.info(f"{label} duration={duration:.3f}s")
