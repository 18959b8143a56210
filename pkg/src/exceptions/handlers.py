"""Exception handlers for the command-line front end"""
from src.exceptions.base import CdekfException, ConfigError, ReportIoError
import logging


logger = logging.getLogger(__name__)


EXIT_OK = 0
EXIT_APP_ERROR = 1
EXIT_CONFIG_ERROR = 2
EXIT_IO_ERROR = 3
EXIT_INTERNAL_ERROR = 70


def config_error_handler(exc: ConfigError) -> tuple[int, dict]:
    """Handle ConfigError"""
    content = {"detail": str(exc), "code": "CONFIG_ERROR"}
    if exc.field:
        content["field"] = exc.field
    return EXIT_CONFIG_ERROR, content


def io_error_handler(exc: ReportIoError) -> tuple[int, dict]:
    """Handle ReportIoError"""
    return EXIT_IO_ERROR, {"detail": str(exc), "code": "IO_ERROR", "path": exc.path}


def handle_exception(exc: BaseException) -> int:
    """Log an exception that escaped the harness and return the process exit code"""
    if isinstance(exc, ConfigError):
        code, content = config_error_handler(exc)
    elif isinstance(exc, ReportIoError):
        code, content = io_error_handler(exc)
    elif isinstance(exc, CdekfException):
        logger.error(f"Application error: {exc}", exc_info=True)
        code, content = EXIT_APP_ERROR, {"detail": str(exc), "code": "APP_ERROR"}
    else:
        # Unexpected error - log details, report generic message
        logger.error(f"Unhandled error: {exc}", exc_info=True)
        code, content = EXIT_INTERNAL_ERROR, {"detail": "Internal error", "code": "INTERNAL_ERROR"}

    logger.error(f"{content['code']}: {content['detail']}")
    return code
