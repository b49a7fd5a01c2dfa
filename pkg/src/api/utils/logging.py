"""
Logging Module for lccbench

This module configures logging for the runner and its verification suites.
The main logger is the root logger; numerical modules log through
`logging.getLogger(__name__)` and inherit its handlers, while every suite can
additionally write to a suite-specific file.

Key Features:
- Configurable main logger with options for file and stdout logging
- Support for additional custom logging handlers
- Suite-specific logging that integrates with the main logging system

Usage:
1. Configure the main application logger:
   configure_main_logger('INFO', 'lccbench.log', log_to_stdout=True)

2. Create loggers for suites:
   suite_logger = get_suite_logger('lcc_suite', 'lcc_suite.log')

3. Log residuals and progress:
   suite_logger.info(f"construction soundness: max residual {residual:.3e}")
"""

# Python Imports
import logging
import sys
from typing import List, Optional, TextIO

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def configure_main_logger(
    log_level: str,
    log_file: Optional[str] = None,
    log_to_stdout: bool = True,
    additional_handlers: List[logging.Handler] = None,
    stream: Optional[TextIO] = None
) -> None:
    """
    Configure the root logger of the application.

    Existing root handlers are removed first so that repeated configuration
    (tests, the CLI re-reading config.yml) never duplicates output.

    Args:
        log_level (str): The logging level (e.g., 'INFO', 'DEBUG', 'WARNING').
        log_file (Optional[str]): The path to the log file. If None, file logging is disabled.
        log_to_stdout (bool): Whether to log to the console stream.
        additional_handlers (List[logging.Handler]): Additional logging handlers to add.
        stream (Optional[TextIO]): Console stream; sys.stdout if None. Commands that print
            a table on stdout log to sys.stderr instead.

    Raises:
        ValueError: If an invalid log level is provided.
    """
    numeric_level = getattr(logging, str(log_level).upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError(f"Invalid log level: {log_level}")

    logger = logging.getLogger()
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
    logger.setLevel(numeric_level)

    formatter = logging.Formatter(LOG_FORMAT)

    if log_file is not None:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    if log_to_stdout:
        stream_handler = logging.StreamHandler(stream or sys.stdout)
        stream_handler.setFormatter(formatter)
        logger.addHandler(stream_handler)

    if additional_handlers:
        for handler in additional_handlers:
            if handler not in logger.handlers:
                handler.setFormatter(formatter)
                logger.addHandler(handler)

    logger.debug(f"Main logger configured with level: {log_level}")


def get_suite_logger(suite_name: str, log_file: Optional[str] = None) -> logging.Logger:
    """
    Create a logger for a verification suite.

    The logger propagates to the main logger and, if a file is given, also
    writes to a suite-specific log.

    Args:
        suite_name (str): The name of the suite.
        log_file (Optional[str]): Path of the suite log file, or None.

    Returns:
        logging.Logger: The suite logger.
    """
    logger = logging.getLogger(f"lccbench.suites.{suite_name}")

    if log_file and not any(isinstance(h, logging.FileHandler) and h.baseFilename.endswith(log_file)
                            for h in logger.handlers):
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(file_handler)

    logger.debug("Suite logger configured")
    return logger
