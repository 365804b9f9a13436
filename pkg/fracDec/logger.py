# -*- coding: utf-8 -*-
import logging
import sys
from decimal import Decimal
from fractions import Fraction
from pprint import pformat
from typing import Any, Union

from loguru import logger
from loguru._defaults import LOGURU_FORMAT


class InterceptHandler(logging.Handler):
    """
    Routes std logging records (numpy, pyinstrument, the test runner) into loguru.
    See https://loguru.readthedocs.io/en/stable/overview.html#entirely-compatible-with-standard-logging
    """

    def emit(self, record: logging.LogRecord):
        """
        Gets corresponding Loguru level if it exists, finds caller.

        Parameters:
            record: log record
        """
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        # Find caller from where originated the logged message
        frame, depth = logging.currentframe(), 2
        while frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def _readable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, Decimal):
        return f"{value:.6e}"
    if isinstance(value, dict):
        return {str(key): _readable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_readable(item) for item in value]
    return value


def format_record(record: dict) -> str:
    """
    Custom format for loguru loggers.
    A bound payload (deficiency classes, parameter checks, boundary failures) is printed below the message,
    rationals as "n/d" and Decimal diagnostics in scientific notation.

    Example:
        ```python
        logger.bind(payload={"max_eta": Fraction(299, 4096), "threshold": Fraction(1, 15)}).warning("deficiency")
        ...
        {'max_eta': '299/4096', 'threshold': '1/15'}
        ```
    """

    format_string = LOGURU_FORMAT
    if record["extra"].get("payload") is not None:
        record["extra"]["payload"] = pformat(_readable(record["extra"]["payload"]), indent=4, compact=True, width=88)
        format_string += "\n<level>{extra[payload]}</level>"

    format_string += "{exception}\n"
    return format_string


def init_logging(level: Union[str, int] = "INFO", sink=sys.stderr):
    """
    Replaces std logging handlers with the intercept handler and configures a single loguru sink.

    Parameters:
        level: minimum level of the sink
        sink: stream the records go to; stdout stays free for command output
    """
    for handler in logging.root.handlers[:]:
        logging.root.removeHandler(handler)
    logging.basicConfig(handlers=[InterceptHandler()], level=0, force=True)

    logger.configure(handlers=[{"sink": sink, "level": level, "format": format_record}])
