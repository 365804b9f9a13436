# -*- coding: utf-8 -*-
import sys
import traceback
from functools import lru_cache
from typing import Any, Optional

from fracDec.utils.constants import EXIT_BUDGET, EXIT_INTERNAL, EXIT_INVALID_INPUT, EXIT_PRECONDITION
from loguru import logger


class FracDecError(Exception):
    """Base of every failure the library reports; exit_code is what the CLI returns for it."""

    exit_code = EXIT_INTERNAL


class InputError(FracDecError):
    """Malformed graph, parameter, certificate or artifact."""

    exit_code = EXIT_INVALID_INPUT


class PreconditionError(FracDecError):
    """
    A construction's precondition does not hold.

    Attributes:
        witness: the offending object (edge, subset size, copy of a clique), if any.
    """

    exit_code = EXIT_PRECONDITION

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class DeficiencyError(PreconditionError):
    """
    Exact deficiency above the almost-to-full threshold.

    Attributes:
        report: the DeficiencyReport that failed.
        depth: induction depth of the union-of-matchings construction, 0 for a single matching.
    """

    def __init__(self, message: str, report: Any = None, depth: int = 0, witness: Any = None) -> None:
        super().__init__(message, witness=witness)
        self.report = report
        self.depth = depth


class ResourceBudgetError(FracDecError):
    """A pivot, column, enumeration or materialization budget was exceeded."""

    exit_code = EXIT_BUDGET

    def __init__(self, message: str, budget: Optional[str] = None, limit: Optional[int] = None) -> None:
        super().__init__(message)
        self.budget = budget
        self.limit = limit


class InternalConsistencyError(FracDecError):
    """An identity guaranteed by the mathematics failed, e.g. a negative solved weight."""

    exit_code = EXIT_INTERNAL


class FracDecExceptionHandler:
    def __init__(self) -> None:
        super().__init__()
        self.stack_trace = list()

    def handle(self, ex: Exception, *args) -> int:
        """handle Exception

        Get the current system exception, extract unformatted stack traces as tuples.

        Formats stacktrace to: File : %s , Line : %d, Func.Name : %s, Message : %s

        Library failures are logged with their message only, anything else with the full stack trace.

        Returns:
            the process exit code for ex
        """
        ex_type, ex_value, ex_traceback = sys.exc_info()
        if ex_type is None:
            ex_type, ex_value, ex_traceback = type(ex), ex, ex.__traceback__

        trace_back = traceback.extract_tb(ex_traceback)
        self.stack_trace = [
            "File : %s , Line : %d, Func.Name : %s, Message : %s" % (trace[0], trace[1], trace[2], trace[3])
            for trace in trace_back
        ]

        if isinstance(ex, FracDecError):
            logger.error("{}: {}", ex_type.__name__, ex_value)
            logger.debug("Stack trace : {}", self.stack_trace)
            return ex.exit_code

        logger.error("Exception: {} {}", ex, args)
        logger.error("Exception type : {}", ex_type.__name__)
        logger.error("Exception message : {}", ex_value)
        logger.error("Stack trace : {}", self.stack_trace)
        return EXIT_INTERNAL


@lru_cache()
def getFracDecExceptionHandler() -> FracDecExceptionHandler:
    """
    This function returns a cached instance of the FracDecExceptionHandler object.
    """
    return FracDecExceptionHandler()
