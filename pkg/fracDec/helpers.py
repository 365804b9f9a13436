# -*- coding: utf-8 -*-
import os
import re
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, TypeVar, Union

from dotenv import load_dotenv
from fracDec.errorhandling import InputError

T = TypeVar("T")
R = TypeVar("R")

_RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(value: Union[str, int, Fraction]) -> Fraction:
    """
    Parses an exact rational from "a/b", "a" or an int. Floats are rejected.

    Parameters:
        value: textual or integral rational
    Returns:
        Fraction in lowest terms
    Raises:
        InputError: malformed text, zero denominator or a float
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"rational expected as 'numerator/denominator', got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    match = _RATIONAL_PATTERN.match(str(value))
    if match is None:
        raise InputError(f"rational expected as 'numerator/denominator', got {value!r}")
    numerator, denominator = match.group(1), match.group(2)
    if denominator is not None and int(denominator) == 0:
        raise InputError(f"zero denominator in {value!r}")
    return Fraction(int(numerator), int(denominator) if denominator is not None else 1)


def format_rational(value: Fraction) -> str:
    """
    Returns:
        "numerator/denominator", denominator always present
    """
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """
    Maps fn over items, on a thread pool when workers > 1. Results keep the input order.

    Parameters:
        fn: pure function
        items: inputs
        workers: pool size, 1 runs inline
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _prioritize_envs_in_settings(prefix: str) -> Dict[str, Any]:
    """
    Helper function to fix an issue where config.json overwrites .env variables with specified prefix
    in Config child class of Pydantic's settings

    Args:
        prefix: A string value from inner Config class of a pydantic model. Example:
        ```
        class Config:
            env_file = ".env"
            env_file_encoding = "utf-8"
            env_prefix = "fracdec_"
        ```

    Returns:
        map of the env variables which will overwrite values provided in config.json file
    """
    load_dotenv()
    envs_map = {}
    for env, value in os.environ.items():
        if env.lower().startswith(prefix.lower()):
            envs_map[env[len(prefix) :].lower()] = value
    return envs_map
