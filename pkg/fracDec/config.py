# -*- coding: utf-8 -*-
import hashlib
import os
from typing import Any, Dict, Optional

import orjson
from fracDec.helpers import _prioritize_envs_in_settings
from fracDec.models.settings import FracDecAppSettings
from fracDec.utils.constants import (
    DEFAULT_BUDGET_COLUMNS,
    DEFAULT_BUDGET_PIVOTS,
    DEFAULT_DECIMAL_PRECISION,
    DEFAULT_ENUMERATION_BUDGET,
    DEFAULT_MATERIALIZE_LIMIT,
    DEFAULT_VACUITY_BUDGET,
)
from loguru import logger
from pydantic import BaseModel, Extra, validator


class FracDecSettings(FracDecAppSettings):
    """
    fracdec run settings.

    Any attribute can be overridden by an environment variable carrying the `FRACDEC_` prefix, or by a
    `.env` file; environment values win over config.json.

    Attributes:
        workers: thread pool size for per-edge and per-copy work.
        budget_pivots: simplex pivot budget of the LP oracle.
        budget_columns: column budget of the LP oracle.
        materialize_limit: largest support an implicit packing is expanded to.
        enumeration_budget: largest number of supersets the exact family deficiency enumerates.
        vacuity_budget: largest clique size k the parameter calculus treats as desk scale.
        decimal_precision: digits of the Decimal context used by the analytic bounds.
        default_p: sampling probability of the matching construction, "a/b".
        self_check: verify every LP certificate before returning it.
        log_level: loguru sink level.
        output_dir: directory artifacts are written to.
    """

    workers: int = 1
    budget_pivots: int = DEFAULT_BUDGET_PIVOTS
    budget_columns: int = DEFAULT_BUDGET_COLUMNS
    materialize_limit: int = DEFAULT_MATERIALIZE_LIMIT
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET
    vacuity_budget: int = DEFAULT_VACUITY_BUDGET
    decimal_precision: int = DEFAULT_DECIMAL_PRECISION
    default_p: str = "1/2"
    self_check: bool = True
    log_level: str = "INFO"
    output_dir: str = "."

    @validator("workers", "budget_pivots", "budget_columns", "materialize_limit", "enumeration_budget")
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be a positive integer")
        return value

    @validator("decimal_precision")
    def _enough_bits(cls, value: int) -> int:
        # 31 digits ~ 103 bits
        if value < 31:
            raise ValueError("at least 31 digits are required")
        return value

    def save_config(self, path: str = "config.json") -> None:
        """
        Saves config to a JSON file
        """
        with open(path, "wb") as fp:
            fp.write(orjson.dumps(self.dict(), option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2))

    @staticmethod
    def load_config(path: str = "config.json") -> "FracDecSettings":
        """
        Loads config from JSON file, prefixed environment variables take priority.

        Returns:
            FracDecSettings config model
        """
        settings: FracDecSettings = FracDecSettings()
        if os.path.exists(path):
            with open(path, "rb") as fp:
                json_config: dict = orjson.loads(fp.read() or b"{}")
            retrieved_envs = _prioritize_envs_in_settings(settings.Config.env_prefix)
            merged_config_payload = {**json_config, **retrieved_envs}
            ret = FracDecSettings.parse_obj(merged_config_payload)
            logger.debug("Loaded config file {}", path)
        else:
            ret = settings
        return ret


def get_fracdec_settings(path: str = "config.json") -> FracDecSettings:
    """
    Returns the settings of this run, read from path and the environment.
    """
    return FracDecSettings.load_config(path)


class ExperimentConfig(BaseModel):
    """
    One reproducible CLI invocation.

    Attributes:
        command: subcommand name.
        inputs: graph or generator spec, packing/target paths.
        parameters: name -> value, rationals as "a/b".
        seed: Monte Carlo seed.
        output_paths: artifact name -> path.
    """

    command: str
    inputs: Dict[str, Any] = {}
    parameters: Dict[str, Any] = {}
    seed: Optional[int] = None
    output_paths: Dict[str, str] = {}

    class Config:
        extra = Extra.forbid

    def canonical(self) -> bytes:
        return orjson.dumps(self.dict(), option=orjson.OPT_SORT_KEYS)

    def digest(self) -> str:
        """
        Returns:
            sha256 hex digest of the sorted-key serialization
        """
        return hashlib.sha256(self.canonical()).hexdigest()

    @classmethod
    def load(cls, path: str) -> "ExperimentConfig":
        with open(path, "rb") as fp:
            return cls.parse_obj(orjson.loads(fp.read()))
