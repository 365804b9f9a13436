"""Tests for the loguru setup."""

import io
import logging
from fractions import Fraction

from loguru import logger

from fracDec.logger import format_record, init_logging


class TestFormatRecord:
    def test_plain(self):
        assert format_record({"extra": {}}).endswith("{exception}\n")

    def test_payload_is_pretty_printed(self):
        record = {"extra": {"payload": {"max_eta": "37/256"}}}
        fmt = format_record(record)
        assert "{extra[payload]}" in fmt
        assert record["extra"]["payload"] == "{'max_eta': '37/256'}"

    def test_rationals_are_readable(self):
        record = {"extra": {"payload": {"eta": Fraction(299, 4096), "classes": (Fraction(1, 2),)}}}
        format_record(record)
        assert record["extra"]["payload"] == "{'classes': ['1/2'], 'eta': '299/4096'}"


class TestInitLogging:
    def test_level_and_payload(self):
        sink = io.StringIO()
        init_logging("INFO", sink=sink)
        logger.debug("hidden")
        logger.bind(payload={"failures": 2}).info("boundary outside window")
        text = sink.getvalue()
        assert "hidden" not in text
        assert "boundary outside window" in text
        assert "{'failures': 2}" in text

    def test_standard_logging_is_intercepted(self):
        sink = io.StringIO()
        init_logging("WARNING", sink=sink)
        logging.getLogger("fracdec.test").warning("from std logging")
        assert "from std logging" in sink.getvalue()
