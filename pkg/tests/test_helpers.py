"""Tests for rational parsing and the worker pool."""

from fractions import Fraction

import pytest

from fracDec.errorhandling import InputError
from fracDec.helpers import _prioritize_envs_in_settings, format_rational, parallel_map, parse_rational


class TestParseRational:
    @pytest.mark.parametrize(
        "text,expected",
        [("3/4", Fraction(3, 4)), (" -2 ", Fraction(-2)), ("6/8", Fraction(3, 4)), (5, Fraction(5))],
    )
    def test_parses(self, text, expected):
        assert parse_rational(text) == expected

    @pytest.mark.parametrize("value", [0.5, True, "1/0", "abc", "1.5", "1/-2"])
    def test_rejects(self, value):
        with pytest.raises(InputError):
            parse_rational(value)


def test_format_rational():
    assert format_rational(Fraction(2)) == "2/1"
    assert format_rational(Fraction(-6, 8)) == "-3/4"


def test_parallel_map_keeps_order():
    assert parallel_map(lambda x: x * x, range(20), workers=4) == [x * x for x in range(20)]


def test_prioritized_envs(monkeypatch):
    monkeypatch.setenv("FRACDEC_MATERIALIZE_LIMIT", "64")
    assert _prioritize_envs_in_settings("fracdec_")["materialize_limit"] == "64"
