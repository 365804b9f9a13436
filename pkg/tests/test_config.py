"""Tests for run settings and experiment configs."""

import orjson
import pytest
from pydantic import ValidationError

from fracDec.config import ExperimentConfig, FracDecSettings, get_fracdec_settings
from fracDec.utils.constants import DEFAULT_BUDGET_PIVOTS


@pytest.fixture(autouse=True)
def clean_env(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for name in ("FRACDEC_WORKERS", "FRACDEC_LOG_LEVEL", "FRACDEC_BUDGET_PIVOTS"):
        monkeypatch.delenv(name, raising=False)


class TestFracDecSettings:
    def test_defaults_without_file(self, tmp_path):
        settings = get_fracdec_settings(str(tmp_path / "missing.json"))
        assert settings.workers == 1
        assert settings.budget_pivots == DEFAULT_BUDGET_PIVOTS
        assert settings.default_p == "1/2"

    def test_file_values(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_bytes(orjson.dumps({"workers": 2, "log_level": "DEBUG"}))
        settings = FracDecSettings.load_config(str(path))
        assert (settings.workers, settings.log_level) == (2, "DEBUG")

    def test_environment_wins(self, tmp_path, monkeypatch):
        path = tmp_path / "config.json"
        path.write_bytes(orjson.dumps({"workers": 2}))
        monkeypatch.setenv("FRACDEC_WORKERS", "3")
        assert FracDecSettings.load_config(str(path)).workers == 3

    def test_save_and_load(self, tmp_path):
        path = str(tmp_path / "saved.json")
        FracDecSettings(budget_columns=77).save_config(path)
        assert FracDecSettings.load_config(path).budget_columns == 77

    @pytest.mark.parametrize("field,value", [("workers", 0), ("budget_columns", -1), ("decimal_precision", 20)])
    def test_rejects(self, field, value):
        with pytest.raises(ValidationError):
            FracDecSettings(**{field: value})


class TestExperimentConfig:
    def test_digest_ignores_key_order(self):
        one = ExperimentConfig(command="params", parameters={"r": 3, "q": 4, "eps": "1"})
        two = ExperimentConfig(command="params", parameters={"eps": "1", "q": 4, "r": 3})
        assert one.digest() == two.digest()
        assert len(one.digest()) == 64

    def test_digest_tracks_parameters(self):
        one = ExperimentConfig(command="params", parameters={"r": 3})
        two = ExperimentConfig(command="params", parameters={"r": 4})
        assert one.digest() != two.digest()

    def test_extra_fields_forbidden(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(command="params", flags=[])

    def test_load(self, tmp_path):
        path = tmp_path / "exp.json"
        path.write_bytes(orjson.dumps({"command": "sample", "seed": 7, "inputs": {"graph": "g.json"}}))
        config = ExperimentConfig.load(str(path))
        assert config.seed == 7
        assert config.inputs == {"graph": "g.json"}
