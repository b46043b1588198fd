"""
Tests for the logger, environment settings and metrics textfile.
"""

import json
import logging

import pytest

from cvwitness.base import DEFAULT_CHUNK_SIZE, DEFAULT_SEED, ConfigError, Settings
from cvwitness.logger import WitnessLogger
from cvwitness.metrics import get_metrics, reset_metrics


class TestLogger:
    def test_json_format(self, monkeypatch, capsys, clean_logger):
        monkeypatch.setenv("WITNESS_LOG_FORMAT", "json")
        WitnessLogger.get_logger("tests").info("hello")
        record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert record["message"] == "hello"
        assert record["level"] == "INFO"
        assert record["component"] == "tests"

    def test_text_format_names_component(self, capsys, clean_logger):
        WitnessLogger.get_logger("tests").warning("careful")
        line = capsys.readouterr().err.strip().splitlines()[-1]
        assert line.startswith("[TESTS]")
        assert "WARNING - careful" in line

    def test_level_from_environment(self, monkeypatch, clean_logger):
        monkeypatch.setenv("WITNESS_LOG_LEVEL", "debug")
        assert WitnessLogger.get_logger("tests").level == logging.DEBUG

    def test_invalid_level_falls_back(self, monkeypatch, capsys, clean_logger):
        monkeypatch.setenv("WITNESS_LOG_LEVEL", "chatty")
        logger = WitnessLogger.get_logger("tests")
        assert logger.level == logging.INFO
        assert "Invalid WITNESS_LOG_LEVEL 'CHATTY'" in capsys.readouterr().err

    def test_loggers_are_cached(self, clean_logger):
        assert WitnessLogger.get_logger("tests") is WitnessLogger.get_logger("tests")


class TestSettings:
    def test_defaults(self):
        settings = Settings.from_env()
        assert settings.seed == DEFAULT_SEED
        assert settings.workers == 1
        assert settings.chunk_size == DEFAULT_CHUNK_SIZE
        assert settings.metrics_file is None

    def test_environment_values(self, monkeypatch):
        monkeypatch.setenv("WITNESS_SEED", "0xff")
        monkeypatch.setenv("WITNESS_WORKERS", "4")
        monkeypatch.setenv("WITNESS_METRICS_FILE", "/tmp/witness.prom")
        settings = Settings.from_env()
        assert settings.seed == 255
        assert settings.workers == 4
        assert settings.metrics_file == "/tmp/witness.prom"

    @pytest.mark.parametrize(
        ("name", "value"),
        [
            ("WITNESS_SEED", "twelve"),
            ("WITNESS_WORKERS", "0"),
            ("WITNESS_CHUNK_SIZE", "100"),
            ("WITNESS_FOCK_CUTOFF", "4"),
        ],
    )
    def test_invalid_values(self, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        with pytest.raises(ConfigError, match=name):
            Settings.from_env()

    def test_config_error_location(self):
        assert str(ConfigError("bad", line=3, column=7)) == "line 3, column 7: bad"
        assert str(ConfigError("bad", column=2)) == "column 2: bad"


class TestMetrics:
    def test_singleton_and_reset(self):
        first = get_metrics()
        assert get_metrics() is first
        reset_metrics()
        assert get_metrics() is not first

    def test_record_sampling(self):
        metrics = get_metrics()
        metrics.record_sampling("xx", 250, 1000)
        assert metrics.registry.get_sample_value("cvwitness_acceptance_rate", {"layout": "xx"}) == 0.25

    def test_write_textfile(self, tmp_path):
        metrics = get_metrics()
        metrics.threshold_evaluations.inc(3)
        path = tmp_path / "run.prom"
        metrics.write(path)
        assert "cvwitness_threshold_evaluations_total 3.0" in path.read_text()
