from __future__ import annotations

import pytest

from poincare.config import EngineConfig
from poincare.errors import ConfigError
from poincare.fixtures import DEFAULT_PARAM_BOUND, DEFAULT_SEEDS

ENV = ("POINCARE_SEEDS", "POINCARE_PARAM_BOUND", "POINCARE_LOG_LEVEL", "POINCARE_METRICS_PATH", "POINCARE_JET_CHECKS")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ENV:
        monkeypatch.delenv(name, raising=False)


def test_defaults():
    config = EngineConfig()
    assert config.SEEDS == DEFAULT_SEEDS
    assert config.PARAM_BOUND == DEFAULT_PARAM_BOUND
    assert config.LOG_LEVEL == "INFO"
    assert config.METRICS_PATH is None
    assert config.JET_CHECKS == 50


def test_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("POINCARE_SEEDS", "3, 5,8")
    monkeypatch.setenv("POINCARE_PARAM_BOUND", "11")
    monkeypatch.setenv("POINCARE_LOG_LEVEL", "debug")
    monkeypatch.setenv("POINCARE_METRICS_PATH", str(tmp_path / "m.prom"))
    monkeypatch.setenv("POINCARE_JET_CHECKS", "7")
    config = EngineConfig()
    assert config.SEEDS == (3, 5, 8)
    assert config.PARAM_BOUND == 11
    assert config.LOG_LEVEL == "DEBUG"
    assert config.METRICS_PATH.endswith("m.prom")
    assert config.JET_CHECKS == 7


def test_arguments_override_the_environment(monkeypatch):
    monkeypatch.setenv("POINCARE_SEEDS", "3")
    monkeypatch.setenv("POINCARE_LOG_LEVEL", "ERROR")
    config = EngineConfig(seeds=(9,), log_level="warning")
    assert config.SEEDS == (9,)
    assert config.LOG_LEVEL == "WARNING"


@pytest.mark.parametrize(
    "name, value",
    [
        ("POINCARE_SEEDS", "1,two"),
        ("POINCARE_PARAM_BOUND", "0"),
        ("POINCARE_PARAM_BOUND", "lots"),
        ("POINCARE_LOG_LEVEL", "LOUD"),
        ("POINCARE_JET_CHECKS", "-1"),
    ],
)
def test_invalid_settings(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ConfigError):
        EngineConfig()


def test_missing_metrics_path_is_reported(caplog):
    with caplog.at_level("WARNING", logger="poincare.config"):
        EngineConfig()
    assert "POINCARE_METRICS_PATH" in caplog.text
