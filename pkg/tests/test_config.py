from fractions import Fraction

import pytest
from pydantic import ValidationError

from src.config import Settings, load_settings


def test_defaults(monkeypatch):
    for name in ("NOVIKOV_DEFAULT_PRECISION", "NOVIKOV_DEFAULT_SEED", "NOVIKOV_LOG_LEVEL", "NOVIKOV_OTLP_ENDPOINT"):
        monkeypatch.delenv(name, raising=False)
    settings = load_settings()
    assert settings.default_precision == Fraction(8)
    assert settings.default_seed == 0
    assert settings.otlp_endpoint is None
    assert settings.log_level == "WARNING"


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("NOVIKOV_DEFAULT_PRECISION", "5/2")
    monkeypatch.setenv("NOVIKOV_DEFAULT_SEED", "7")
    monkeypatch.setenv("NOVIKOV_LOG_LEVEL", "debug")
    monkeypatch.setenv("NOVIKOV_DEFAULT_SAMPLES", "")
    settings = load_settings()
    assert settings.default_precision == Fraction(5, 2)
    assert settings.default_seed == 7
    assert settings.log_level == "DEBUG"
    assert settings.default_samples is None


def test_bad_seed_is_rejected(monkeypatch):
    monkeypatch.setenv("NOVIKOV_DEFAULT_SEED", "seven")
    with pytest.raises(ValidationError):
        load_settings()


def test_precision_accepts_text():
    assert Settings(default_precision="3/4").default_precision == Fraction(3, 4)
