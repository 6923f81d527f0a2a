"""
Tests for environment-driven settings
"""
import pytest

from modules.error_handler import ConfigError
from modules.settings import Settings, get_settings


class TestSettings:
    """Settings.from_env and the cached accessor."""

    def test_defaults(self, monkeypatch):
        """Test the values used when nothing is set."""
        for name in ("LOG_LEVEL", "LOG_FILE", "GROEBNER_MAX_BASIS", "DEFAULT_ORDER",
                     "DEFAULT_VERIFY_K", "SLOW_STAGE_SECONDS"):
            monkeypatch.delenv(name, raising=False)
        settings = Settings.from_env()
        assert settings == Settings()
        assert settings.groebner_max_basis == 5000
        assert settings.default_order == "grevlex"

    def test_normalization(self, monkeypatch):
        """Test that level and order names are case-insensitive."""
        monkeypatch.setenv("LOG_LEVEL", "debug")
        monkeypatch.setenv("DEFAULT_ORDER", "LEX")
        settings = Settings.from_env()
        assert settings.log_level == "DEBUG"
        assert settings.default_order == "lex"

    @pytest.mark.parametrize("name,value", [
        ("LOG_LEVEL", "chatty"),
        ("DEFAULT_ORDER", "deglex"),
        ("GROEBNER_MAX_BASIS", "many"),
        ("GROEBNER_MAX_BASIS", "0"),
        ("DEFAULT_VERIFY_K", "-1"),
        ("SLOW_STAGE_SECONDS", "0"),
        ("SLOW_STAGE_SECONDS", "soon"),
    ])
    def test_invalid(self, monkeypatch, name, value):
        """Test that malformed values raise ConfigError."""
        monkeypatch.setenv(name, value)
        with pytest.raises(ConfigError):
            Settings.from_env()

    def test_cached(self, monkeypatch):
        """Test that get_settings reads the environment once until cleared."""
        monkeypatch.setenv("DEFAULT_VERIFY_K", "7")
        first = get_settings()
        monkeypatch.setenv("DEFAULT_VERIFY_K", "9")
        assert get_settings() is first
        assert first.default_verify_k == 7
        get_settings.cache_clear()
        assert get_settings().default_verify_k == 9


if __name__ == "__main__":
    pytest.main([__file__])
