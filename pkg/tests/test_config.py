"""Tests for config module."""

import pytest
import yaml

from src.config import DEFAULT_CONFIG, MAX_WORDS_ENV, ConfigError, _merge, apply_environment, get_config, load_config


@pytest.fixture(autouse=True)
def no_env_override(monkeypatch):
    monkeypatch.delenv(MAX_WORDS_ENV, raising=False)


class TestLoadConfig:
    """Tests for load_config function."""

    def test_load_valid_config(self, tmp_path):
        """Test loading a valid config file merges over the defaults."""
        config_file = tmp_path / "config.yaml"
        config_file.write_text(yaml.dump({"degree_bounds": {"fourier": 4}, "logging": {"level": "DEBUG"}}))

        result = load_config(config_file)

        assert result["degree_bounds"]["fourier"] == 4
        assert result["degree_bounds"]["identity"] == 4
        assert result["logging"]["level"] == "DEBUG"
        assert result["guards"]["max_words"] == 160_000

    def test_load_missing_config(self):
        """Test loading non-existent config raises error."""
        with pytest.raises(FileNotFoundError):
            load_config("/nonexistent/config.yaml")

    def test_load_config_with_string_path(self, tmp_path):
        """Test loading config with string path."""
        config_file = tmp_path / "config.yaml"
        config_file.write_text(yaml.dump({"crosscheck": {"seed": 7}}))

        result = load_config(str(config_file))

        assert result["crosscheck"]["seed"] == 7
        assert result["crosscheck"]["points"] == 3

    def test_empty_file(self, tmp_path):
        """Test an empty file yields the defaults."""
        config_file = tmp_path / "config.yaml"
        config_file.write_text("")

        assert load_config(config_file) == DEFAULT_CONFIG

    def test_non_mapping(self, tmp_path):
        """Test a top-level list is rejected."""
        config_file = tmp_path / "config.yaml"
        config_file.write_text(yaml.dump([1, 2]))

        with pytest.raises(ConfigError, match="mapping"):
            load_config(config_file)


class TestGetConfig:
    """Tests for get_config function."""

    def test_get_config_finds_file(self, monkeypatch, tmp_path):
        """Test get_config finds config in current directory."""
        config_file = tmp_path / "config.yaml"
        config_file.write_text(yaml.dump({"flatness": {"component_bound": 9}}))
        monkeypatch.chdir(tmp_path)

        result = get_config()

        assert result["flatness"]["component_bound"] == 9


class TestEnvironment:
    """Tests for the QMQV_MAX_WORDS override."""

    def test_override(self, monkeypatch, tmp_path):
        """Test the variable replaces guards.max_words."""
        config_file = tmp_path / "config.yaml"
        config_file.write_text(yaml.dump({"guards": {"max_words": 10}}))
        monkeypatch.setenv(MAX_WORDS_ENV, "5000")

        assert load_config(config_file)["guards"]["max_words"] == 5000

    def test_blank_is_ignored(self, monkeypatch):
        """Test an empty value leaves the config alone."""
        monkeypatch.setenv(MAX_WORDS_ENV, " ")

        assert apply_environment(DEFAULT_CONFIG) is DEFAULT_CONFIG

    def test_does_not_mutate(self, monkeypatch):
        """Test the override copies the config."""
        monkeypatch.setenv(MAX_WORDS_ENV, "7")

        result = apply_environment(DEFAULT_CONFIG)

        assert result["guards"]["max_words"] == 7
        assert DEFAULT_CONFIG["guards"]["max_words"] == 160_000

    @pytest.mark.parametrize("raw", ["many", "0", "-3"])
    def test_invalid(self, monkeypatch, raw):
        """Test non-integer and non-positive values raise ConfigError."""
        monkeypatch.setenv(MAX_WORDS_ENV, raw)

        with pytest.raises(ConfigError, match=MAX_WORDS_ENV):
            apply_environment(DEFAULT_CONFIG)


class TestMerge:
    """Tests for _merge."""

    def test_nested(self):
        """Test nested mappings merge key by key."""
        base = {"a": {"x": 1, "y": 2}, "b": 3}

        assert _merge(base, {"a": {"y": 5}}) == {"a": {"x": 1, "y": 5}, "b": 3}
        assert base["a"]["y"] == 2

    def test_scalar_replaces_mapping(self):
        """Test a scalar override replaces a mapping."""
        assert _merge({"a": {"x": 1}}, {"a": 0}) == {"a": 0}

    def test_none_override(self):
        """Test a None override returns a copy of the base."""
        assert _merge({"a": 1}, None) == {"a": 1}
