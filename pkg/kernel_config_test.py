import json
import logging

import pytest

from kernel_config import ENV_PREFIX, ConfigLoader, KernelConfig, load_config

SETTINGS = ("MAGNUS_MAX_DEGREE", "HOMOTOPY_BOUND", "COVER_DEPTH", "LOG_LEVEL", "CONFIG")


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in SETTINGS:
        monkeypatch.delenv(f"{ENV_PREFIX}{name}", raising=False)


def write_config(tmp_path, data) -> str:
    path = tmp_path / "config.json"
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


def test_defaults_without_a_file(tmp_path):
    config = load_config(str(tmp_path / "missing.json"))
    assert config == KernelConfig()
    assert config.to_dict() == {
        "magnus_max_degree": 12,
        "homotopy_bound": 3,
        "cover_depth": 1,
        "log_level": "WARNING",
    }


def test_shipped_config_matches_defaults():
    assert load_config() == KernelConfig()


def test_file_values(tmp_path):
    config = load_config(write_config(tmp_path, {"magnus_max_degree": 5, "log_level": "debug"}))
    assert config.magnus_max_degree == 5
    assert config.log_level == "DEBUG"
    assert config.homotopy_bound == 3


def test_environment_overrides_the_file(tmp_path, monkeypatch):
    path = write_config(tmp_path, {"homotopy_bound": 2})
    monkeypatch.setenv(f"{ENV_PREFIX}HOMOTOPY_BOUND", "7")
    assert load_config(path).homotopy_bound == 7


def test_config_file_from_the_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(f"{ENV_PREFIX}CONFIG", write_config(tmp_path, {"cover_depth": 4}))
    assert ConfigLoader().config_file.endswith("config.json")
    assert load_config().cover_depth == 4


@pytest.mark.parametrize(
    "data",
    [
        "{not json",
        "[1, 2]",
        {"magnus_max_degree": 0},
        {"homotopy_bound": -1},
        {"cover_depth": "deep"},
        {"cover_depth": True},
        {"log_level": "LOUD"},
    ],
)
def test_invalid_configuration(tmp_path, data):
    with pytest.raises(ValueError):
        load_config(write_config(tmp_path, data))


def test_unknown_keys_are_reported(tmp_path, caplog):
    with caplog.at_level(logging.WARNING, logger="kernel_config"):
        config = load_config(write_config(tmp_path, {"colour": "blue"}))
    assert config == KernelConfig()
    assert "colour" in caplog.text
