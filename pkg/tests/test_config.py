"""Tests for YAML configuration, environment overrides and saving."""

import os

import pytest
import yaml

from src.config import Config, ConfigError


def test_defaults_without_a_file(tmp_path):
    config = Config(tmp_path / "missing.yml", environ={})
    assert config.vertex_cap == 10 ** 6
    assert config.member_cap == 10 ** 7
    assert config.solver_vertex_cap == 64
    assert config.pair_threshold == 10 ** 6
    assert config.sample_size == 10 ** 4
    assert config.seed == 2024
    assert config.time_budget is None
    assert config.restrict_values is True
    assert config.lower_bound_mode == "degree_bound"
    assert config.threads == (os.cpu_count() or 1)


def test_user_file_is_merged_over_defaults(tmp_path):
    path = tmp_path / "sdom_config.yml"
    path.write_text(yaml.safe_dump({"limits": {"vertex_cap": 500}, "solver": {"threads": 2, "time_budget": 1.5}}))
    config = Config(path, environ={})
    assert config.vertex_cap == 500
    assert config.member_cap == 10 ** 7
    assert config.threads == 2
    assert config.time_budget == 1.5


def test_unreadable_yaml_falls_back_to_defaults(tmp_path):
    path = tmp_path / "broken.yml"
    path.write_text("limits: [unclosed\n")
    assert Config(path, environ={}).vertex_cap == 10 ** 6


def test_environment_overrides(tmp_path):
    environ = {"SDOM_VERTEX_CAP": "1234", "SDOM_SOLVER_VERTEX_CAP": "16", "SDOM_MEMBER_CAP": ""}
    config = Config(tmp_path / "missing.yml", environ=environ)
    assert config.vertex_cap == 1234
    assert config.solver_vertex_cap == 16
    assert config.member_cap == 10 ** 7


@pytest.mark.parametrize("raw", ["ten", "0", "-5"])
def test_bad_environment_override(tmp_path, raw):
    with pytest.raises(ConfigError):
        Config(tmp_path / "missing.yml", environ={"SDOM_VERTEX_CAP": raw})


def test_bad_limit_in_file(tmp_path):
    path = tmp_path / "sdom_config.yml"
    path.write_text(yaml.safe_dump({"limits": {"member_cap": -1}}))
    with pytest.raises(ConfigError):
        Config(path, environ={}).member_cap


def test_save_round_trip(tmp_path):
    path = tmp_path / "nested" / "sdom_config.yml"
    config = Config(path, environ={"SDOM_VERTEX_CAP": "777"})
    assert config.save_config() == path
    reloaded = Config(path, environ={})
    assert reloaded.vertex_cap == 777
    assert reloaded.seed == 2024


def test_dotenv_file_is_read(tmp_path, monkeypatch):
    env_file = tmp_path / ".env"
    env_file.write_text("SDOM_SOLVER_VERTEX_CAP=32\n")
    monkeypatch.setattr(Config, "ENV_FILE", env_file)
    monkeypatch.setattr(os, "environ", dict(os.environ))
    config = Config(tmp_path / "missing.yml")
    assert config.solver_vertex_cap == 32
