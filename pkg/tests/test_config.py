"""Tests for ExperimentConfig validation and the layered settings merge."""

import json

import pytest

from experiments.config import EXPERIMENT_DEFAULTS, ExperimentConfig
from graph.config_parser import env_settings, file_settings, merge_settings, parse_config
from utils.errors import ConfigurationError


def test_defaults_are_filled_per_experiment():
    config = ExperimentConfig(experiment="clt")
    assert config.n == EXPERIMENT_DEFAULTS["clt"]["n"]
    assert config.samples == 4000
    assert config.ensemble == "goe"
    assert config.resolved_set_size == 28  # ⌊800^0.5⌋
    assert config.resolved_index == 400
    assert config.distribution is None


def test_exponent_rule_resolution():
    assert ExperimentConfig(experiment="que", n=10_000, set_size="N^0.5").resolved_set_size == 100
    assert ExperimentConfig(experiment="que", n=1000, set_size="N^0.3").resolved_set_size == 7
    assert ExperimentConfig(experiment="que", n=100, set_size="12").resolved_set_size == 12


def test_index_resolution():
    assert ExperimentConfig(experiment="clt", n=10, index="edge").resolved_index == 0
    assert ExperimentConfig(experiment="clt", n=10, index=7).resolved_index == 7


def test_distribution_from_ensemble():
    config = ExperimentConfig(experiment="clt", ensemble="wigner:uniform")
    assert config.distribution.value == "uniform"


@pytest.mark.parametrize(
    "overrides",
    [
        {"n": 1},
        {"n": 10, "set_size": 11},
        {"set_size": "N^1.5"},
        {"set_size": "half"},
        {"samples": 0},
        {"workers": 0},
        {"ensemble": "gue"},
        {"n": 10, "index": 10},
        {"profile_spread": 1.0},
        {"ou_time": 2.0},
        {"times": [0.0, 0.5]},
        {"delta2": 0.5, "epsilon2": 0.4},
        {"flow_step": 1.0},
        {"unknown_field": 3},
    ],
)
def test_invalid_configurations_are_rejected(overrides):
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="que", **overrides)


def test_flow_check_needs_six_sites():
    with pytest.raises(ValueError, match="flow-check"):
        ExperimentConfig(experiment="flow-check", n=5)


def test_echo_is_json_ready(tmp_path):
    config = ExperimentConfig(experiment="clt", out=tmp_path)
    echoed = config.echo()
    assert echoed["out"] == str(tmp_path)
    json.dumps(echoed)


def test_env_settings_parse_known_variables():
    environ = {"EVLAB_SEED": "12", "EVLAB_WORKERS": "3", "EVLAB_FORMATS": "csv, svg", "OTHER": "x"}
    assert env_settings(environ) == {"seed": 12, "workers": 3, "formats": ["csv", "svg"]}


def test_env_settings_reject_unparseable_values():
    with pytest.raises(ConfigurationError, match="EVLAB_SEED"):
        env_settings({"EVLAB_SEED": "many"})


def test_file_settings(tmp_path):
    assert file_settings(None) == {}
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"n": 50, "seed": 4}))
    assert file_settings(path) == {"n": 50, "seed": 4}
    path.write_text("[1, 2]")
    with pytest.raises(ConfigurationError):
        file_settings(path)
    with pytest.raises(ConfigurationError):
        file_settings(tmp_path / "missing.json")


def test_merge_precedence(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"seed": 2, "n": 50, "workers": 2}))
    environ = {"EVLAB_SEED": "1", "EVLAB_WORKERS": "4", "EVLAB_FAMILY": "random"}
    merged = merge_settings("clt", {"seed": 3, "n": None}, path, environ)
    assert merged == {"experiment": "clt", "seed": 3, "n": 50, "workers": 2, "family": "random"}


def test_parse_config_wraps_validation_errors():
    with pytest.raises(ConfigurationError):
        parse_config({"experiment": "clt", "n": 1})
    assert parse_config({"experiment": "clt", "n": 20, "samples": 5}).n == 20
