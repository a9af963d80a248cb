import json

import pytest

from starkres.config import THREADS_ENV, GridConfig, PotentialConfig, RunConfig, SolverConfig
from starkres.excs import ConfigError


def test_defaults_are_valid(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    config = RunConfig().load_from_env().validate()
    assert config.threads is None
    assert config.potential.build().is_zero
    assert config.solver.mode == "born"


def test_validate_collects_every_error():
    config = RunConfig.from_dict(
        {
            "potential": {"gamma": -1.0, "c_star": 1.0, "p": 1.5},
            "grid": {"nodes": 8, "grading": "chebyshev"},
            "solver": {"tolerance": 2.0, "mode": "exact"},
            "threads": 0,
        }
    )
    with pytest.raises(ConfigError) as excinfo:
        config.validate()
    fields = set(excinfo.value.fields)
    assert {"potential.gamma", "potential.p", "grid.nodes", "grid.grading", "solver.tolerance", "solver.mode", "threads"} <= fields


def test_unknown_field_is_rejected():
    with pytest.raises(ConfigError) as excinfo:
        SolverConfig.from_dict({"tolerance": 1e-8, "dampening": 0.5})
    assert "dampening" in excinfo.value.fields


def test_unknown_command_is_rejected():
    with pytest.raises(ConfigError) as excinfo:
        RunConfig(task={"command": "plot"}).validate()
    assert "task.command" in excinfo.value.fields


def test_nested_update_keeps_defaults(singular_config_dict):
    config = RunConfig.from_dict(singular_config_dict)
    assert config.grid.ratio == 0.1
    assert config.solver.max_restarts == 4
    assert config.potential.build().is_singular


def test_item_access():
    config = GridConfig(nodes=320)
    assert config["nodes"] == 320
    config["rule"] = "nystrom"
    assert config.get("rule") == "nystrom"
    assert config.get("missing", "fallback") == "fallback"
    with pytest.raises(KeyError):
        config["missing"]


def test_json_round_trip(tmpdir, smooth_config_dict):
    config = RunConfig.from_dict(smooth_config_dict)
    path = config.save_as_json(path=str(tmpdir), name="run.json")
    with open(path) as infile:
        assert json.load(infile)["potential"]["smooth_part"]["coefficients"] == [1.0, 0.5]
    loaded = RunConfig().load_from_json(path)
    assert loaded == config


def test_load_from_missing_file(tmpdir):
    with pytest.raises(ConfigError) as excinfo:
        RunConfig().load_from_json(path=str(tmpdir), name="absent.json")
    assert "path" in excinfo.value.fields


def test_pickle_round_trip(tmpdir, singular_config_dict):
    config = RunConfig.from_dict(singular_config_dict)
    config.pickle(path=str(tmpdir))
    assert RunConfig.unpickle(path=str(tmpdir)) == config


def test_threads_from_env(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    assert RunConfig().load_from_env().threads == 3
    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ConfigError):
        RunConfig().load_from_env()


def test_config_hash_follows_content(singular_config_dict):
    first = RunConfig.from_dict(singular_config_dict)
    second = RunConfig.from_dict(singular_config_dict)
    assert first.config_hash() == second.config_hash()
    second.seed = 1
    assert first.config_hash() != second.config_hash()


def test_potential_config_builds_tables():
    config = PotentialConfig(smooth_part={"kind": "table", "x": [0.0, 0.5, 1.0], "values": [1.0, 2.0, 3.0], "order": 1})
    assert config.build()(0.25) == pytest.approx(1.5)


def test_grid_config_follows_the_potential(singular_potential, smooth_potential):
    assert GridConfig().build(singular_potential).grading == "geometric"
    assert GridConfig().build(smooth_potential).grading == "uniform"
    assert GridConfig(nodes=320, grading="geometric").build(smooth_potential).dim == 320
