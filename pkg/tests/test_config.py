from pathlib import Path

import pytest
import yaml

from core.config import Config
from core.ensemble import Method
from core.errors import ConfigError
from core.pulses import ErrorMode, PiZOrder
from core.sequences import Protocol


SHIPPED_CONFIG = Path(__file__).resolve().parent.parent / "config" / "config.yml"


def write_yaml(path, data):
    path.write_text(yaml.safe_dump(data))
    return str(path)


def test_defaults_resolve(tmp_path):
    config = Config(str(tmp_path / "missing.yml"))
    ensemble = config.to_ensemble_config()
    assert ensemble.errors.epsilon0 == 0.3 and ensemble.errors.n0 == -0.12
    assert ensemble.bath.b == 1.0
    assert ensemble.method is Method.QUADRATURE
    assert ensemble.error_mode is ErrorMode.INDEPENDENT
    assert ensemble.pi_z_order is PiZOrder.XY
    assert config.protocol is Protocol.UDD and config.level == 2


def test_required_file_must_exist(tmp_path):
    with pytest.raises(ConfigError):
        Config(str(tmp_path / "missing.yml"), required=True)


def test_file_overrides_defaults(tmp_path):
    path = write_yaml(tmp_path / "c.yml", {"errors": {"epsilon0": 0.1}, "run": {"protocol": "qdd", "level": 3}})
    config = Config(path)
    assert config.get("errors.epsilon0") == 0.1
    assert config.get("errors.n0") == -0.12
    assert config.protocol is Protocol.QDD


def test_unknown_key_names_dotted_path(tmp_path):
    path = write_yaml(tmp_path / "c.yml", {"ensemble": {"nodez": 3}})
    with pytest.raises(ConfigError) as excinfo:
        Config(path)
    assert excinfo.value.key == "ensemble.nodez"
    assert "ensemble.nodez" in str(excinfo.value)


def test_set_rejects_unknown_key():
    config = Config()
    with pytest.raises(ConfigError):
        config.set("bath.width", 2.0)
    config.set("bath.b", 2.0)
    assert config.to_ensemble_config().bath.b == 2.0


def test_metadata_section_is_ignored(tmp_path):
    path = write_yaml(tmp_path / "c.yml", {"metadata": {"rows": 3}, "bath": {"b": 0.5}})
    assert Config(path).get("bath.b") == 0.5


def test_preset_overrides_file(tmp_path):
    path = write_yaml(tmp_path / "c.yml", {"time_grid": {"count": 10}, "ensemble": {"nodes_b": 8}})
    config = Config(path, preset="si-p")
    assert config.get("bath.b") == 0.8804
    assert config.get("time_grid.stop") == 2000.0
    assert config.get("time_grid.count") == 200
    assert config.get("ensemble.nodes_b") == 8


def test_preset_over_shipped_config():
    config = Config(str(SHIPPED_CONFIG), preset="si-p", required=True)
    assert config.get("bath.b") == 0.8804
    assert config.get("time_grid.stop") == 2000.0
    assert len(config.time_grid()) == 201
    assert config.to_ensemble_config().bath.b == 0.8804


def test_shipped_config_matches_defaults():
    assert Config(str(SHIPPED_CONFIG), required=True).to_dict() == Config().to_dict()


def test_unknown_preset():
    with pytest.raises(ConfigError):
        Config(preset="gaas")


@pytest.mark.parametrize(
    "key,value",
    [
        ("errors.n0", 0.6),
        ("bath.b", 0.0),
        ("ensemble.nodes_b", 1),
        ("ensemble.method", "exact"),
        ("ensemble.seed", -1),
        ("errors.mode", "random"),
    ],
)
def test_invalid_values_name_their_key(key, value):
    config = Config()
    config.set(key, value)
    with pytest.raises(ConfigError) as excinfo:
        config.to_ensemble_config()
    assert excinfo.value.key == key


def test_invalid_level():
    config = Config()
    config.set("run.level", 0)
    with pytest.raises(ConfigError):
        config.level


def test_linear_grid():
    config = Config()
    config.set("time_grid.stop", 10.0)
    config.set("time_grid.count", 5)
    assert config.time_grid() == pytest.approx([0.0, 2.0, 4.0, 6.0, 8.0, 10.0])


def test_si_p_grid_has_201_rows():
    config = Config(preset="si-p")
    grid = config.time_grid()
    assert len(grid) == 201 and grid[0] == 0.0 and grid[-1] == pytest.approx(2000.0)


def test_log_grid():
    config = Config()
    config.set("time_grid.spacing", "log-with-zero")
    config.set("time_grid.count", 4)
    grid = config.time_grid()
    assert grid[0] == 0.0 and len(grid) == 5
    assert grid[1] == pytest.approx(0.06) and grid[-1] == pytest.approx(60.0)


def test_grid_stop_must_exceed_start():
    config = Config()
    config.set("time_grid.start", 5.0)
    config.set("time_grid.stop", 5.0)
    with pytest.raises(ConfigError):
        config.time_grid()


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv("DDSIM_WORKERS", "3")
    assert Config().to_ensemble_config().workers == 3
    monkeypatch.setenv("DDSIM_WORKERS", "zero")
    with pytest.raises(ConfigError):
        Config.workers()


def test_save_round_trip(tmp_path):
    config = Config()
    config.set("errors.epsilon0", 0.2)
    config.save(str(tmp_path / "saved.yml"))
    again = Config(str(tmp_path / "saved.yml"))
    assert again.to_ensemble_config().digest() == config.to_ensemble_config().digest()
