import pytest

from core.config import Config
from utils.system_check import REQUIRED, SystemCheck


@pytest.fixture
def config(tmp_path):
    config = Config(str(tmp_path / "missing.yml"))
    config.set("run.output", str(tmp_path / "out" / "curve.csv"))
    return config


def test_old_dependency_is_reported(config, monkeypatch):
    monkeypatch.setitem(REQUIRED, "numpy", ("numpy", "999.0"))
    check = SystemCheck(config)
    assert not check.check_dependencies()
    assert "numpy" in check.errors[0] and "< 999.0" in check.errors[0]


def test_unparsable_version_only_warns(config, monkeypatch):
    monkeypatch.setattr("utils.system_check.metadata.version", lambda dist: "custom-build")
    check = SystemCheck(config)
    assert check.check_dependencies()
    assert check.errors == []
    assert any("custom-build" in w for w in check.warnings)


def test_all_checks_pass(config, monkeypatch):
    monkeypatch.delenv("DDSIM_WORKERS", raising=False)
    check = SystemCheck(config)
    assert check.run_all_checks()
    assert check.errors == []


def test_output_dir_created(config, tmp_path):
    check = SystemCheck(config)
    assert check.check_output_dir()
    assert (tmp_path / "out").is_dir()
    assert list((tmp_path / "out").iterdir()) == []


@pytest.mark.parametrize("raw", ["0", "-2", "four"])
def test_bad_worker_count(config, monkeypatch, raw):
    monkeypatch.setenv("DDSIM_WORKERS", raw)
    check = SystemCheck(config)
    assert not check.check_workers()
    assert "DDSIM_WORKERS" in check.errors[0]


def test_too_many_workers_warns(config, monkeypatch):
    monkeypatch.setenv("DDSIM_WORKERS", "100000")
    check = SystemCheck(config)
    assert check.check_workers()
    assert check.warnings


def test_large_ensemble_warns(config, monkeypatch):
    monkeypatch.delenv("DDSIM_WORKERS", raising=False)
    config.set("ensemble.nodes_b", 200)
    config.set("ensemble.nodes_eps", 200)
    config.set("ensemble.nodes_nz", 200)
    config.set("ensemble.chunk_size", 1024)
    check = SystemCheck(config)
    assert check.check_ensemble_size()
    assert any("Large ensemble" in w for w in check.warnings)


def test_correlated_mode_skips_tilt_nodes(config, monkeypatch):
    monkeypatch.delenv("DDSIM_WORKERS", raising=False)
    config.set("errors.mode", "correlated_spatial")
    config.set("ensemble.nodes_b", 2000)
    config.set("ensemble.nodes_eps", 1000)
    config.set("ensemble.nodes_nz", 1000)
    config.set("ensemble.chunk_size", 1024)
    check = SystemCheck(config)
    assert check.check_ensemble_size()
    assert check.warnings == []


def test_oversized_chunk_fails(config, monkeypatch):
    monkeypatch.delenv("DDSIM_WORKERS", raising=False)
    config.set("ensemble.method", "monte_carlo")
    config.set("ensemble.n_samples", 10**15)
    config.set("ensemble.chunk_size", 10**15)
    check = SystemCheck(config)
    assert not check.check_ensemble_size()
    assert "chunk_size" in check.errors[0]
