import pytest

from ftbfs.sdk import config
from ftbfs.sdk.utils import SplitMix64, ceil_power, ceil_root, load_toml, parse_int_list


def test_worker_count_default_and_override(isolated_config, monkeypatch):
    """FTBFS_WORKERS overrides the sequential default."""
    assert config.get_worker_count() == 1
    monkeypatch.setenv("FTBFS_WORKERS", "4")
    assert config.get_worker_count() == 4
    monkeypatch.setenv("FTBFS_WORKERS", "0")
    assert config.get_worker_count() == 1


def test_worker_count_rejects_garbage(isolated_config, monkeypatch):
    """A non-integer worker count is a configuration error."""
    monkeypatch.setenv("FTBFS_WORKERS", "many")
    with pytest.raises(ValueError, match="FTBFS_WORKERS must be an integer"):
        config.get_worker_count()


def test_oracle_guard_and_log_level(isolated_config, monkeypatch):
    """Defaults are 14 and WARNING; env vars win."""
    assert config.get_oracle_max_n() == 14
    assert config.get_log_level() == "WARNING"
    monkeypatch.setenv("FTBFS_ORACLE_MAX_N", "9")
    monkeypatch.setenv("FTBFS_LOG_LEVEL", "debug")
    assert config.get_oracle_max_n() == 9
    assert config.get_log_level() == "DEBUG"


def test_packaged_calibration(monkeypatch):
    """The packaged calibration file carries the frozen guards."""
    monkeypatch.delenv("FTBFS_CALIBRATION", raising=False)
    assert config.get_calibration_path() == config.CALIBRATION_PATH
    assert config.calibration_value("ratio_guard.ft_bfs") == 4.0
    assert config.calibration_value("multifail_p0.c") == 2.0


def test_calibration_override(isolated_config):
    """FTBFS_CALIBRATION points at an alternative file."""
    assert config.get_calibration_path() == isolated_config
    assert config.calibration_value("scale.default_sizes") == [10, 20]


def test_calibration_missing_key_and_file(isolated_config, monkeypatch, tmp_path):
    """Unknown keys and missing files are reported."""
    with pytest.raises(KeyError, match="scale.nothing"):
        config.calibration_value("scale.nothing")
    monkeypatch.setenv("FTBFS_CALIBRATION", str(tmp_path / "gone.yaml"))
    with pytest.raises(FileNotFoundError, match="Calibration file not found"):
        config.load_calibration()


def test_splitmix_reference_and_sampling():
    """Seed 0 starts with the reference value; samples are sorted, distinct and reproducible."""
    assert SplitMix64(0).next_u64() == 0xE220A8397B1DCDAF
    a = SplitMix64(7).sample(10, 5)
    assert a == SplitMix64(7).sample(10, 5)
    assert a == sorted(set(a)) and len(a) == 5
    assert SplitMix64(3).sample(4, 10) == [0, 1, 2, 3]
    assert 0.0 <= SplitMix64(1).random() < 1.0


def test_integer_roots():
    """Exact ceilings of fractional powers."""
    assert ceil_root(27, 3) == 3
    assert ceil_root(28, 3) == 4
    assert ceil_root(0, 3) == 0
    assert ceil_root(10, 4) == 2
    assert ceil_power(30, 2, 3) == 10
    assert ceil_power(1000, 2, 3) == 100


def test_parse_int_list_and_toml(tmp_path):
    """Comma lists parse to ints; a missing TOML file reads as empty."""
    assert parse_int_list("0, 3,5") == [0, 3, 5]
    with pytest.raises(ValueError, match="comma-separated"):
        parse_int_list("0,x")
    assert load_toml(tmp_path / "none.toml") == {}
    path = tmp_path / "run.toml"
    path.write_text("sizes = [10, 20]\ntrials = 2\n")
    assert load_toml(path) == {"sizes": [10, 20], "trials": 2}
