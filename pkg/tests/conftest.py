import pytest
from pathlib import Path

from ftbfs.sdk.graph import Graph, write_graph

DIAMOND_TEXT = "4 4 undirected\n0 1\n0 2\n1 3\n2 3"


@pytest.fixture
def diamond_text():
    return DIAMOND_TEXT


@pytest.fixture
def diamond():
    return Graph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])


@pytest.fixture
def c5():
    return Graph(5, [(i, (i + 1) % 5) for i in range(5)])


@pytest.fixture
def p4():
    return Graph(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def star():
    """K1,4 centred at 0."""
    return Graph(5, [(0, i) for i in range(1, 5)])


@pytest.fixture
def twodiv():
    return Graph(8, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (5, 6), (6, 4), (2, 7), (7, 4)])


@pytest.fixture
def graph_file(tmp_path):
    """Writes a Graph to an edge-list file under tmp_path and returns its path."""
    def _write(g, name="g.txt") -> Path:
        return write_graph(tmp_path / name, g)
    return _write


@pytest.fixture
def isolated_config(tmp_path, monkeypatch):
    """Clears every FTBFS_* override and points calibration at a private copy."""
    for var in ("FTBFS_WORKERS", "FTBFS_ORACLE_MAX_N", "FTBFS_LOG_LEVEL", "FTBFS_CALIBRATION"):
        monkeypatch.delenv(var, raising=False)
    calibration = tmp_path / "calibration.yaml"
    calibration.write_text(
        "ratio_guard:\n  ft_bfs: 4.0\n  ft_mbfs: 4.0\n  spanner: 4.0\n"
        "multifail_p0:\n  c: 2.0\n"
        "scale:\n  connectivity_factor: 3.0\n  default_sizes: [10, 20]\n  default_trials: 1\n"
    )
    monkeypatch.setenv("FTBFS_CALIBRATION", str(calibration))
    return calibration
