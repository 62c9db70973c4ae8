import json

import pytest
from click.testing import CliRunner

from ftbfs.cli import cli
from ftbfs.sdk.graph import Graph, read_graph, write_graph


@pytest.fixture
def runner():
    return CliRunner()


def _json(result):
    return json.loads(result.stdout)


def test_gen_cycle(runner, tmp_path):
    """gen writes the C5 edge list and reports it."""
    out = tmp_path / "c5.txt"
    result = runner.invoke(cli, ["gen", "--model", "cycle", "--n", "5", "--output", str(out)])
    assert result.exit_code == 0, result.output
    assert read_graph(out).edges == ((0, 1), (0, 4), (1, 2), (2, 3), (3, 4))
    assert _json(result)["m"] == 5


def test_gen_rejects_p_for_cycle(runner, tmp_path):
    """Passing p to a non-gnp model is an input error."""
    result = runner.invoke(cli, ["gen", "--model", "cycle", "--n", "5", "--p", "0.5",
                                 "--output", str(tmp_path / "c5.txt")])
    assert result.exit_code == 2
    assert "only applies to the gnp model" in result.stderr


def test_build_diamond_single_source(runner, tmp_path, diamond, graph_file):
    """The dual structure of DIAMOND from 0 keeps all four edges."""
    src = graph_file(diamond, "diamond.txt")
    out = tmp_path / "h.txt"
    result = runner.invoke(cli, ["build", "--input", str(src), "--sources", "0", "--k", "2",
                                 "--mode", "edge", "--output", str(out)])
    assert result.exit_code == 0, result.output
    assert read_graph(out).m == 4
    report = _json(result)
    assert report["edges"] == 4
    assert (tmp_path / "h.txt.assignments.json").exists()


def test_build_diamond_two_sources(runner, tmp_path, diamond, graph_file):
    """S={0,3}, k=1 also keeps all four edges."""
    src = graph_file(diamond, "diamond.txt")
    out = tmp_path / "h.txt"
    sidecar = tmp_path / "side.json"
    result = runner.invoke(cli, ["build", "--input", str(src), "--sources", "0,3", "--k", "1",
                                 "--output", str(out), "--sidecar", str(sidecar)])
    assert result.exit_code == 0, result.output
    assert read_graph(out).m == 4
    assert json.loads(sidecar.read_text())["params"]["sources"] == [0, 3]


def test_build_missing_input(runner, tmp_path):
    """A missing input file exits 2 and writes nothing."""
    out = tmp_path / "h.txt"
    result = runner.invoke(cli, ["build", "--input", str(tmp_path / "nope.txt"), "--sources", "0",
                                 "--output", str(out)])
    assert result.exit_code == 2
    assert not out.exists()


def test_build_bad_source_is_input_error(runner, tmp_path, diamond, graph_file):
    """An out-of-range source is reported on stderr with exit 2."""
    src = graph_file(diamond)
    result = runner.invoke(cli, ["build", "--input", str(src), "--sources", "9",
                                 "--output", str(tmp_path / "h.txt")])
    assert result.exit_code == 2
    assert "Error:" in result.stderr
    assert "out of range" in result.stderr


def test_build_malformed_graph(runner, tmp_path):
    """Parse errors surface with their line number."""
    src = tmp_path / "bad.txt"
    src.write_text("3 2 undirected\n0 1\n0 1\n")
    result = runner.invoke(cli, ["build", "--input", str(src), "--sources", "0",
                                 "--output", str(tmp_path / "h.txt")])
    assert result.exit_code == 2
    assert "line 3" in result.stderr


def test_verify_own_output_passes(runner, tmp_path, twodiv, graph_file):
    """A built structure verifies against its own input."""
    src = graph_file(twodiv)
    out = tmp_path / "h.txt"
    runner.invoke(cli, ["build", "--input", str(src), "--sources", "0", "--output", str(out)])
    result = runner.invoke(cli, ["verify", "--input", str(src), "--subgraph", str(out),
                                 "--sources", "0", "--k", "2"])
    assert result.exit_code == 0, result.output
    report = _json(result)
    assert report["status"] == "pass"
    assert report["sampling"] == "exhaustive"
    assert report["size"]["edges"] == read_graph(out).m


def test_verify_corrupted_subgraph_fails(runner, tmp_path, p4, graph_file):
    """A subgraph missing a tree edge exits 1 with witnesses on stdout."""
    src = graph_file(p4, "p4.txt")
    h = write_graph(tmp_path / "h.txt", Graph(4, [(0, 1), (1, 2)]))
    result = runner.invoke(cli, ["verify", "--input", str(src), "--subgraph", str(h),
                                 "--sources", "0", "--k", "1"])
    assert result.exit_code == 1
    report = _json(result)
    assert report["status"] == "fail"
    assert report["witnesses"][0] == {"failure": [], "source": 0, "target": 3, "distG": 3, "distH": None}


def test_verify_sampling_disclosed(runner, tmp_path, twodiv, graph_file):
    """Sampled runs say so in the report."""
    src = graph_file(twodiv)
    result = runner.invoke(cli, ["verify", "--input", str(src), "--subgraph", str(src), "--sources", "0",
                                 "--sampling", "sample:1000:seed=9"])
    assert result.exit_code == 0, result.output
    assert _json(result)["sampling"] == "sample:1000:seed=9"


def test_verify_bad_sampling(runner, diamond, graph_file):
    """A malformed sampling flag is an input error."""
    src = graph_file(diamond)
    result = runner.invoke(cli, ["verify", "--input", str(src), "--subgraph", str(src), "--sources", "0",
                                 "--sampling", "most"])
    assert result.exit_code == 2
    assert "Sampling must be" in result.stderr


def test_analyze_single_source(runner, twodiv, graph_file):
    """analyze reports every check passing on a single-source build."""
    src = graph_file(twodiv)
    result = runner.invoke(cli, ["analyze", "--input", str(src), "--sources", "0", "--table"])
    assert result.exit_code == 0, result.output
    report = _json(result)
    assert report["status"] == "pass"
    assert "lastLegDisjointness" in report["summary"]
    assert "Structural checks" in result.stderr


def test_spanner_plan_and_verify(runner, tmp_path, graph_file):
    """spanner writes H, prints the plan and optionally runs the stretch oracle."""
    g = Graph(6, [(0, i) for i in range(1, 6)] + [(1, 2), (3, 4)])
    src = graph_file(g)
    out = tmp_path / "h.txt"
    result = runner.invoke(cli, ["spanner", "--input", str(src), "--sigma", "auto", "--seed", "1",
                                 "--output", str(out), "--verify"])
    assert result.exit_code == 0, result.output
    data = _json(result)
    assert data["plan"]["sigma"] == 2
    assert data["stretch"]["status"] == "pass"
    assert read_graph(out).m == data["plan"]["totalEdges"]


def test_spanner_rejects_bad_sigma(runner, c5, graph_file):
    """sigma must be auto or a positive integer."""
    src = graph_file(c5)
    result = runner.invoke(cli, ["spanner", "--input", str(src), "--sigma", "zero"])
    assert result.exit_code == 2


def test_log_level_option(runner, c5, graph_file, tmp_path):
    """--log-level is accepted ahead of any command."""
    src = graph_file(c5)
    result = runner.invoke(cli, ["--log-level", "debug", "build", "--input", str(src), "--sources", "0",
                                 "--output", str(tmp_path / "h.txt")])
    assert result.exit_code == 0, result.output
    assert _json(result)["edges"] == 5


def test_build_is_reproducible(runner, tmp_path, graph_file):
    """Two identical runs produce byte-identical artifacts."""
    src = tmp_path / "g.txt"
    runner.invoke(cli, ["gen", "--model", "gnp", "--n", "14", "--p", "0.3", "--seed", "3", "--output", str(src)])
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / f"{name}.txt"
        result = runner.invoke(cli, ["build", "--input", str(src), "--sources", "0,5", "--output", str(out),
                                     "--workers", "2" if name == "b" else "1"])
        assert result.exit_code == 0, result.output
        outputs.append((out.read_text(), (tmp_path / f"{name}.txt.assignments.json").read_text()))
    assert outputs[0] == outputs[1]
