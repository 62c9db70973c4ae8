import csv
import io
import json
import math

import pytest
from click.testing import CliRunner

from ftbfs.cli import cli
from ftbfs.sdk.builder import size_bound
from ftbfs.sdk.experiments import CSV_COLUMNS, auto_probability, run_scale
from ftbfs.sdk.graph import GraphModel


def test_scale_rows_and_bounds(isolated_config):
    """Three sizes by three trials gives nine rows, each with a finite ratio."""
    table = run_scale([20, 40, 80], 3, k=2, sigma=1, model=GraphModel.GNP, p=0.15)
    assert len(table.rows) == 9
    assert [r.n for r in table.rows] == [20] * 3 + [40] * 3 + [80] * 3
    assert [r.seed for r in table.rows[:3]] == [0, 1, 2]
    assert all(math.isfinite(r.ratio) for r in table.rows)
    assert table.rows[0].bound == pytest.approx(20 ** (5 / 3))
    assert set(table.per_n()) == {20, 40, 80}


def test_scale_bound_families(isolated_config):
    """k=1 uses n^(3/2); four sources at k=2 use sigma^(1/3) n^(5/3)."""
    one = run_scale([16], 1, k=1, sigma=1, model=GraphModel.CYCLE)
    assert one.rows[0].bound == pytest.approx(16 ** 1.5)
    four = run_scale([16], 1, k=2, sigma=4, model=GraphModel.CYCLE)
    assert four.rows[0].bound == pytest.approx(size_bound(16, 2, 4))
    assert four.rows[0].edges == 16


def test_scale_validation(isolated_config):
    """Sizes must ascend, trials be positive and sigma fit the smallest n."""
    with pytest.raises(ValueError, match="strictly ascending"):
        run_scale([40, 20], 1)
    with pytest.raises(ValueError, match="trials"):
        run_scale([20], 0)
    with pytest.raises(ValueError, match="sigma"):
        run_scale([5, 10], 1, sigma=6)


def test_auto_probability(isolated_config):
    """p = min(1, c ln n / n) with c from calibration."""
    assert auto_probability(100) == pytest.approx(3.0 * math.log(100) / 100)
    assert auto_probability(3) == 1.0


def test_csv_and_summary(isolated_config):
    """CSV carries the fixed header; the summary flags strict growth of mean ratios."""
    table = run_scale([10, 20], 2, k=2, model=GraphModel.GNP, p="auto")
    rows = list(csv.DictReader(io.StringIO(table.to_csv())))
    assert list(rows[0]) == CSV_COLUMNS
    assert len(rows) == 4
    data = table.to_dict()
    assert set(data["summary"]) == {"10", "20"}
    means = [data["summary"][n]["meanRatio"] for n in ("10", "20")]
    assert data["monotoneGrowth"] == (means[0] < means[1])


def test_scale_cli_with_config_file(isolated_config, tmp_path):
    """Run-config keys apply and explicit flags override them; the CSV is written."""
    run = tmp_path / "run.toml"
    run.write_text('sizes = [12, 24]\ntrials = 3\nmodel = "gnp"\np = 0.3\nk = 1\n')
    out = tmp_path / "scale.csv"
    result = CliRunner().invoke(cli, ["scale", "--config", str(run), "--trials", "1",
                                      "--output", str(out), "--table"])
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data["k"] == 1
    assert [r["n"] for r in data["rows"]] == [12, 24]
    assert out.read_text().splitlines()[0] == ",".join(CSV_COLUMNS)
    assert "Size ratios" in result.stderr


def test_scale_cli_defaults_from_calibration(isolated_config):
    """Without flags, sizes and trials come from calibration."""
    result = CliRunner().invoke(cli, ["scale", "--model", "cycle"])
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert [r["n"] for r in data["rows"]] == [10, 20]


def test_scale_cli_bad_sizes(isolated_config):
    """Descending sizes are an input error."""
    result = CliRunner().invoke(cli, ["scale", "--sizes", "20,10"])
    assert result.exit_code == 2
    assert "strictly ascending" in result.stderr


@pytest.mark.slow
@pytest.mark.parametrize("k", [2, 1])
def test_scale_corpus_stays_within_guard(monkeypatch, k):
    """The default G(n, auto) corpus keeps every ratio under the packaged guard without steady growth."""
    monkeypatch.delenv("FTBFS_CALIBRATION", raising=False)
    table = run_scale([25, 50, 100, 200], 5, k=k, sigma=1, model=GraphModel.GNP, p="auto")
    assert len(table.rows) == 20
    assert all(r.withinGuard for r in table.rows), [(r.n, r.ratio) for r in table.rows]
    assert not table.monotone_growth
