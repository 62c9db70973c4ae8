from pathlib import Path

import click
from rich.table import Table

from ftbfs.cli.common import MODE_CHOICE, console, emit, guarded
from ftbfs.sdk.config import calibration_value
from ftbfs.sdk.experiments import run_scale, write_scale_csv
from ftbfs.sdk.graph import FailureMode, GraphModel
from ftbfs.sdk.utils import load_toml, parse_int_list

FIELDS = ("sizes", "trials", "model", "p", "k", "sigma", "mode", "seed")


def _merge_config(config_path, flags: dict) -> dict:
    """Explicit flags win over run-config values, which win over calibration defaults."""
    values = {}
    if config_path:
        values = {key: v for key, v in load_toml(Path(config_path)).items() if key in FIELDS}
    values.update({key: v for key, v in flags.items() if v is not None})
    sizes = values.get("sizes", calibration_value("scale.default_sizes"))
    values["sizes"] = parse_int_list(sizes) if isinstance(sizes, str) else [int(x) for x in sizes]
    values.setdefault("trials", int(calibration_value("scale.default_trials")))
    values.setdefault("model", GraphModel.GNP.value)
    values.setdefault("p", "auto")
    values.setdefault("k", 2)
    values.setdefault("sigma", 1)
    values.setdefault("mode", FailureMode.EDGE.value)
    values.setdefault("seed", 0)
    return values


def _parse_p(value):
    if value is None or value == "auto": return value
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ValueError(f"p must be 'auto' or a probability, got '{value}'")


@click.command("scale")
@click.option("--sizes", default=None, help="Ascending comma-separated vertex counts")
@click.option("--trials", type=int, default=None)
@click.option("--model", type=click.Choice([m.value for m in GraphModel]), default=None)
@click.option("--p", "p", default=None, help="Edge probability or 'auto'")
@click.option("--k", type=click.IntRange(1, 2), default=None)
@click.option("--sigma", type=int, default=None, help="Sources 0..sigma-1")
@click.option("--mode", type=MODE_CHOICE, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="CSV table to write")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="TOML run config; flags override its keys")
@click.option("--table", "show_table", is_flag=True, help="Also print the per-n summary on stderr")
@click.option("--workers", type=click.IntRange(min=1), default=None)
@guarded
def scale(sizes, trials, model, p, k, sigma, mode, seed, output, config_path, show_table, workers):
    """Measure |E(H)| against the size bound over a generated corpus."""
    cfg = _merge_config(config_path, {"sizes": sizes, "trials": trials, "model": model, "p": p,
                                      "k": k, "sigma": sigma, "mode": mode, "seed": seed})
    model = GraphModel(cfg["model"])
    prob = _parse_p(cfg["p"]) if model == GraphModel.GNP else None
    table = run_scale(cfg["sizes"], int(cfg["trials"]), int(cfg["k"]), int(cfg["sigma"]), model,
                      prob, FailureMode(cfg["mode"]), int(cfg["seed"]), workers)
    result = table.to_dict()
    if output:
        result["csv"] = str(write_scale_csv(table, output))
    emit(result)
    if show_table:
        summary = Table(title=f"Size ratios (k={table.k}, sigma={table.sigma})", header_style="bold magenta")
        summary.add_column("n", style="cyan")
        summary.add_column("mean ratio", style="green")
        summary.add_column("max ratio", style="yellow")
        for n, row in table.per_n().items():
            summary.add_row(str(n), f"{row['meanRatio']:.4f}", f"{row['maxRatio']:.4f}")
        console.print(summary)
