import sys

import click

from ftbfs.cli.common import console, emit, guarded
from ftbfs.sdk.graph import read_graph, write_graph
from ftbfs.sdk.spanner import build_additive_spanner, verify_spanner_stretch
from ftbfs.sdk.verifier import SamplingSpec


def _parse_sigma(ctx, param, value):
    if value is None or value == "auto": return None
    try:
        sigma = int(value)
    except ValueError:
        raise click.BadParameter(f"expected 'auto' or a positive integer, got '{value}'")
    if sigma < 1:
        raise click.BadParameter(f"sigma must be at least 1, got {sigma}")
    return sigma


@click.command("spanner")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Edge-list file of an undirected G")
@click.option("--sigma", default="auto", show_default=True, callback=_parse_sigma,
              help="Sampling parameter sigma; auto = ceil(n^(1/4))")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--k", type=click.IntRange(1, 2), default=2, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Edge-list file for H")
@click.option("--verify", "run_verify", is_flag=True, help="Run the +2 stretch oracle on the result")
@click.option("--sampling", default="exhaustive", show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=None)
@guarded
def spanner(input_path, sigma, seed, k, output, run_verify, sampling, workers):
    """Build a k-edge-fault-tolerant +2 additive spanner."""
    g = read_graph(input_path)
    spec = SamplingSpec.parse(sampling)
    h, plan = build_additive_spanner(g, k, seed, sigma, workers)
    result = {"plan": plan.to_dict(g.n)}
    if output:
        result["output"] = str(write_graph(output, h))
    if not run_verify:
        emit(result)
        return
    report = verify_spanner_stretch(g, h, k, 2, spec, workers)
    result["stretch"] = report.to_dict()
    emit(result)
    if not report.passed:
        console.print(f"[red]FAIL[/red] {len(report.witnesses)} stretch witnesses")
        sys.exit(1)
    console.print(f"[green]PASS[/green] +2 stretch over {report.checked} failure sets ({spec})")
