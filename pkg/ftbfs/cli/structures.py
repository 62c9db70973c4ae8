import sys

import click

from ftbfs.cli.common import MODE_CHOICE, console, emit, guarded, sources_option, status_table
from ftbfs.sdk.analysis import analyze_structure
from ftbfs.sdk.builder import build_ft_mbfs, structure_stats, subgraph_stats, write_structure
from ftbfs.sdk.graph import FailureMode, read_graph
from ftbfs.sdk.verifier import SamplingSpec, verify_structure

K_CHOICE = click.IntRange(1, 2)


@click.command("build")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Edge-list file of G")
@sources_option()
@click.option("--k", type=K_CHOICE, default=2, show_default=True, help="Number of tolerated failures")
@click.option("--mode", type=MODE_CHOICE, default="edge", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), required=True, help="Edge-list file for H")
@click.option("--sidecar", type=click.Path(dir_okay=False), default=None,
              help="Assignment JSON (default: <output>.assignments.json)")
@click.option("--workers", type=click.IntRange(min=1), default=None,
              help="Parallel target partitions (default: FTBFS_WORKERS or 1)")
@guarded
def build(input_path, sources, k, mode, output, sidecar, workers):
    """Build a fault-tolerant BFS (one source) or MBFS (several sources) subgraph."""
    g = read_graph(input_path)
    st = build_ft_mbfs(g, sources, k, FailureMode(mode), workers)
    h_path, sidecar_path = write_structure(st, output, sidecar)
    report = structure_stats(st)
    console.print(f"[green]Wrote[/green] {report.edges} edges to {h_path} "
                  f"(assignments in {sidecar_path})")
    emit(report.to_dict())


@click.command("verify")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Edge-list file of G")
@click.option("--subgraph", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Edge-list file of H")
@sources_option()
@click.option("--k", type=K_CHOICE, default=2, show_default=True)
@click.option("--mode", type=MODE_CHOICE, default="edge", show_default=True)
@click.option("--sampling", default="exhaustive", show_default=True,
              help="exhaustive | sample:<count>:seed=<s>")
@click.option("--workers", type=click.IntRange(min=1), default=None)
@guarded
def verify(input_path, subgraph, sources, k, mode, sampling, workers):
    """Check that H preserves every source's BFS distances under all failure sets."""
    g, h = read_graph(input_path), read_graph(subgraph)
    spec = SamplingSpec.parse(sampling)
    size = subgraph_stats(h, len(sources), k)
    report = verify_structure(g, h, sources, k, FailureMode(mode), spec, workers, size)
    emit(report.to_dict())
    if not report.passed:
        console.print(f"[red]FAIL[/red] {len(report.witnesses)} witnesses over {report.checked} failure sets")
        sys.exit(1)
    console.print(f"[green]PASS[/green] {report.checked} failure sets ({spec})")


@click.command("analyze")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Edge-list file of G")
@sources_option()
@click.option("--k", type=K_CHOICE, default=2, show_default=True)
@click.option("--mode", type=MODE_CHOICE, default="edge", show_default=True)
@click.option("--table", "show_table", is_flag=True, help="Also print a summary table on stderr")
@click.option("--workers", type=click.IntRange(min=1), default=None)
@guarded
def analyze(input_path, sources, k, mode, show_table, workers):
    """Build the structure and run the structural checks on its contributing paths."""
    g = read_graph(input_path)
    st = build_ft_mbfs(g, sources, k, FailureMode(mode), workers)
    report = analyze_structure(st)
    emit(report.to_dict())
    if show_table:
        console.print(status_table("Structural checks", report.summary()))
    if not report.passed:
        sys.exit(1)
