import click

from ftbfs.cli.common import console, emit, guarded
from ftbfs.sdk.graph import GraphModel, gen_graph, write_graph


@click.command("gen")
@click.option("--model", type=click.Choice([m.value for m in GraphModel]), required=True,
              help="Graph family")
@click.option("--n", "n", type=int, required=True, help="Number of vertices")
@click.option("--p", "p", type=float, default=None, help="Edge probability (gnp only)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--directed", is_flag=True, help="Generate a directed graph")
@click.option("--output", type=click.Path(dir_okay=False), required=True, help="Edge-list file to write")
@guarded
def gen(model, n, p, seed, directed, output):
    """Generate a graph as an edge-list file."""
    g = gen_graph(GraphModel(model), n, p, seed, directed)
    path = write_graph(output, g)
    console.print(f"[green]Wrote[/green] {g!r} to {path}")
    emit({"model": model, "n": g.n, "m": g.m, "directed": g.directed, "seed": seed,
          "p": p, "output": str(path)})
