import functools
import sys

import click
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from ftbfs.sdk.graph import FailureMode
from ftbfs.sdk.utils import dump_json, parse_int_list

console = Console(stderr=True)

MODE_CHOICE = click.Choice([m.value for m in FailureMode])


def emit(data: dict):
    """The single JSON document a command writes to stdout."""
    click.echo(dump_json(data))


def guarded(fn):
    """Input and validation errors become a red message on stderr and exit 2."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ValueError, FileNotFoundError) as e:
            console.print(f"[red]Error:[/red] {escape(str(e))}", soft_wrap=True)
            sys.exit(2)
    return wrapper


def sources_option(required: bool = True):
    return click.option("--sources", required=required, callback=_parse_sources,
                        help="Comma-separated source vertices, e.g. 0,3")


def _parse_sources(ctx, param, value):
    if value is None: return None
    try:
        return parse_int_list(value)
    except ValueError as e:
        raise click.BadParameter(str(e))


def status_table(title: str, rows: dict) -> Table:
    table = Table(title=title, show_header=True, header_style="bold magenta")
    table.add_column("Check", style="cyan")
    table.add_column("Pass", style="green")
    table.add_column("Fail", style="red")
    table.add_column("Skipped", style="dim")
    for name, row in rows.items():
        table.add_row(name, str(row["pass"]), str(row["fail"]), str(row["skipped"]))
    return table
