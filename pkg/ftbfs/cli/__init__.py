import logging

import click
from rich.console import Console
from rich.logging import RichHandler

from ftbfs.cli.graphs import gen
from ftbfs.cli.scale import scale
from ftbfs.cli.spanner import spanner
from ftbfs.cli.structures import analyze, build, verify
from ftbfs.sdk.config import get_log_level

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


@click.group()
@click.option("--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False), default=None,
              help="Log level for stderr output (default: FTBFS_LOG_LEVEL or WARNING)")
def cli(log_level):
    """Fault-tolerant BFS structures (ftbfs)"""
    level = (log_level or get_log_level()).upper()
    logging.basicConfig(format="%(message)s", datefmt="[%X]",
                        handlers=[RichHandler(console=Console(stderr=True), show_path=False)])
    logging.getLogger("ftbfs").setLevel(level)


cli.add_command(gen)
cli.add_command(build)
cli.add_command(verify)
cli.add_command(analyze)
cli.add_command(spanner)
cli.add_command(scale)

if __name__ == "__main__":
    cli()
