"""
CLI Main Entry Point

Provides the main Typer application, global options and the console-script
entry point.
"""

import sys
from typing import Optional, Sequence

import click
import typer

from traffic_graph.cli import data_cmd, model_cmd
from traffic_graph.cli.utils import exit_on_error
from traffic_graph.constants import EXIT_OK, EXIT_USAGE
from traffic_graph.logging import configure_logging

app = typer.Typer(
    name="tgc",
    help="Traffic graph classifier - packet- and flow-level encrypted traffic classification",
    no_args_is_help=True,
    pretty_exceptions_enable=False,
)

app.command("preprocess")(data_cmd.preprocess)
app.command("synth")(data_cmd.synth)
app.command("stats")(data_cmd.stats)
app.command("train", context_settings={"allow_extra_args": True, "ignore_unknown_options": True})(model_cmd.train)
app.command("evaluate")(model_cmd.evaluate)
app.command("export")(model_cmd.export)
app.command("info")(model_cmd.info)


@app.callback()
def main(
    log_level: str = typer.Option("INFO", "--log-level", help="DEBUG, INFO, WARNING, ERROR"),
    log_json: bool = typer.Option(False, "--log-json", help="Emit log records as JSON lines on stderr"),
) -> None:
    """
    Traffic graph classifier - packet- and flow-level encrypted traffic classification.
    """
    with exit_on_error():
        configure_logging(level=log_level, colorize=not log_json, serialize=log_json)


def run(argv: Optional[Sequence[str]] = None) -> None:
    """
    Console-script entry point

    Usage errors exit with 1 (click's own default is 2, which is reserved for
    data errors here).
    """
    try:
        code = app(args=list(argv) if argv is not None else None, standalone_mode=False)
    except click.exceptions.UsageError as e:
        e.show()
        sys.exit(EXIT_USAGE)
    except click.exceptions.Abort:
        typer.echo("Aborted", err=True)
        sys.exit(EXIT_USAGE)
    sys.exit(code if isinstance(code, int) else EXIT_OK)


if __name__ == "__main__":
    run()
