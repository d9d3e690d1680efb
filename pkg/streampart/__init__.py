"""streampart command-line application factory."""
import json
import logging
import os
import sys
from typing import Callable, Dict, List, Optional, Type

import click

from streampart.config import config
from streampart.exceptions import InvalidInputError, InvalidProblemError, StreampartError

__version__ = "1.0.0"

logger = logging.getLogger(__name__)


class CliState:
    """Per-invocation state handed to every command through the click context."""

    def __init__(self, settings):
        self.config = settings
        self.json_output = False
        self._staged: Dict[str, str] = {}

    def stage(self, path: str, text: str) -> None:
        """Queue an output file; files are written only once the command succeeded."""
        self._staged[path] = text

    def write_staged(self) -> None:
        for path, text in self._staged.items():
            _write_atomic(path, text)
            logger.info("wrote %s", path)
        self._staged.clear()

    def discard_staged(self) -> None:
        self._staged.clear()


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    tmp = os.path.join(directory, f".{os.path.basename(path)}.{os.getpid()}.tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    os.replace(tmp, path)


class StreampartGroup(click.Group):
    """Command group with a registry of exception handlers returning exit codes."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.error_handlers: Dict[Type[BaseException], Callable] = {}

    def errorhandler(self, exc_class: Type[BaseException]):
        def decorator(handler: Callable) -> Callable:
            self.error_handlers[exc_class] = handler
            return handler
        return decorator

    def handle_error(self, error: BaseException, state: CliState) -> int:
        for cls in type(error).__mro__:
            if cls in self.error_handlers:
                return self.error_handlers[cls](error, state)
        raise error


def create_cli(config_name: Optional[str] = None) -> StreampartGroup:
    """Create and configure the command-line application."""
    config_name = config_name or os.getenv("STREAMPART_CONFIG", "default")
    settings = config[config_name]()

    @click.group(cls=StreampartGroup, context_settings={"help_option_names": ["-h", "--help"]})
    @click.option("--version", is_flag=True, expose_value=False, is_eager=True, callback=_print_version,
                  help="Show the tool and file format versions and exit.")
    @click.option("--json", "json_output", is_flag=True, expose_value=False,
                  help="Machine-readable output (every command accepts it too).")
    def cli():
        """Plan HW/SW partitions of streaming applications for CPU+FPGA platforms."""

    cli.settings = settings
    register_cli_commands(cli)
    register_error_handlers(cli)
    return cli


def _formats() -> Dict[str, str]:
    from streampart.services.milp import LP_FORMAT_VERSION
    from streampart.services.problem_io import FORMAT_VERSION

    return {"problem": FORMAT_VERSION, "lp": LP_FORMAT_VERSION}


def _print_version(ctx: click.Context, param: click.Parameter, value: bool) -> None:
    if not value or ctx.resilient_parsing:
        return
    formats = _formats()
    state = ctx.find_object(CliState)
    if state is not None and state.json_output:
        click.echo(json.dumps({"version": __version__, "formats": formats}, indent=2, sort_keys=True))
    else:
        prog = ctx.find_root().info_name
        click.echo(f"{prog} {__version__} (problem format {formats['problem']}, lp format {formats['lp']})")
    ctx.exit()


def register_cli_commands(cli: click.Group) -> None:
    """Register the subcommands."""
    from streampart.commands.calibrate import calibrate_command
    from streampart.commands.evaluate import evaluate_command
    from streampart.commands.export_lp import export_lp_command
    from streampart.commands.optimize import optimize_command
    from streampart.commands.simulate import simulate_command
    from streampart.commands.validate import validate_command

    cli.add_command(validate_command)
    cli.add_command(evaluate_command)
    cli.add_command(optimize_command)
    cli.add_command(simulate_command)
    cli.add_command(export_lp_command)
    cli.add_command(calibrate_command)


def _json_error(error: BaseException, exit_code: int, **extra) -> None:
    payload = {"error": {"type": type(error).__name__, "message": str(error), "exit_code": exit_code, **extra}}
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


def register_error_handlers(cli: StreampartGroup) -> None:
    """Map exceptions to exit codes and error output."""

    @cli.errorhandler(click.UsageError)
    def usage_error(error, state):
        error.show()
        if state.json_output:
            _json_error(error, 1)
        return InvalidInputError.exit_code

    @cli.errorhandler(click.ClickException)
    def click_error(error, state):
        error.show()
        if state.json_output:
            _json_error(error, 1)
        return InvalidInputError.exit_code

    @cli.errorhandler(click.Abort)
    def aborted(error, state):
        click.echo("aborted", err=True)
        return StreampartError.exit_code

    @cli.errorhandler(InvalidProblemError)
    def invalid_problem(error, state):
        for diagnostic in error.diagnostics:
            click.echo(str(diagnostic), err=True)
        if state.json_output:
            _json_error(error, error.exit_code, diagnostics=[
                {"severity": d.severity, "location": d.location, "message": d.message} for d in error.diagnostics
            ])
        return error.exit_code

    @cli.errorhandler(StreampartError)
    def streampart_error(error, state):
        click.echo(f"error: {error}", err=True)
        if state.json_output:
            _json_error(error, error.exit_code)
        return error.exit_code

    @cli.errorhandler(Exception)
    def internal_error(error, state):
        logger.debug("internal error", exc_info=error)
        click.echo(f"internal error: {type(error).__name__}: {error}", err=True)
        if state.json_output:
            _json_error(error, StreampartError.exit_code)
        return StreampartError.exit_code


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def run(argv: Optional[List[str]] = None, config_name: Optional[str] = None) -> int:
    """Run one command and return its exit code (0, 1, 2 or 3)."""
    args = list(sys.argv[1:] if argv is None else argv)
    cli = create_cli(config_name)
    configure_logging(cli.settings.LOG_LEVEL)
    state = CliState(cli.settings)
    state.json_output = "--json" in args
    try:
        rv = cli.main(args=args, prog_name=cli.settings.APP_NAME, obj=state, standalone_mode=False)
        state.write_staged()
    except Exception as e:
        state.discard_staged()
        return cli.handle_error(e, state)
    return rv if isinstance(rv, int) else 0


def main() -> None:
    sys.exit(run())
