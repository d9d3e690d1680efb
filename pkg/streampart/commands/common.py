"""Helpers shared by the subcommands."""
import functools
from typing import Optional

import click

from streampart import CliState
from streampart.exceptions import ProblemFormatError
from streampart.models import Assignment, ProblemSpec
from streampart.services.problem_io import dumps_json, parse_assignment, parse_problem
from streampart.services.validation import ensure_valid

pass_state = click.make_pass_decorator(CliState)


def output_options(func):
    """Add the --out and --json options every command accepts."""

    @click.option("--out", "out", type=click.Path(dir_okay=False, writable=True), default=None,
                  help="Write the result file here.")
    @click.option("--json", "json_output", is_flag=True, help="Print machine-readable JSON on stdout.")
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)

    return wrapper


def read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except UnicodeDecodeError as e:
        raise ProblemFormatError(f"{path}: not UTF-8 text ({e.reason})") from e


def load_problem(path: str, validate: bool = True) -> ProblemSpec:
    """Parse a problem file and, by default, reject it on validation errors."""
    try:
        problem = parse_problem(read_text(path))
    except ProblemFormatError as e:
        raise ProblemFormatError(f"{path}: {e}") from e
    if validate:
        ensure_valid(problem)
    return problem


def load_assignment(path: str) -> Assignment:
    try:
        return parse_assignment(read_text(path))
    except ProblemFormatError as e:
        raise ProblemFormatError(f"{path}: {e}") from e


def emit(state: CliState, json_output: bool, data: dict, summary: str, out: Optional[str] = None,
         file_text: Optional[str] = None) -> None:
    """Stage the result file and print either the summary or the JSON document."""
    if out is not None:
        state.stage(out, file_text if file_text is not None else dumps_json(data))
    if json_output:
        click.echo(dumps_json(data), nl=False)
    else:
        click.echo(summary, nl=not summary.endswith("\n"))
