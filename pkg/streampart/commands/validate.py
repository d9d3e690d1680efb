"""validate command."""
import click

from streampart.commands.common import emit, load_problem, output_options, pass_state
from streampart.exceptions import InvalidProblemError
from streampart.services.rates import repetition_vector
from streampart.services.validation import has_errors, validate_problem


def _rates_summary(repetition) -> list:
    lines = ["repetition vector (firings per iteration):"]
    for pid, count in repetition.items():
        lines.append(f"  {pid:<16} q = {count:<6} fires at {count}*lambda")
    return lines


@click.command("validate")
@click.argument("problem_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--verbose", "-v", is_flag=True, help="Also print the repetition vector.")
@output_options
@pass_state
def validate_command(state, problem_file: str, verbose: bool, out, json_output: bool):
    """Check a problem file for errors and warnings."""
    state.json_output = state.json_output or json_output
    problem = load_problem(problem_file, validate=False)
    diagnostics = validate_problem(problem)
    if has_errors(diagnostics):
        raise InvalidProblemError(diagnostics)

    repetition = repetition_vector(problem)
    data = {
        "valid": True,
        "diagnostics": [
            {"severity": d.severity, "location": d.location, "message": d.message} for d in diagnostics
        ],
        "repetition_vector": dict(repetition.items()),
    }
    lines = [str(d) for d in diagnostics]
    if verbose:
        lines.extend(_rates_summary(repetition))
    lines.append("OK")
    emit(state, json_output, data, "\n".join(lines) + "\n", out)
