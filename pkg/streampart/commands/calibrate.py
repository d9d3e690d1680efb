"""calibrate command."""
import click

from streampart.commands.common import emit, load_problem, output_options, pass_state, read_text
from streampart.services.calibrator import calibrate
from streampart.services.problem_io import problem_to_dict, serialize_problem


def _changes(base, calibrated) -> list:
    lines = []
    for before, after in zip(base.processes, calibrated.processes):
        if before.sw_throughput != after.sw_throughput:
            lines.append(f"  process {after.id:<16} sw_throughput {before.sw_throughput} -> {after.sw_throughput}")
    for before, after in zip(base.channels, calibrated.channels):
        if before.bandwidth_cap != after.bandwidth_cap:
            lines.append(f"  channel {after.id:<16} bandwidth_cap {before.bandwidth_cap} -> {after.bandwidth_cap}")
    return lines


@click.command("calibrate")
@click.argument("measurements_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--problem", "problem_file", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Base problem file.")
@output_options
@pass_state
def calibrate_command(state, measurements_file: str, problem_file: str, out, json_output: bool):
    """Set measured sw_throughput and bandwidth_cap values from a profiling CSV."""
    state.json_output = state.json_output or json_output
    base = load_problem(problem_file, validate=False)
    calibrated = calibrate(read_text(measurements_file), base)
    summary = "\n".join(["calibrated:"] + _changes(base, calibrated)) + "\n"
    emit(state, json_output, problem_to_dict(calibrated), summary, out, file_text=serialize_problem(calibrated))
