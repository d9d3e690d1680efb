"""export-lp command."""
import click

from streampart.commands.common import emit, load_problem, output_options, pass_state
from streampart.services.milp import check_lp, export_milp


@click.command("export-lp")
@click.argument("problem_file", type=click.Path(exists=True, dir_okay=False))
@output_options
@pass_state
def export_lp_command(state, problem_file: str, out, json_output: bool):
    """Write the partitioning problem as a MILP in LP text format."""
    state.json_output = state.json_output or json_output
    problem = load_problem(problem_file)
    text = export_milp(problem)
    summary = check_lp(text)
    data = {"variables": summary.variable_count, "rows": summary.row_count, "binaries": len(summary.binaries)}
    if out is None and not json_output:
        click.echo(text, nl=False)
        return
    if not json_output:
        data_line = f"{summary.variable_count} variables, {summary.row_count} rows, {len(summary.binaries)} binaries"
        emit(state, False, data, f"wrote {out}: {data_line}\n", out, file_text=text)
        return
    emit(state, True, dict(data, lp=text) if out is None else data, "", out, file_text=text)
