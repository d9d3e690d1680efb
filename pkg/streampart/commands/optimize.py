"""optimize command."""
import click

from streampart.commands.common import emit, load_problem, output_options, pass_state
from streampart.models import describe_option
from streampart.schemas import SolutionSchema
from streampart.services.evaluator import explain
from streampart.services.solver import solve


def _summary(solution) -> str:
    stats = solution.stats
    lines = [f"best assignment ({stats.solver}):"]
    for pid, option in sorted(solution.assignment.replication.items()):
        lines.append(f"  {pid:<16} {describe_option(option)}")
    lines.append(explain(solution.evaluation).rstrip("\n"))
    lines.append(
        f"search: {stats.nodes_explored} nodes, {stats.nodes_pruned} pruned, "
        f"{stats.leaves_evaluated} leaves, {stats.wall_time:.3f}s"
    )
    return "\n".join(lines) + "\n"


@click.command("optimize")
@click.argument("problem_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--solver", type=click.Choice(["bnb", "exhaustive"]), default="bnb", show_default=True)
@click.option("--limit", type=click.IntRange(min=1), default=None, help="Exhaustive search-space limit.")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker processes for exhaustive search.")
@click.option("--timing", is_flag=True, help="Include wall time in the solution file.")
@output_options
@pass_state
def optimize_command(state, problem_file: str, solver: str, limit, workers, timing: bool, out, json_output: bool):
    """Find the throughput-maximal feasible assignment."""
    state.json_output = state.json_output or json_output
    problem = load_problem(problem_file)
    solution = solve(
        problem,
        solver=solver,
        limit=limit or state.config.SEARCH_LIMIT,
        workers=workers or state.config.WORKERS,
    )
    schema = SolutionSchema() if timing else SolutionSchema(exclude=("stats.wall_time",))
    emit(state, json_output, schema.dump(solution), _summary(solution), out)
