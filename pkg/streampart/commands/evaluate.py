"""evaluate command."""
import click

from streampart.commands.common import emit, load_assignment, load_problem, output_options, pass_state
from streampart.schemas import EvaluationSchema
from streampart.services.evaluator import evaluate, explain


@click.command("evaluate")
@click.argument("problem_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--assignment", "assignment_file", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Assignment file to evaluate.")
@output_options
@pass_state
def evaluate_command(state, problem_file: str, assignment_file: str, out, json_output: bool):
    """Predict the throughput of one assignment and show its binding constraints."""
    state.json_output = state.json_output or json_output
    problem = load_problem(problem_file)
    assignment = load_assignment(assignment_file)
    evaluation = evaluate(problem, assignment, tolerance=state.config.BINDING_TOLERANCE)
    emit(state, json_output, EvaluationSchema().dump(evaluation), explain(evaluation), out)
