"""simulate command."""
import io

import click
import pandas as pd

from streampart.commands.common import emit, load_assignment, load_problem, output_options, pass_state
from streampart.models import SimConfig
from streampart.schemas import ComparisonSchema, SimReportSchema
from streampart.services.evaluator import evaluate
from streampart.services.simulator import compare, simulate

TRACE_COLUMNS = ["time", "event_kind", "entity_id", "detail"]


def trace_csv(report) -> str:
    """Trace records as CSV text with columns time,event_kind,entity_id,detail."""
    frame = pd.DataFrame(
        [(r.time, r.event_kind, r.entity_id, r.detail) for r in report.trace],
        columns=TRACE_COLUMNS,
    )
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format="%.9f", lineterminator="\n")
    return buffer.getvalue()


def _summary(report, comparison) -> str:
    lines = [
        f"measured: {report.measured_throughput:.6g} iterations/s "
        f"({report.sink_firings} sink firings in {report.window:g}s, {report.event_count} events)",
        f"predicted: {comparison.predicted:.6g} iterations/s, relative error {comparison.relative_error:.4f} "
        f"-> {comparison.verdict.upper()} (threshold {comparison.threshold:g})",
    ]
    for key in sorted(report.utilization):
        lines.append(f"  {key:<32} util {report.utilization[key]:6.1%}")
    for cid in sorted(report.channels):
        counters = report.channels[cid]
        lines.append(
            f"  channel {cid:<24} produced {counters.produced} consumed {counters.consumed} "
            f"occupancy {counters.occupancy} (mean {report.mean_occupancy[cid]:.2f})"
        )
    return "\n".join(lines) + "\n"


@click.command("simulate")
@click.argument("problem_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--assignment", "assignment_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--duration", type=click.FloatRange(min=0, min_open=True), default=1000.0, show_default=True,
              help="Virtual seconds to simulate.")
@click.option("--warmup", type=float, default=None, help="Virtual seconds discarded (default duration/10).")
@click.option("--buffer", "buffer_tokens", type=int, default=None, help="Per-channel FIFO capacity in tokens.")
@click.option("--trace", "trace_file", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the event trace as CSV.")
@click.option("--threshold", type=float, default=None, help="Relative error accepted by the comparison.")
@click.option("--jitter", type=float, default=0.0, help="Relative service-time jitter (0 disables).")
@click.option("--seed", type=int, default=0, help="Seed for the jitter generator.")
@output_options
@pass_state
def simulate_command(state, problem_file: str, assignment_file: str, duration: float, warmup, buffer_tokens,
                     trace_file, threshold, jitter: float, seed: int, out, json_output: bool):
    """Simulate an assignment and compare the measured throughput with the prediction."""
    state.json_output = state.json_output or json_output
    problem = load_problem(problem_file)
    assignment = load_assignment(assignment_file)
    sim_config = SimConfig(
        duration=duration,
        warmup=warmup,
        buffer_tokens=buffer_tokens if buffer_tokens is not None else state.config.BUFFER_TOKENS,
        trace=trace_file is not None,
        jitter=jitter,
        seed=seed,
    )
    evaluation = evaluate(problem, assignment, tolerance=state.config.BINDING_TOLERANCE)
    report = simulate(problem, assignment, sim_config, evaluation=evaluation)
    comparison = compare(evaluation, report, threshold if threshold is not None else state.config.COMPARE_THRESHOLD)

    data = SimReportSchema().dump(report)
    data["comparison"] = ComparisonSchema().dump(comparison)
    if trace_file is not None:
        state.stage(trace_file, trace_csv(report))
    emit(state, json_output, data, _summary(report, comparison), out)
