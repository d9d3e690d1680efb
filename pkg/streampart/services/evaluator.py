"""Closed-form steady-state throughput evaluation of one assignment."""
import logging
from fractions import Fraction

from streampart.exceptions import IncompleteAssignment, PinViolation, RmaxExceeded, UnboundedThroughput
from streampart.models import Assignment, Constraint, Evaluation, Placement, ProblemSpec
from streampart.services.throughput import ThroughputModel

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9


def check_assignment(problem: ProblemSpec, assignment: Assignment) -> None:
    """Raise if an assignment is incomplete or violates pins or r_max."""
    missing = [pid for pid in problem.process_ids if pid not in assignment]
    if missing:
        raise IncompleteAssignment(f"no placement for process(es): {', '.join(missing)}")
    unknown = sorted(set(assignment.replication) - set(problem.process_ids))
    if unknown:
        raise IncompleteAssignment(f"assignment names unknown process(es): {', '.join(unknown)}")

    for pid in problem.process_ids:
        process = problem.process(pid)
        r = assignment[pid]
        if r == 0:
            if process.placement == Placement.PINNED_HW:
                raise PinViolation(f"process '{pid}' is pinned to HW but assigned SW")
            continue
        if process.placement == Placement.PINNED_SW:
            raise PinViolation(f"process '{pid}' is pinned to SW but assigned HW({r})")
        if process.hw_profile is None:
            raise PinViolation(f"process '{pid}' has no hw_profile but is assigned HW({r})")
        if r < 1 or r > process.hw_profile.r_max:
            raise RmaxExceeded(
                f"process '{pid}' assigned HW({r}), replication must be in 1..{process.hw_profile.r_max}"
            )


def _ratio(used, budget) -> float:
    if budget == 0:
        return 0.0 if used == 0 else float("inf")
    return float(Fraction(used) / Fraction(budget))


def evaluate(problem: ProblemSpec, assignment: Assignment, tolerance: float = DEFAULT_TOLERANCE,
             model: ThroughputModel = None) -> Evaluation:
    """Predict λ, the binding constraints and every budget's utilization.

    Resource fit is checked first; an assignment overfilling any FPGA
    resource kind is infeasible and has no λ. Otherwise λ is the minimum of
    the per-process, CPU, per-channel and PCIe caps, computed exactly.
    """
    check_assignment(problem, assignment)
    if model is None or not model.exact:
        model = ThroughputModel(problem, exact=True)
    choice = assignment.options(model.ids)

    utilization = {}
    used = model.resource_use(choice)
    overfull = []
    for kind, amount, capacity in zip(model.kinds, used, model.capacity):
        utilization[f"fpga:{kind}"] = _ratio(amount, capacity)
        if amount > capacity:
            overfull.append(kind)
    if overfull:
        logger.debug("assignment %r overfills %s", assignment, overfull)
        return Evaluation(
            assignment=assignment,
            feasible=False,
            utilization=utilization,
            overfull_resources=tuple(overfull),
        )

    caps = list(model.caps(choice))
    if not caps:
        raise UnboundedThroughput()
    lam = min(cap for _, _, cap in caps)

    constraints = sorted(
        (Constraint(family, subject, cap, _ratio(lam, cap)) for family, subject, cap in caps),
        key=lambda c: c.sort_key,
    )
    binding = tuple(c for c in constraints if c.cap - lam <= Fraction(tolerance) * lam)

    cpu_load = model.cpu_load(choice)
    utilization["cpu"] = _ratio(lam * cpu_load, model.cores)
    pcie_load = model.pcie_load(choice)
    utilization["pcie"] = 0.0 if model.pcie is None else _ratio(lam * pcie_load, model.pcie)
    for channel in model.channels:
        cap = model.channel_cap(channel, choice[channel.u], choice[channel.v])
        utilization[f"channel:{channel.id}"] = 0.0 if cap is None else _ratio(lam, cap)
    for i, pid in enumerate(model.ids):
        cap = model.process_cap(i, choice[i])
        utilization[f"process:{pid}"] = 0.0 if cap is None else _ratio(lam, cap)

    sink_q = model.repetition[problem.sink]
    return Evaluation(
        assignment=assignment,
        feasible=True,
        throughput_lambda=lam,
        sink_rate=sink_q * lam,
        constraints=tuple(constraints),
        binding_constraints=binding,
        utilization=utilization,
        crossing_bytes_per_second=lam * pcie_load,
    )


def _format_utilization(value: float) -> str:
    if value > 1 + 1e-12:
        return "    >1"
    return f"{value:6.1%}"


def explain(evaluation: Evaluation) -> str:
    """Human-readable report, one line per constraint, binding caps marked."""
    lines = []
    if evaluation.feasible:
        lines.append(
            f"feasible: lambda = {float(evaluation.throughput_lambda):.6g} iterations/s, "
            f"sink rate = {float(evaluation.sink_rate):.6g} firings/s"
        )
    else:
        lines.append(f"INFEASIBLE: FPGA resources overfull: {', '.join(evaluation.overfull_resources)}")

    for key in sorted(k for k in evaluation.utilization if k.startswith("fpga:")):
        kind = key.split(":", 1)[1]
        value = evaluation.utilization[key]
        marker = "  OVERFULL" if kind in evaluation.overfull_resources else ""
        lines.append(f"  {'fpga resource ' + kind:<32} {'':>20}  util {_format_utilization(value)}{marker}")

    binding = set(evaluation.binding_constraints)
    for constraint in evaluation.constraints:
        marker = "  BINDING" if constraint in binding else ""
        lines.append(
            f"  {constraint.descriptor:<32} cap {float(constraint.cap):>16.6g}"
            f"  util {_format_utilization(constraint.utilization)}{marker}"
        )
    if evaluation.feasible and evaluation.crossing_bytes_per_second:
        lines.append(f"  sw/hw transfer volume: {float(evaluation.crossing_bytes_per_second):.6g} bytes/s")
    return "\n".join(lines) + "\n"
