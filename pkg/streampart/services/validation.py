"""Problem validation: type invariants, graph shape and rate consistency."""
import logging
from collections import Counter
from typing import List

import networkx as nx

from streampart.exceptions import InconsistentRates, InvalidProblemError, RateOverflowError
from streampart.models import Diagnostic, Placement, ProblemSpec, Severity, is_unbounded
from streampart.services.rates import repetition_vector

logger = logging.getLogger(__name__)


class _Collector:
    def __init__(self):
        self.diagnostics: List[Diagnostic] = []

    def error(self, location: str, message: str) -> None:
        self.diagnostics.append(Diagnostic(Severity.ERROR, location, message))

    def warning(self, location: str, message: str) -> None:
        self.diagnostics.append(Diagnostic(Severity.WARNING, location, message))

    @property
    def has_errors(self) -> bool:
        return has_errors(self.diagnostics)


def _positive_rate(value) -> bool:
    return is_unbounded(value) or value > 0


def _check_resources(out: _Collector, location: str, name: str, vector: dict, kinds: tuple) -> None:
    for kind, amount in sorted(vector.items()):
        if kind not in kinds:
            out.error(location, f"{name} uses undeclared resource kind '{kind}'")
        if amount < 0:
            out.error(location, f"{name}['{kind}'] must be non-negative, got {amount}")


def _check_platform(out: _Collector, problem: ProblemSpec) -> None:
    platform = problem.platform
    if not platform.cpu_cores > 0:
        out.error("platform", f"cpu_cores must be positive, got {platform.cpu_cores}")
    for kind, count in sorted(Counter(platform.resource_kinds).items()):
        if count > 1:
            out.error("platform", f"resource kind '{kind}' declared {count} times")
    for kind in platform.resource_kinds:
        if kind not in platform.fpga_capacity:
            out.error("platform", f"fpga_capacity does not define resource kind '{kind}'")
        elif platform.fpga_capacity[kind] == 0:
            out.warning("platform", f"fpga_capacity of resource kind '{kind}' is 0")
    _check_resources(out, "platform", "fpga_capacity", platform.fpga_capacity, platform.resource_kinds)
    if not _positive_rate(platform.pcie_bandwidth):
        out.error("platform", f"pcie_bandwidth must be positive or unbounded, got {platform.pcie_bandwidth}")


def _check_process(out: _Collector, process, kinds: tuple) -> None:
    location = f"process:{process.id}"
    if process.placement not in Placement.ALL:
        out.error(location, f"placement must be one of {', '.join(Placement.ALL)}, got '{process.placement}'")
    if not _positive_rate(process.sw_throughput):
        out.error(location, f"sw_throughput must be positive or unbounded, got {process.sw_throughput}")
    if process.sw_unbounded and process.placement != Placement.PINNED_SW:
        out.error(location, "unbounded sw_throughput is only allowed for pinned_sw processes")
    profile = process.hw_profile
    if profile is None:
        if process.placement in (Placement.PINNED_HW, Placement.FREE):
            out.error(location, f"placement '{process.placement}' requires a hw_profile")
        return
    if process.placement == Placement.PINNED_SW:
        out.warning(location, "hw_profile is ignored for a pinned_sw process")
    if not profile.base_throughput > 0:
        out.error(location, f"base_throughput must be positive, got {profile.base_throughput}")
    if profile.r_max < 1:
        out.error(location, f"r_max must be at least 1, got {profile.r_max}")
    _check_resources(out, location, "resource_fixed", profile.resource_fixed, kinds)
    _check_resources(out, location, "resource_per_replica", profile.resource_per_replica, kinds)
    if profile.is_free_kernel:
        out.warning(location, "HW kernel uses no FPGA resources")
    table = profile.throughput_table
    if table is not None:
        if len(table) < profile.r_max:
            out.error(location, f"throughput_table has {len(table)} entries, r_max is {profile.r_max}")
        if any(not entry > 0 for entry in table):
            out.error(location, "throughput_table entries must be positive")


def _check_channel(out: _Collector, channel, process_ids: set) -> None:
    location = f"channel:{channel.id}"
    for end in ("producer", "consumer"):
        pid = getattr(channel, end)
        if pid not in process_ids:
            out.error(location, f"{end} '{pid}' is not a process")
    if channel.producer == channel.consumer:
        out.error(location, f"self-loop on process '{channel.producer}'")
    for name in ("prod_rate", "cons_rate", "token_bytes"):
        value = getattr(channel, name)
        if value < 1:
            out.error(location, f"{name} must be a positive integer, got {value}")
    if not _positive_rate(channel.bandwidth_cap):
        out.error(location, f"bandwidth_cap must be positive or unbounded, got {channel.bandwidth_cap}")


def _check_graph(out: _Collector, problem: ProblemSpec) -> None:
    process_ids = set(problem.process_map)
    if not problem.processes:
        out.error("graph", "problem has no processes")
        return
    if problem.sink not in process_ids:
        out.error("sink", f"sink '{problem.sink}' is not a process")
    elif problem.outputs(problem.sink):
        out.error("sink", f"sink '{problem.sink}' has outgoing channels")
    if not problem.sources:
        out.error("graph", "no process without incoming channels")

    graph = problem.graph
    if not nx.is_weakly_connected(graph):
        count = nx.number_weakly_connected_components(graph)
        out.error("graph", f"graph must be weakly connected, found {count} components")
    if not nx.is_directed_acyclic_graph(graph):
        cycle = [u for u, _, _ in nx.find_cycle(graph)]
        out.error("graph", f"graph must be acyclic: cycle {' -> '.join(cycle + cycle[:1])}")


def validate_problem(problem: ProblemSpec) -> List[Diagnostic]:
    """Return every error and warning found in a problem; never raises."""
    out = _Collector()
    _check_platform(out, problem)

    kinds = tuple(problem.platform.resource_kinds)
    for kind, what in (("processes", "process"), ("channels", "channel")):
        for item_id, count in sorted(Counter(item.id for item in getattr(problem, kind)).items()):
            if count > 1:
                out.error(f"{what}:{item_id}", f"duplicate id '{item_id}'")
    for process in problem.processes:
        _check_process(out, process, kinds)
    process_ids = set(problem.process_map)
    for channel in sorted(problem.channels, key=lambda c: c.id):
        _check_channel(out, channel, process_ids)

    if not out.has_errors:
        _check_graph(out, problem)
    if not out.has_errors:
        try:
            repetition_vector(problem)
        except InconsistentRates as e:
            out.error(f"channel:{e.channel_id}", str(e))
        except RateOverflowError as e:
            out.error("graph", str(e))

    logger.debug("validation found %d diagnostic(s)", len(out.diagnostics))
    return out.diagnostics


def has_errors(diagnostics: List[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)


def ensure_valid(problem: ProblemSpec) -> List[Diagnostic]:
    """Raise InvalidProblemError on any error; return the warnings."""
    diagnostics = validate_problem(problem)
    if has_errors(diagnostics):
        raise InvalidProblemError(diagnostics)
    for diagnostic in diagnostics:
        logger.warning("%s", diagnostic)
    return diagnostics
