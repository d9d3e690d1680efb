"""Deterministic discrete-event simulation of a partitioned streaming application.

Processes fire when every input channel holds cons_rate tokens and every
output channel has room for prod_rate more. A firing consumes its inputs and
reserves its output space when it starts; when it completes, one batch per
output channel travels through the channel's rate limiter (capped channels
only) and the shared PCIe link (SW/HW crossing channels only) before the
tokens become visible to the consumer.

SW processes are single-threaded and queue FIFO for floor(cpu_cores) full-speed
cores plus one core running at the fractional remainder; a waiting firing takes
the fastest idle core. HW processes run R parallel servers. Events are ordered
by (time, event kind, entity id, sequence).
"""
import bisect
import heapq
import logging
import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Deque, Dict, List, Optional, Set

import networkx as nx

from streampart.exceptions import ComparisonError, DeadlockError, Infeasible, SimulationConfigError
from streampart.models import (
    Assignment,
    ChannelCounters,
    Comparison,
    Evaluation,
    ProblemSpec,
    SimConfig,
    SimReport,
    TraceRecord,
    is_unbounded,
)
from streampart.services.evaluator import evaluate
from streampart.services.rates import repetition_vector

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.10

TRANSFER = "transfer"
COMPLETE = "complete"
EVENT_RANK = {TRANSFER: 0, COMPLETE: 1}


@dataclass(order=True)
class _Event:
    time: float
    rank: int
    entity: str
    seq: int
    action: Callable[[], None] = field(compare=False)


class _Buffer:
    """FIFO channel state; occupancy includes tokens reserved by running producers."""

    def __init__(self, channel, capacity: int):
        self.channel = channel
        self.capacity = capacity
        self.available = 0
        self.occupancy = 0
        self.produced = 0
        self.consumed = 0
        self.stages: List["_Link"] = []
        self.area = 0.0
        self.last_change = 0.0

    @property
    def space(self) -> int:
        return self.capacity - self.occupancy


class _Link:
    """A single FCFS transfer server (PCIe or a channel's rate limiter)."""

    def __init__(self, name: str, rate: float):
        self.name = name
        self.rate = rate
        self.queue: Deque[tuple] = deque()
        self.busy = False
        self.busy_time = 0.0


class _Actor:
    """Runtime state of one process."""

    def __init__(self, pid: str, option: int, service_time: float, servers: int):
        self.id = pid
        self.option = option
        self.service_time = service_time
        self.servers = servers
        self.running = 0
        self.queued = False
        self.core: Optional[int] = None
        self.firings = 0
        self.busy_time = 0.0
        self.inputs: List[_Buffer] = []
        self.outputs: List[_Buffer] = []

    @property
    def is_sw(self) -> bool:
        return self.option == 0

    @property
    def needs_core(self) -> bool:
        return self.is_sw and self.service_time > 0

    def ready(self) -> bool:
        return all(b.available >= b.channel.cons_rate for b in self.inputs) and all(
            b.space >= b.channel.prod_rate for b in self.outputs
        )


def core_speeds(cpu_cores) -> List[float]:
    """Relative speed of each simulated core, fastest first: whole cores run at 1."""
    whole = math.floor(cpu_cores)
    speeds = [1.0] * whole
    if cpu_cores > whole:
        speeds.append(float(cpu_cores - whole))
    return speeds


def check_config(problem: ProblemSpec, config: SimConfig) -> None:
    """Raise SimulationConfigError when a run's parameters are unusable."""
    if not config.duration > 0:
        raise SimulationConfigError(f"duration must be positive, got {config.duration}")
    warmup = config.effective_warmup
    if not 0 <= warmup < config.duration:
        raise SimulationConfigError(f"warmup must lie in [0, duration), got {warmup}")
    if not 0 <= config.jitter < 1:
        raise SimulationConfigError(f"jitter must lie in [0, 1), got {config.jitter}")
    for channel in sorted(problem.channels, key=lambda c: c.id):
        needed = max(channel.prod_rate, channel.cons_rate)
        if config.buffer_tokens < needed:
            raise SimulationConfigError(
                f"buffer_tokens {config.buffer_tokens} is below the rate {needed} of channel '{channel.id}'"
            )


class _Simulation:
    def __init__(self, problem: ProblemSpec, assignment: Assignment, config: SimConfig):
        self.problem = problem
        self.config = config
        self.warmup = config.effective_warmup
        self.duration = float(config.duration)
        self.rng = random.Random(config.seed)
        self.now = 0.0
        self.heap: List[_Event] = []
        self.seq = 0
        self.event_count = 0
        self.trace: List[TraceRecord] = []
        self.sink_count = 0
        self.q_sink = repetition_vector(problem)[problem.sink]

        platform = problem.platform
        self.core_speeds = core_speeds(platform.cpu_cores)
        self.idle_cores: List[int] = list(range(len(self.core_speeds)))
        self.core_busy = 0.0
        self.core_queue: Deque[_Actor] = deque()
        self.pcie = None if is_unbounded(platform.pcie_bandwidth) else _Link("pcie", float(platform.pcie_bandwidth))

        self.actors: Dict[str, _Actor] = {}
        for pid in problem.process_ids:
            self.actors[pid] = self._make_actor(pid, assignment[pid])

        self.buffers: Dict[str, _Buffer] = {}
        self.limiters: Dict[str, _Link] = {}
        for channel in sorted(problem.channels, key=lambda c: c.id):
            buffer = _Buffer(channel, config.buffer_tokens)
            producer, consumer = self.actors[channel.producer], self.actors[channel.consumer]
            if not is_unbounded(channel.bandwidth_cap):
                scale = 1
                if channel.scale_with_replication and producer.option and consumer.option:
                    scale = min(producer.option, consumer.option)
                limiter = _Link(f"channel:{channel.id}", float(channel.bandwidth_cap) * scale)
                self.limiters[channel.id] = limiter
                buffer.stages.append(limiter)
            if self.pcie is not None and producer.is_sw != consumer.is_sw:
                buffer.stages.append(self.pcie)
            producer.outputs.append(buffer)
            consumer.inputs.append(buffer)
            self.buffers[channel.id] = buffer

        self.pending: Set[str] = set(self.actors)

    def _make_actor(self, pid: str, option: int) -> _Actor:
        process = self.problem.process(pid)
        if option == 0:
            if process.sw_unbounded:
                return _Actor(pid, option, 0.0, 1)
            return _Actor(pid, option, 1.0 / float(process.sw_throughput), 1)
        # Each of the R servers delivers throughput(R) / R firings per second.
        service_time = option / float(process.hw_profile.throughput(option))
        return _Actor(pid, option, service_time, option)

    # Bookkeeping

    def _schedule(self, delay: float, kind: str, entity: str, action: Callable[[], None]) -> None:
        self.seq += 1
        heapq.heappush(self.heap, _Event(self.now + delay, EVENT_RANK[kind], entity, self.seq, action))

    def _record(self, kind: str, entity: str, detail: str = "") -> None:
        if self.config.trace:
            self.trace.append(TraceRecord(self.now, kind, entity, detail))

    def _window_overlap(self, start: float, end: float) -> float:
        return max(0.0, min(end, self.duration) - max(start, self.warmup))

    def _touch(self, buffer: _Buffer) -> None:
        buffer.area += buffer.occupancy * self._window_overlap(buffer.last_change, self.now)
        buffer.last_change = self.now

    def _jittered(self, service_time: float) -> float:
        if self.config.jitter and service_time:
            return service_time * (1 + self.config.jitter * self.rng.uniform(-1, 1))
        return service_time

    # Processes

    def _dispatch(self, actor: _Actor) -> None:
        if actor.needs_core:
            if not actor.queued and actor.running == 0 and actor.ready():
                actor.queued = True
                self.core_queue.append(actor)
            return
        while actor.running < actor.servers and actor.ready():
            self._start(actor, self._jittered(actor.service_time))

    def _run_cores(self) -> None:
        count = min(len(self.idle_cores), len(self.core_queue))
        batch = [self.core_queue.popleft() for _ in range(count)]
        # Longest firings get the fastest of the idle cores; starts stay in queue order.
        for actor in sorted(batch, key=lambda a: -a.service_time):
            actor.core = self.idle_cores.pop(0)
        for actor in batch:
            actor.queued = False
            speed = self.core_speeds[actor.core]
            service_time = self._jittered(actor.service_time / speed)
            self.core_busy += speed * self._window_overlap(self.now, self.now + service_time)
            self._start(actor, service_time)

    def _start(self, actor: _Actor, service_time: float) -> None:
        for buffer in actor.inputs:
            self._touch(buffer)
            rate = buffer.channel.cons_rate
            buffer.available -= rate
            buffer.occupancy -= rate
            buffer.consumed += rate
            self.pending.add(buffer.channel.producer)
        for buffer in actor.outputs:
            self._touch(buffer)
            rate = buffer.channel.prod_rate
            buffer.occupancy += rate
            buffer.produced += rate
        actor.running += 1
        actor.busy_time += self._window_overlap(self.now, self.now + service_time)
        self._record("start", actor.id)
        self._schedule(service_time, COMPLETE, actor.id, lambda: self._complete(actor))

    def _complete(self, actor: _Actor) -> None:
        actor.running -= 1
        actor.firings += 1
        if actor.needs_core:
            bisect.insort(self.idle_cores, actor.core)
            actor.core = None
        if actor.id == self.problem.sink and self.now > self.warmup:
            self.sink_count += 1
        self._record(COMPLETE, actor.id)
        for buffer in actor.outputs:
            self._forward(buffer, 0)
        self.pending.add(actor.id)

    # Transfers

    def _forward(self, buffer: _Buffer, stage: int) -> None:
        if stage == len(buffer.stages):
            buffer.available += buffer.channel.prod_rate
            self._record("deliver", buffer.channel.id, str(buffer.channel.prod_rate))
            self.pending.add(buffer.channel.consumer)
            return
        link = buffer.stages[stage]
        link.queue.append((buffer, stage))
        if not link.busy:
            self._serve(link)

    def _serve(self, link: _Link) -> None:
        buffer, stage = link.queue.popleft()
        link.busy = True
        service_time = buffer.channel.batch_bytes / link.rate
        link.busy_time += self._window_overlap(self.now, self.now + service_time)
        self._record(TRANSFER, link.name, buffer.channel.id)
        self._schedule(service_time, TRANSFER, link.name, lambda: self._transferred(link, buffer, stage))

    def _transferred(self, link: _Link, buffer: _Buffer, stage: int) -> None:
        link.busy = False
        if link.queue:
            self._serve(link)
        self._forward(buffer, stage + 1)

    # Main loop

    def _settle(self) -> None:
        """Start every firing the current state allows."""
        while self.pending or (self.idle_cores and self.core_queue):
            while self.pending:
                pid = min(self.pending)
                self.pending.discard(pid)
                self._dispatch(self.actors[pid])
            self._run_cores()

    def _wait_cycle(self) -> list:
        graph = nx.DiGraph()
        for pid, actor in sorted(self.actors.items()):
            for buffer in actor.inputs:
                if buffer.available < buffer.channel.cons_rate:
                    graph.add_edge(pid, buffer.channel.producer)
            for buffer in actor.outputs:
                if buffer.space < buffer.channel.prod_rate:
                    graph.add_edge(pid, buffer.channel.consumer)
        try:
            return [(a, b) for a, b in nx.find_cycle(graph)]
        except nx.NetworkXNoCycle:
            return []

    def run(self) -> SimReport:
        self._settle()
        while self.heap and self.heap[0].time <= self.duration:
            event = heapq.heappop(self.heap)
            self.now = event.time
            self.event_count += 1
            event.action()
            self._settle()
        if not self.heap:
            raise DeadlockError(self.now, self._wait_cycle())
        self.now = self.duration
        return self._report()

    def _report(self) -> SimReport:
        window = self.duration - self.warmup
        utilization = {"cpu": self.core_busy / (window * sum(self.core_speeds))}
        utilization["pcie"] = self.pcie.busy_time / window if self.pcie else 0.0
        mean_occupancy = {}
        counters = {}
        for cid, buffer in self.buffers.items():
            self._touch(buffer)
            limiter = self.limiters.get(cid)
            utilization[f"channel:{cid}"] = limiter.busy_time / window if limiter else 0.0
            mean_occupancy[cid] = buffer.area / window
            counters[cid] = ChannelCounters(buffer.produced, buffer.consumed, buffer.occupancy)
        for pid, actor in self.actors.items():
            utilization[f"process:{pid}"] = actor.busy_time / (window * actor.servers)
        return SimReport(
            measured_throughput=self.sink_count / window / self.q_sink,
            sink_firings=self.sink_count,
            window=window,
            event_count=self.event_count,
            utilization=utilization,
            mean_occupancy=mean_occupancy,
            firings={pid: actor.firings for pid, actor in self.actors.items()},
            channels=counters,
            trace=self.trace,
        )


def simulate(problem: ProblemSpec, assignment: Assignment, config: SimConfig,
             evaluation: Optional[Evaluation] = None) -> SimReport:
    """Run one simulation of a feasible assignment with finite λ."""
    if evaluation is None:
        evaluation = evaluate(problem, assignment)
    if not evaluation.feasible:
        raise Infeasible(f"assignment overfills FPGA resources: {', '.join(evaluation.overfull_resources)}")
    check_config(problem, config)
    logger.debug("simulating %r for %g virtual seconds", assignment, config.duration)
    report = _Simulation(problem, assignment, config).run()
    logger.info(
        "simulation finished: %d events, measured %.6g iterations/s", report.event_count, report.measured_throughput
    )
    return report


def compare(evaluation: Evaluation, report: SimReport, threshold: float = DEFAULT_THRESHOLD) -> Comparison:
    """Relative deviation of the measured iteration rate from the predicted λ."""
    predicted = evaluation.lambda_value
    if predicted == 0:
        raise ComparisonError("predicted throughput is zero, relative error is undefined")
    measured = report.measured_throughput
    return Comparison(
        predicted=predicted,
        measured=measured,
        relative_error=abs(measured - predicted) / predicted,
        threshold=threshold,
    )
