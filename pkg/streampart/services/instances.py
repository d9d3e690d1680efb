"""Random valid problem instances for tests and regression corpora.

Every generated problem passes validation: processes are laid out in a
topological order with the sink last, each process after the first gets at
least one producer among its predecessors, and channel rates are derived
from a random repetition count per process so that the balance equations
are consistent.
"""
import math
import random
import string
from fractions import Fraction
from typing import List, Optional

from streampart.models import (
    UNBOUNDED,
    Assignment,
    ChannelSpec,
    HwProfile,
    Placement,
    PlatformSpec,
    ProblemSpec,
    ProcessSpec,
)

RESOURCE_KINDS = ("lut", "dsp")


def _process_ids(count: int) -> List[str]:
    letters = string.ascii_uppercase
    if count <= len(letters):
        return list(letters[:count])
    return [f"P{i:03d}" for i in range(count)]


def _hw_profile(rng: random.Random, r_max: int, max_rate: int, table: bool) -> HwProfile:
    base = rng.randint(max(1, max_rate // 10), max_rate)
    throughput_table = None
    if table:
        # Diminishing returns: each extra replica adds at most the base rate.
        values, total = [], 0
        for _ in range(r_max):
            total += rng.randint(max(1, base // 2), base)
            values.append(Fraction(total))
        throughput_table = tuple(values)
    return HwProfile(
        base_throughput=Fraction(base),
        resource_fixed={"lut": rng.randint(0, 2000), "dsp": rng.randint(0, 4)},
        resource_per_replica={"lut": rng.randint(500, 3000), "dsp": rng.randint(1, 8)},
        r_max=r_max,
        throughput_table=throughput_table,
    )


def random_problem(
    rng: random.Random,
    free: int = 4,
    pinned_sw: int = 1,
    pinned_hw: int = 0,
    r_max: int = 4,
    max_repetition: int = 3,
    max_rate: int = 200,
    extra_edge_probability: float = 0.3,
    finite_pcie: Optional[bool] = None,
) -> ProblemSpec:
    """Generate one valid problem.

    The first process is a pinned_sw source with unbounded throughput when
    pinned_sw >= 1; the rest of the pinned_sw processes get finite rates.
    """
    count = free + pinned_sw + pinned_hw
    if count < 1 or free + pinned_hw + max(0, pinned_sw - 1) < 1:
        raise ValueError("an instance needs at least one process with a finite rate")
    ids = _process_ids(count)
    kinds = [Placement.PINNED_SW] * pinned_sw + [Placement.FREE] * free + [Placement.PINNED_HW] * pinned_hw
    # Keep the unbounded source first, shuffle the rest.
    head, tail = kinds[:1], kinds[1:]
    rng.shuffle(tail)
    kinds = head + tail

    q = [rng.randint(1, max_repetition) for _ in ids]
    processes = []
    for n, (pid, placement) in enumerate(zip(ids, kinds)):
        sw = Fraction(rng.randint(max(1, max_rate // 10), max_rate))
        if placement == Placement.PINNED_SW:
            unbounded = n == 0 and pinned_sw >= 1
            processes.append(ProcessSpec(pid, placement, UNBOUNDED if unbounded else sw))
            continue
        profile = _hw_profile(rng, rng.randint(1, r_max), max_rate, table=rng.random() < 0.2)
        processes.append(ProcessSpec(pid, placement, sw, profile))

    channels = []

    def connect(u: int, v: int) -> None:
        g = math.gcd(q[u], q[v])
        k = rng.randint(1, 2)
        cap = UNBOUNDED
        if rng.random() < 0.3:
            cap = Fraction(rng.randint(1000, 100000))
        channels.append(ChannelSpec(
            id=f"c{len(channels) + 1}",
            producer=ids[u],
            consumer=ids[v],
            prod_rate=q[v] // g * k,
            cons_rate=q[u] // g * k,
            token_bytes=rng.randint(1, 64),
            bandwidth_cap=cap,
            scale_with_replication=rng.random() < 0.8,
        ))

    for v in range(1, count):
        connect(rng.randrange(v), v)
    for v in range(2, count):
        for u in range(v - 1):
            if rng.random() < extra_edge_probability / count:
                connect(u, v)
    # Only the last process may be a sink.
    producers = {c.producer for c in channels}
    for u in range(count - 1):
        if ids[u] not in producers:
            connect(u, rng.randrange(u + 1, count))
            producers.add(ids[u])

    if finite_pcie is None:
        finite_pcie = rng.random() < 0.6
    per_replica_lut = sum(p.hw_profile.resource_per_replica["lut"] for p in processes if p.hw_profile)
    platform = PlatformSpec(
        cpu_cores=Fraction(rng.randint(2, 8), 2),
        resource_kinds=RESOURCE_KINDS,
        fpga_capacity={"lut": rng.randint(3000, 3000 + 2 * per_replica_lut), "dsp": rng.randint(8, 64)},
        pcie_bandwidth=Fraction(rng.randint(10000, 400000)) if finite_pcie else UNBOUNDED,
    )
    return ProblemSpec(platform=platform, processes=tuple(processes), channels=tuple(channels), sink=ids[-1])


def random_assignment(rng: random.Random, problem: ProblemSpec) -> Assignment:
    """Uniformly random placement respecting pins and r_max."""
    return Assignment({pid: rng.choice(problem.process(pid).options()) for pid in problem.process_ids})


def random_partial(rng: random.Random, problem: ProblemSpec, assignment: Assignment) -> dict:
    """A random subset of an assignment's decisions."""
    return {pid: assignment[pid] for pid in problem.process_ids if rng.random() < 0.5}
