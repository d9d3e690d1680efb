"""Compiled throughput model shared by the evaluator, the solvers and the MILP exporter.

A model is built once per problem, either over floats (fast search) or over
Fractions (exact results). Assignments are passed as option tuples in the
order of ``model.ids``: 0 is SW, r >= 1 is HW(r). Partial assignments use
None for undecided processes.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from streampart.models import ConstraintFamily, ProblemSpec, is_unbounded
from streampart.services.rates import RepetitionVector, repetition_vector


@dataclass(frozen=True)
class CompiledChannel:
    id: str
    u: int
    v: int
    # Bytes per iteration: q_u * prod_rate * token_bytes.
    demand: object
    bandwidth: Optional[object]
    scales: bool


class ThroughputModel:
    """Per-problem constants of the five λ-capping constraint families."""

    def __init__(self, problem: ProblemSpec, repetition: RepetitionVector = None, exact: bool = False):
        num = Fraction if exact else float
        self.problem = problem
        self.exact = exact
        self.repetition = repetition or repetition_vector(problem)
        self.ids: List[str] = list(problem.process_ids)
        self.index = {pid: i for i, pid in enumerate(self.ids)}
        self.q = [self.repetition[pid] for pid in self.ids]

        platform = problem.platform
        self.kinds: Tuple[str, ...] = tuple(platform.resource_kinds)
        self.capacity = tuple(platform.capacity(kind) for kind in self.kinds)
        self.cores = num(platform.cpu_cores)
        self.pcie = None if is_unbounded(platform.pcie_bandwidth) else num(platform.pcie_bandwidth)

        self.options: List[List[int]] = []
        self.sw_cap: List[Optional[object]] = []
        self.sw_demand: List[object] = []
        self.hw_cap: List[List[Optional[object]]] = []
        self.resources: List[dict] = []
        for i, pid in enumerate(self.ids):
            process = problem.process(pid)
            q = self.q[i]
            options = process.options()
            self.options.append(options)
            if process.sw_unbounded:
                self.sw_cap.append(None)
                self.sw_demand.append(num(0))
            else:
                self.sw_cap.append(num(process.sw_throughput) / q)
                self.sw_demand.append(num(q) / num(process.sw_throughput))
            caps = [None]
            resources = {0: (0,) * len(self.kinds)}
            if process.allows_hw:
                profile = process.hw_profile
                for r in range(1, profile.r_max + 1):
                    caps.append(num(profile.throughput(r)) / q)
                    used = profile.resources(r)
                    resources[r] = tuple(used.get(kind, 0) for kind in self.kinds)
            self.hw_cap.append(caps)
            self.resources.append(resources)

        self.channels: List[CompiledChannel] = []
        for channel in sorted(problem.channels, key=lambda c: c.id):
            u = self.index[channel.producer]
            self.channels.append(CompiledChannel(
                id=channel.id,
                u=u,
                v=self.index[channel.consumer],
                demand=num(self.q[u] * channel.prod_rate * channel.token_bytes),
                bandwidth=None if is_unbounded(channel.bandwidth_cap) else num(channel.bandwidth_cap),
                scales=channel.scale_with_replication,
            ))

    # Per-option quantities

    def process_cap(self, i: int, option: int):
        """λ cap of process i under an option, None when unbounded."""
        return self.sw_cap[i] if option == 0 else self.hw_cap[i][option]

    def best_process_cap(self, i: int):
        """Largest λ cap process i can reach over its options."""
        caps = [self.process_cap(i, option) for option in self.options[i]]
        if any(cap is None for cap in caps):
            return None
        return max(caps)

    def max_replication(self, i: int) -> int:
        return max(self.options[i])

    def channel_cap(self, channel: CompiledChannel, ru: int, rv: int):
        """λ cap of a channel given its endpoint options, None when unbounded."""
        if channel.bandwidth is None:
            return None
        scale = min(ru, rv) if channel.scales and ru and rv else 1
        return channel.bandwidth * scale / channel.demand

    # Complete assignments

    def resource_use(self, choice: Sequence[int]) -> Tuple[int, ...]:
        totals = [0] * len(self.kinds)
        for i, option in enumerate(choice):
            for k, amount in enumerate(self.resources[i][option]):
                totals[k] += amount
        return tuple(totals)

    def fits(self, choice: Sequence[int]) -> bool:
        return all(used <= cap for used, cap in zip(self.resource_use(choice), self.capacity))

    def cpu_load(self, choice: Sequence[int]):
        """Core-seconds per iteration spent by SW processes."""
        return sum((self.sw_demand[i] for i, option in enumerate(choice) if option == 0), self._zero())

    def pcie_load(self, choice: Sequence[int]):
        """Bytes per iteration crossing the SW/HW boundary."""
        return sum(
            (ch.demand for ch in self.channels if (choice[ch.u] == 0) != (choice[ch.v] == 0)),
            self._zero(),
        )

    def caps(self, choice: Sequence[int]) -> Iterator[Tuple[str, Optional[str], object]]:
        """Yield (family, subject, cap) for every finite λ cap."""
        for i, option in enumerate(choice):
            cap = self.process_cap(i, option)
            if cap is not None:
                family = ConstraintFamily.SW_PROCESS if option == 0 else ConstraintFamily.HW_PROCESS
                yield family, self.ids[i], cap
        cpu_load = self.cpu_load(choice)
        if cpu_load > 0:
            yield ConstraintFamily.CPU_AGGREGATE, None, self.cores / cpu_load
        for channel in self.channels:
            cap = self.channel_cap(channel, choice[channel.u], choice[channel.v])
            if cap is not None:
                yield ConstraintFamily.CHANNEL, channel.id, cap
        if self.pcie is not None:
            pcie_load = self.pcie_load(choice)
            if pcie_load > 0:
                yield ConstraintFamily.PCIE_AGGREGATE, None, self.pcie / pcie_load

    def throughput(self, choice: Sequence[int]):
        """Maximum iteration rate λ of a complete assignment, None when unbounded."""
        return min((cap for _, _, cap in self.caps(choice)), default=None)

    def tie_key(self, choice: Sequence[int]) -> tuple:
        """Preference among equal-λ assignments: fewer HW, smaller ΣR, fewer resources, lexicographic."""
        return (
            sum(1 for option in choice if option),
            sum(choice),
            sum(self.resource_use(choice)),
            tuple(choice),
        )

    # Partial assignments

    def _decided(self, partial: Sequence[Optional[int]], i: int) -> Optional[int]:
        option = partial[i]
        if option is None and len(self.options[i]) == 1:
            return self.options[i][0]
        return option

    def _side(self, partial: Sequence[Optional[int]], i: int) -> Optional[bool]:
        """True if process i is certainly HW, False if certainly SW, None if open."""
        option = self._decided(partial, i)
        if option is not None:
            return option != 0
        if 0 not in self.options[i]:
            return True
        return None

    def mandatory_resources(self, partial: Sequence[Optional[int]]) -> Tuple[int, ...]:
        """Committed resources plus the cheapest option of every undecided process."""
        totals = [0] * len(self.kinds)
        for i in range(len(self.ids)):
            option = self._decided(partial, i)
            if option is not None:
                vectors = [self.resources[i][option]]
            else:
                vectors = [self.resources[i][o] for o in self.options[i]]
            for k in range(len(self.kinds)):
                totals[k] += min(vector[k] for vector in vectors)
        return tuple(totals)

    def partial_fits(self, partial: Sequence[Optional[int]]) -> bool:
        return all(used <= cap for used, cap in zip(self.mandatory_resources(partial), self.capacity))

    def bound(self, partial: Sequence[Optional[int]]):
        """Admissible upper bound on λ over all completions of a partial assignment.

        Undecided processes contribute their best cap, shared budgets only count
        decided loads, and channels touching undecided processes get their most
        optimistic replication scaling. None means no finite bound.
        """
        decided = [self._decided(partial, i) for i in range(len(self.ids))]
        bound = None

        def tighten(cap):
            nonlocal bound
            if cap is not None and (bound is None or cap < bound):
                bound = cap

        cpu_load = self._zero()
        for i, option in enumerate(decided):
            if option is None:
                tighten(self.best_process_cap(i))
            else:
                tighten(self.process_cap(i, option))
                if option == 0:
                    cpu_load += self.sw_demand[i]
        if cpu_load > 0:
            tighten(self.cores / cpu_load)

        pcie_load = self._zero()
        for channel in self.channels:
            ru, rv = decided[channel.u], decided[channel.v]
            if ru is not None and rv is not None:
                tighten(self.channel_cap(channel, ru, rv))
            else:
                best_u = ru if ru is not None else self.max_replication(channel.u)
                best_v = rv if rv is not None else self.max_replication(channel.v)
                tighten(self.channel_cap(channel, best_u, best_v))
            side_u, side_v = self._side(partial, channel.u), self._side(partial, channel.v)
            if side_u is not None and side_v is not None and side_u != side_v:
                pcie_load += channel.demand
        if self.pcie is not None and pcie_load > 0:
            tighten(self.pcie / pcie_load)
        return bound

    def tie_floor(self, partial: Sequence[Optional[int]]) -> tuple:
        """Lower bound of the first three tie_key components over all completions."""
        n_hw = 0
        total_r = 0
        for i in range(len(self.ids)):
            option = self._decided(partial, i)
            if option is None:
                option = min(self.options[i])
            n_hw += 1 if option else 0
            total_r += option
        return (n_hw, total_r, sum(self.mandatory_resources(partial)))

    def _zero(self):
        return Fraction(0) if self.exact else 0.0
