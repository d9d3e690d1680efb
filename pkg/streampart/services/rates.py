"""Repetition vector: steady-state balance of channel production/consumption rates."""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator

import networkx as nx

from streampart.exceptions import InconsistentRates, RateOverflowError
from streampart.models import ProblemSpec

logger = logging.getLogger(__name__)

MAX_REPETITION = 2**63 - 1


@dataclass(frozen=True)
class RepetitionVector:
    """Minimal positive firing counts per process for one graph iteration."""
    counts: Dict[str, int]

    def __getitem__(self, process_id: str) -> int:
        return self.counts[process_id]

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.counts))

    def __len__(self) -> int:
        return len(self.counts)

    def items(self):
        return sorted(self.counts.items())

    def firing_rate(self, process_id: str, iteration_rate):
        """Firings per second of a process at iteration rate λ."""
        return self.counts[process_id] * iteration_rate


def repetition_vector(problem: ProblemSpec) -> RepetitionVector:
    """Solve q_u * prod_rate = q_v * cons_rate over every channel.

    Fractions are propagated along a BFS spanning forest of the undirected
    graph, every channel is then checked for balance, and the result is
    scaled by the common denominator and reduced by the gcd.
    """
    undirected = nx.Graph(problem.graph.to_undirected(as_view=True))
    by_pair = {}
    for channel in sorted(problem.channels, key=lambda c: c.id):
        by_pair.setdefault((channel.producer, channel.consumer), channel)
        by_pair.setdefault((channel.consumer, channel.producer), channel)

    ratio: Dict[str, Fraction] = {}
    for root in problem.process_ids:
        if root in ratio:
            continue
        ratio[root] = Fraction(1)
        for u, v in nx.bfs_edges(undirected, root, sort_neighbors=sorted):
            channel = by_pair[(u, v)]
            if channel.producer == u:
                ratio[v] = ratio[u] * channel.prod_rate / channel.cons_rate
            else:
                ratio[v] = ratio[u] * channel.cons_rate / channel.prod_rate

    for channel in sorted(problem.channels, key=lambda c: c.id):
        produced = ratio[channel.producer] * channel.prod_rate
        consumed = ratio[channel.consumer] * channel.cons_rate
        if produced != consumed:
            raise InconsistentRates(
                channel.id,
                f"inconsistent rates on channel '{channel.id}' ({channel.producer} -> {channel.consumer}): "
                f"balance requires q_{channel.producer}*{channel.prod_rate} = q_{channel.consumer}*{channel.cons_rate}",
            )

    denominator = math.lcm(*(r.denominator for r in ratio.values())) if ratio else 1
    counts = {pid: int(r * denominator) for pid, r in ratio.items()}
    divisor = math.gcd(*counts.values()) if counts else 1
    counts = {pid: q // divisor for pid, q in counts.items()}

    for pid, q in counts.items():
        if q > MAX_REPETITION:
            raise RateOverflowError(f"repetition count of process '{pid}' exceeds 64-bit range")
    logger.debug("repetition vector: %s", counts)
    return RepetitionVector(counts)
