"""Problem model: the dataflow graph plus the platform."""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import networkx as nx

from streampart.models.channel import ChannelSpec
from streampart.models.platform import PlatformSpec
from streampart.models.process import ProcessSpec


@dataclass(frozen=True)
class ProblemSpec:
    """A partitioning problem: DFG = (processes, channels), platform and sink."""
    platform: PlatformSpec
    processes: Tuple[ProcessSpec, ...]
    channels: Tuple[ChannelSpec, ...]
    sink: str
    # Free-form record of where parameters came from (written by calibrate).
    provenance: Optional[dict] = field(default=None, compare=True)

    def __repr__(self) -> str:
        return f"<ProblemSpec {len(self.processes)} processes, {len(self.channels)} channels>"

    @cached_property
    def process_map(self) -> Dict[str, ProcessSpec]:
        return {p.id: p for p in self.processes}

    @cached_property
    def channel_map(self) -> Dict[str, ChannelSpec]:
        return {c.id: c for c in self.channels}

    @cached_property
    def process_ids(self) -> List[str]:
        """Process ids in sorted order, the canonical order for assignments."""
        return sorted(self.process_map)

    def process(self, process_id: str) -> ProcessSpec:
        return self.process_map[process_id]

    def channel(self, channel_id: str) -> ChannelSpec:
        return self.channel_map[channel_id]

    def outputs(self, process_id: str) -> List[ChannelSpec]:
        """Channels produced by a process, sorted by id."""
        return sorted((c for c in self.channels if c.producer == process_id), key=lambda c: c.id)

    @property
    def sources(self) -> List[str]:
        """Processes without incoming channels."""
        consumers = {c.consumer for c in self.channels}
        return [pid for pid in self.process_ids if pid not in consumers]

    @cached_property
    def graph(self) -> nx.MultiDiGraph:
        """The DFG as a multigraph keyed by channel id.

        Channels naming unknown processes add implicit nodes; validation
        reports them separately.
        """
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.process_ids)
        for channel in sorted(self.channels, key=lambda c: c.id):
            graph.add_edge(channel.producer, channel.consumer, key=channel.id)
        return graph
