"""Simulation configuration and report models."""
from dataclasses import dataclass, field
from typing import Dict, List, Optional


@dataclass(frozen=True)
class SimConfig:
    """Parameters of one simulation run (virtual seconds)."""
    duration: float
    warmup: Optional[float] = None
    buffer_tokens: int = 64
    trace: bool = False
    # Relative service-time jitter; 0 disables the hook.
    jitter: float = 0.0
    seed: int = 0

    @property
    def effective_warmup(self) -> float:
        """Warmup defaults to a tenth of the duration."""
        return self.duration / 10 if self.warmup is None else self.warmup


@dataclass(frozen=True)
class TraceRecord:
    time: float
    event_kind: str
    entity_id: str
    detail: str


@dataclass(frozen=True)
class ChannelCounters:
    """Token accounting of one channel at the end of a run."""
    produced: int
    consumed: int
    occupancy: int


@dataclass(frozen=True)
class SimReport:
    """Measured behavior of one simulation run."""
    measured_throughput: float
    sink_firings: int
    window: float
    event_count: int
    utilization: Dict[str, float] = field(default_factory=dict)
    mean_occupancy: Dict[str, float] = field(default_factory=dict)
    firings: Dict[str, int] = field(default_factory=dict)
    channels: Dict[str, ChannelCounters] = field(default_factory=dict)
    trace: List[TraceRecord] = field(default_factory=list)


@dataclass(frozen=True)
class Comparison:
    """Deviation of a simulation from the analytic prediction."""
    predicted: float
    measured: float
    relative_error: float
    threshold: float

    @property
    def verdict(self) -> str:
        return "pass" if self.relative_error <= self.threshold else "fail"
