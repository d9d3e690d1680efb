"""Evaluation model: predicted throughput and the constraints behind it."""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from streampart.models.assignment import Assignment


class ConstraintFamily:
    """Constraint family constants, in report order."""
    FPGA_RESOURCE = "fpga_resource"
    SW_PROCESS = "sw_process"
    CPU_AGGREGATE = "cpu_aggregate"
    HW_PROCESS = "hw_process"
    CHANNEL = "channel"
    PCIE_AGGREGATE = "pcie_aggregate"

    ORDER = (FPGA_RESOURCE, SW_PROCESS, CPU_AGGREGATE, HW_PROCESS, CHANNEL, PCIE_AGGREGATE)

    LABELS = {
        FPGA_RESOURCE: "fpga resource",
        SW_PROCESS: "sw process",
        CPU_AGGREGATE: "cpu aggregate",
        HW_PROCESS: "hw process",
        CHANNEL: "channel",
        PCIE_AGGREGATE: "pcie aggregate",
    }


@dataclass(frozen=True)
class Constraint:
    """One cap on the iteration rate λ (or, for fpga_resource, a capacity check)."""
    family: str
    subject: Optional[str]
    cap: Fraction
    utilization: float = 0.0

    @property
    def sort_key(self) -> tuple:
        return (ConstraintFamily.ORDER.index(self.family), self.subject or "")

    @property
    def descriptor(self) -> str:
        label = ConstraintFamily.LABELS[self.family]
        return f"{label} {self.subject}" if self.subject else label


@dataclass(frozen=True)
class Evaluation:
    """Steady-state prediction for one (problem, assignment) pair."""
    assignment: Assignment
    feasible: bool
    throughput_lambda: Optional[Fraction] = None
    sink_rate: Optional[Fraction] = None
    constraints: Tuple[Constraint, ...] = ()
    binding_constraints: Tuple[Constraint, ...] = ()
    utilization: Dict[str, float] = field(default_factory=dict)
    overfull_resources: Tuple[str, ...] = ()
    crossing_bytes_per_second: Optional[Fraction] = None

    @property
    def lambda_value(self) -> float:
        """λ as a float, 0.0 when infeasible."""
        return float(self.throughput_lambda) if self.throughput_lambda is not None else 0.0
