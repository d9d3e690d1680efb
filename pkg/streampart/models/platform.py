"""Platform model: CPU, FPGA resources and the PCIe link."""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Tuple, Union

# Sentinel for rates and bandwidths without a limit.
UNBOUNDED = "unbounded"

Rate = Union[Fraction, str]
ResourceVector = Dict[str, int]


def is_unbounded(value) -> bool:
    """Check whether a rate or bandwidth is the unbounded sentinel."""
    return isinstance(value, str) and value == UNBOUNDED


@dataclass(frozen=True)
class PlatformSpec:
    """The host CPU, the FPGA and the link between them."""
    cpu_cores: Fraction
    resource_kinds: Tuple[str, ...]
    fpga_capacity: ResourceVector = field(default_factory=dict)
    pcie_bandwidth: Rate = UNBOUNDED

    def capacity(self, kind: str) -> int:
        """Get the FPGA capacity of one resource kind (0 if undeclared)."""
        return self.fpga_capacity.get(kind, 0)
