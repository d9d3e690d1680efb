"""Process model: placement pins and the HW cost/benefit profile."""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from streampart.models.platform import UNBOUNDED, Rate, ResourceVector, is_unbounded


class Placement:
    """Placement pin constants."""
    PINNED_SW = "pinned_sw"
    PINNED_HW = "pinned_hw"
    FREE = "free"

    ALL = (PINNED_SW, PINNED_HW, FREE)


@dataclass(frozen=True)
class HwProfile:
    """Throughput and resource model of a process implemented on the FPGA."""
    base_throughput: Fraction
    resource_fixed: ResourceVector = field(default_factory=dict)
    resource_per_replica: ResourceVector = field(default_factory=dict)
    r_max: int = 1
    # Firings/second for R = 1..r_max; replaces linear scaling when set.
    throughput_table: Optional[Tuple[Fraction, ...]] = None

    def throughput(self, r: int) -> Fraction:
        """Firings per second at replication factor r."""
        if self.throughput_table is not None:
            return self.throughput_table[r - 1]
        return r * self.base_throughput

    def resources(self, r: int) -> ResourceVector:
        """FPGA resources consumed at replication factor r."""
        kinds = set(self.resource_fixed) | set(self.resource_per_replica)
        return {
            kind: self.resource_fixed.get(kind, 0) + r * self.resource_per_replica.get(kind, 0)
            for kind in sorted(kinds)
        }

    @property
    def is_free_kernel(self) -> bool:
        """True when the kernel costs no FPGA resources at all."""
        return not any(self.resource_fixed.values()) and not any(self.resource_per_replica.values())


@dataclass(frozen=True)
class ProcessSpec:
    """A node of the dataflow graph."""
    id: str
    placement: str = Placement.PINNED_SW
    sw_throughput: Rate = UNBOUNDED
    hw_profile: Optional[HwProfile] = None

    @property
    def allows_sw(self) -> bool:
        return self.placement != Placement.PINNED_HW

    @property
    def allows_hw(self) -> bool:
        return self.placement != Placement.PINNED_SW and self.hw_profile is not None

    @property
    def sw_unbounded(self) -> bool:
        return is_unbounded(self.sw_throughput)

    def options(self) -> List[int]:
        """Placement options in tie-break order: 0 is SW, r >= 1 is HW(r)."""
        options = [0] if self.allows_sw else []
        if self.allows_hw:
            options.extend(range(1, self.hw_profile.r_max + 1))
        return options
