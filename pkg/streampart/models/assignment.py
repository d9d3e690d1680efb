"""Assignment model: per-process SW or HW(R) placement."""
from dataclasses import dataclass
from typing import Dict, Iterable, Tuple

# Option encoding used throughout: 0 is SW, r >= 1 is HW(r).
SW = 0


def describe_option(option: int) -> str:
    """Human-readable form of a placement option."""
    return "SW" if option == SW else f"HW({option})"


@dataclass(frozen=True)
class Assignment:
    """Placement decision for every process of a problem."""
    replication: Dict[str, int]

    def __repr__(self) -> str:
        parts = ", ".join(f"{pid}={describe_option(r)}" for pid, r in sorted(self.replication.items()))
        return f"<Assignment {parts}>"

    def __getitem__(self, process_id: str) -> int:
        return self.replication[process_id]

    def __contains__(self, process_id: str) -> bool:
        return process_id in self.replication

    @classmethod
    def from_options(cls, process_ids: Iterable[str], options: Iterable[int]) -> "Assignment":
        """Build from options listed in the order of process_ids."""
        return cls(dict(zip(process_ids, options)))

    def options(self, process_ids: Iterable[str]) -> Tuple[int, ...]:
        """Options in the order of process_ids."""
        return tuple(self.replication[pid] for pid in process_ids)
