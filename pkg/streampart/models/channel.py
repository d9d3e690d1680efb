"""Channel model."""
from dataclasses import dataclass

from streampart.models.platform import UNBOUNDED, Rate


@dataclass(frozen=True)
class ChannelSpec:
    """A directed streaming channel between two processes."""
    id: str
    producer: str
    consumer: str
    prod_rate: int = 1
    cons_rate: int = 1
    token_bytes: int = 1
    bandwidth_cap: Rate = UNBOUNDED
    scale_with_replication: bool = True

    @property
    def batch_bytes(self) -> int:
        """Bytes moved per producer firing."""
        return self.prod_rate * self.token_bytes
