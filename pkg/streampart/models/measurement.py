"""Profiling measurement model."""
from dataclasses import dataclass
from fractions import Fraction


class SubjectKind:
    """Measured subject constants."""
    PROCESS = "process"
    CHANNEL = "channel"


# Paired quantities per subject kind: (numerator, divisor).
QUANTITIES = {
    SubjectKind.PROCESS: ("items", "cpu_seconds"),
    SubjectKind.CHANNEL: ("bytes", "seconds"),
}


@dataclass(frozen=True)
class MeasurementRecord:
    """One row of a profiling CSV."""
    subject_kind: str
    subject_id: str
    quantity: str
    value: Fraction
