"""Domain models."""
from streampart.models.platform import UNBOUNDED, PlatformSpec, ResourceVector, is_unbounded
from streampart.models.process import HwProfile, Placement, ProcessSpec
from streampart.models.channel import ChannelSpec
from streampart.models.problem import ProblemSpec
from streampart.models.assignment import SW, Assignment, describe_option
from streampart.models.diagnostic import Diagnostic, Severity
from streampart.models.evaluation import Constraint, ConstraintFamily, Evaluation
from streampart.models.solution import Solution, SolverStats
from streampart.models.simulation import ChannelCounters, Comparison, SimConfig, SimReport, TraceRecord
from streampart.models.measurement import QUANTITIES, MeasurementRecord, SubjectKind

__all__ = [
    "UNBOUNDED",
    "PlatformSpec",
    "ResourceVector",
    "is_unbounded",
    "HwProfile",
    "Placement",
    "ProcessSpec",
    "ChannelSpec",
    "ProblemSpec",
    "SW",
    "Assignment",
    "describe_option",
    "Diagnostic",
    "Severity",
    "Constraint",
    "ConstraintFamily",
    "Evaluation",
    "Solution",
    "SolverStats",
    "ChannelCounters",
    "Comparison",
    "SimConfig",
    "SimReport",
    "TraceRecord",
    "QUANTITIES",
    "MeasurementRecord",
    "SubjectKind",
]
