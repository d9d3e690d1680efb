"""Marshmallow schemas for the file formats."""
from streampart.schemas.problem import ChannelSchema, HwProfileSchema, PlatformSchema, ProblemSchema, ProcessSchema
from streampart.schemas.results import (
    ComparisonSchema,
    EvaluationSchema,
    SimReportSchema,
    SolutionSchema,
    assignment_field,
)

__all__ = [
    "ChannelSchema",
    "HwProfileSchema",
    "PlatformSchema",
    "ProblemSchema",
    "ProcessSchema",
    "ComparisonSchema",
    "EvaluationSchema",
    "SimReportSchema",
    "SolutionSchema",
    "assignment_field",
]
