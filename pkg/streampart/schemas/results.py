"""Schemas for command outputs: assignments, evaluations, solutions, simulation reports."""
from marshmallow import Schema, fields

from streampart.schemas.fields import PlacementOption, Rational, Utilization

# {"B": {"hw": 2}, "A": "sw"}
assignment_field = fields.Dict(keys=fields.String(), values=PlacementOption())


class AssignmentField(fields.Field):
    """Nested Assignment, emitted in assignment-file form."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return assignment_field.serialize("replication", value)


class ConstraintSchema(Schema):
    family = fields.String()
    subject = fields.String(allow_none=True)
    cap = Rational()
    cap_value = fields.Function(lambda c: float(c.cap))
    utilization = Utilization()


class EvaluationSchema(Schema):
    """Evaluation file, mirroring the Evaluation type."""
    assignment = AssignmentField()
    feasible = fields.Boolean()
    throughput_lambda = Rational(allow_none=True)
    throughput_lambda_value = fields.Function(
        lambda e: float(e.throughput_lambda) if e.throughput_lambda is not None else None
    )
    sink_rate = Rational(allow_none=True)
    binding_constraints = fields.List(fields.Nested(ConstraintSchema))
    constraints = fields.List(fields.Nested(ConstraintSchema))
    utilization = fields.Dict(keys=fields.String(), values=Utilization())
    overfull_resources = fields.List(fields.String())
    crossing_bytes_per_second = Rational(allow_none=True)


class SolverStatsSchema(Schema):
    solver = fields.String()
    nodes_explored = fields.Integer()
    nodes_pruned = fields.Integer()
    leaves_evaluated = fields.Integer()
    wall_time = fields.Float()


class SolutionSchema(Schema):
    """Solution file; pass exclude=("stats.wall_time",) for reproducible output."""
    assignment = AssignmentField()
    evaluation = fields.Nested(EvaluationSchema)
    stats = fields.Nested(SolverStatsSchema)


class ChannelCountersSchema(Schema):
    produced = fields.Integer()
    consumed = fields.Integer()
    occupancy = fields.Integer()


class ComparisonSchema(Schema):
    predicted = fields.Float()
    measured = fields.Float()
    relative_error = fields.Float()
    threshold = fields.Float()
    verdict = fields.String()


class SimReportSchema(Schema):
    """Simulation report file."""
    measured_throughput = fields.Float()
    sink_firings = fields.Integer()
    window = fields.Float()
    event_count = fields.Integer()
    utilization = fields.Dict(keys=fields.String(), values=Utilization())
    mean_occupancy = fields.Dict(keys=fields.String(), values=fields.Float())
    firings = fields.Dict(keys=fields.String(), values=fields.Integer())
    channels = fields.Dict(keys=fields.String(), values=fields.Nested(ChannelCountersSchema))
