"""Problem file schemas."""
from marshmallow import RAISE, Schema, ValidationError, fields, post_dump, post_load, validate, validates_schema

from streampart.models import ChannelSpec, HwProfile, Placement, PlatformSpec, ProblemSpec, ProcessSpec, UNBOUNDED
from streampart.schemas.fields import RateOrUnbounded, Rational


def ResourceVectorField(**kwargs) -> fields.Dict:
    """A resource-kind to integer-units mapping."""
    return fields.Dict(keys=fields.String(), values=fields.Integer(strict=True), **kwargs)


def _drop_absent(data: dict, keys: tuple) -> dict:
    """Remove optional keys whose value is None."""
    for key in keys:
        if data.get(key) is None:
            data.pop(key, None)
    return data


class PlatformSchema(Schema):
    class Meta:
        unknown = RAISE

    cpu_cores = Rational(required=True)
    resource_kinds = fields.List(fields.String(), required=True)
    fpga_capacity = ResourceVectorField(required=True)
    pcie_bandwidth = RateOrUnbounded(required=True)

    @post_load
    def make_platform(self, data, **kwargs):
        data["resource_kinds"] = tuple(data["resource_kinds"])
        return PlatformSpec(**data)


class HwProfileSchema(Schema):
    class Meta:
        unknown = RAISE

    base_throughput = Rational(required=True)
    resource_fixed = ResourceVectorField(load_default=dict)
    resource_per_replica = ResourceVectorField(load_default=dict)
    r_max = fields.Integer(required=True, strict=True)
    throughput_table = fields.List(Rational(), allow_none=True, load_default=None)

    @post_load
    def make_profile(self, data, **kwargs):
        if data.get("throughput_table") is not None:
            data["throughput_table"] = tuple(data["throughput_table"])
        return HwProfile(**data)

    @post_dump
    def drop_absent(self, data, **kwargs):
        return _drop_absent(data, ("throughput_table",))


class ProcessSchema(Schema):
    class Meta:
        unknown = RAISE

    id = fields.String(required=True)
    placement = fields.String(validate=validate.OneOf(Placement.ALL), load_default=None)
    sw_throughput = RateOrUnbounded(required=True)
    hw_profile = fields.Nested(HwProfileSchema, allow_none=True, load_default=None)

    @post_load
    def make_process(self, data, **kwargs):
        if data.get("placement") is None:
            data["placement"] = Placement.FREE if data.get("hw_profile") else Placement.PINNED_SW
        return ProcessSpec(**data)

    @post_dump
    def drop_absent(self, data, **kwargs):
        return _drop_absent(data, ("hw_profile",))


class ChannelSchema(Schema):
    class Meta:
        unknown = RAISE

    id = fields.String(required=True)
    producer = fields.String(required=True)
    consumer = fields.String(required=True)
    prod_rate = fields.Integer(required=True, strict=True)
    cons_rate = fields.Integer(required=True, strict=True)
    token_bytes = fields.Integer(required=True, strict=True)
    bandwidth_cap = RateOrUnbounded(load_default=UNBOUNDED)
    scale_with_replication = fields.Boolean(load_default=True)

    @post_load
    def make_channel(self, data, **kwargs):
        return ChannelSpec(**data)


class ProblemSchema(Schema):
    """The whole problem file."""

    class Meta:
        unknown = RAISE

    platform = fields.Nested(PlatformSchema, required=True)
    processes = fields.List(fields.Nested(ProcessSchema), required=True)
    channels = fields.List(fields.Nested(ChannelSchema), required=True)
    sink = fields.String(required=True)
    provenance = fields.Dict(allow_none=True, load_default=None)

    @validates_schema
    def validate_unique_ids(self, data, **kwargs):
        for key in ("processes", "channels"):
            seen = set()
            for item in data.get(key, []):
                if item.id in seen:
                    raise ValidationError(f"duplicate id '{item.id}'", key)
                seen.add(item.id)

    @post_load
    def make_problem(self, data, **kwargs):
        data["processes"] = tuple(data["processes"])
        data["channels"] = tuple(data["channels"])
        return ProblemSpec(**data)

    @post_dump
    def drop_absent(self, data, **kwargs):
        return _drop_absent(data, ("provenance",))
