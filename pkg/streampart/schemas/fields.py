"""Custom marshmallow fields for exact rationals and the unbounded sentinel."""
from fractions import Fraction
from numbers import Integral

from marshmallow import ValidationError, fields

from streampart.models.platform import UNBOUNDED, is_unbounded


def to_fraction(value) -> Fraction:
    """Convert a file value (int, decimal, [num, den]) to an exact Fraction."""
    if isinstance(value, bool):
        raise ValidationError("Not a valid rational.")
    if isinstance(value, Integral):
        return Fraction(int(value))
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # Decimal text of the float, not its binary expansion.
        return Fraction(repr(value))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        num, den = value
        if (isinstance(num, Integral) and isinstance(den, Integral)
                and not isinstance(num, bool) and not isinstance(den, bool) and den != 0):
            return Fraction(int(num), int(den))
    raise ValidationError("Not a valid rational: expected a number or an integer pair [num, den].")


def from_fraction(value: Fraction):
    """Emit a Fraction as an int when whole, else as an integer pair."""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return [value.numerator, value.denominator]


class Rational(fields.Field):
    """An exact rational number."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return from_fraction(value)

    def _deserialize(self, value, attr, data, **kwargs):
        return to_fraction(value)


class RateOrUnbounded(Rational):
    """A rational rate or the string "unbounded"."""

    def _serialize(self, value, attr, obj, **kwargs):
        if is_unbounded(value):
            return UNBOUNDED
        return super()._serialize(value, attr, obj, **kwargs)

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, str):
            if value == UNBOUNDED:
                return UNBOUNDED
            raise ValidationError(f"Not a valid rate: only the string '{UNBOUNDED}' is allowed.")
        return super()._deserialize(value, attr, data, **kwargs)


class Utilization(fields.Field):
    """A utilization fraction, emitted as ">1" when over budget."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        if value > 1 + 1e-12:
            return ">1"
        return round(float(value), 12)

    def _deserialize(self, value, attr, data, **kwargs):
        if value == ">1":
            return float("inf")
        return float(value)


class PlacementOption(fields.Field):
    """An assignment entry: "sw" or {"hw": R}."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value == 0:
            return "sw"
        return {"hw": int(value)}

    def _deserialize(self, value, attr, data, **kwargs):
        if value == "sw":
            return 0
        if isinstance(value, dict) and set(value) == {"hw"}:
            r = value["hw"]
            if isinstance(r, Integral) and not isinstance(r, bool) and r >= 1:
                return int(r)
        raise ValidationError('Not a valid placement: expected "sw" or {"hw": R} with R >= 1.')
