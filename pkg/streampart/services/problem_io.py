"""Reading and writing problem and assignment files."""
import json
from fractions import Fraction

from marshmallow import ValidationError

from streampart.exceptions import ProblemFormatError
from streampart.models import Assignment, ProblemSpec
from streampart.schemas import ProblemSchema, assignment_field

FORMAT_VERSION = "1"


def _flatten_messages(messages, prefix: str = "") -> list:
    """Turn marshmallow's nested error dict into "path: message" lines."""
    lines = []
    if isinstance(messages, dict):
        for key in sorted(messages, key=str):
            if isinstance(key, int):
                path = f"{prefix}[{key}]"
            elif key == "_schema":
                path = prefix
            else:
                path = f"{prefix}.{key}" if prefix else str(key)
            lines.extend(_flatten_messages(messages[key], path))
    elif isinstance(messages, (list, tuple)):
        for message in messages:
            lines.extend(_flatten_messages(message, prefix))
    else:
        lines.append(f"{prefix or '(root)'}: {messages}")
    return lines


def load_json(text: str):
    """Parse JSON text, keeping decimals exact."""
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as e:
        raise ProblemFormatError(e.msg, line=e.lineno, column=e.colno) from e


def dumps_json(data) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True, default=float) + "\n"


def parse_problem(text: str) -> ProblemSpec:
    """Parse a problem file into a ProblemSpec with all defaults filled."""
    data = load_json(text)
    if not isinstance(data, dict):
        raise ProblemFormatError("problem file must contain a JSON object")
    try:
        return ProblemSchema().load(data)
    except ValidationError as e:
        raise ProblemFormatError("; ".join(_flatten_messages(e.messages))) from e


def problem_to_dict(problem: ProblemSpec) -> dict:
    return ProblemSchema().dump(problem)


def serialize_problem(problem: ProblemSpec) -> str:
    """Write a ProblemSpec as canonical problem-file JSON."""
    return dumps_json(problem_to_dict(problem))


def parse_assignment(text: str) -> Assignment:
    """Parse an assignment file: {"B": {"hw": 2}, "A": "sw"}."""
    data = load_json(text)
    if not isinstance(data, dict):
        raise ProblemFormatError("assignment file must contain a JSON object")
    try:
        return Assignment(assignment_field.deserialize(data))
    except ValidationError as e:
        raise ProblemFormatError("; ".join(_flatten_messages(e.messages))) from e


def assignment_to_dict(assignment: Assignment) -> dict:
    return assignment_field.serialize("replication", assignment)


def serialize_assignment(assignment: Assignment) -> str:
    return dumps_json(assignment_to_dict(assignment))
