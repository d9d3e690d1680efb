"""Exception hierarchy with CLI exit codes."""


class StreampartError(Exception):
    """Base class for all expected streampart failures."""
    exit_code = 3


class InvalidInputError(StreampartError):
    """The input files or arguments are malformed or inconsistent."""
    exit_code = 1


class ModelError(StreampartError):
    """The input is well-formed but the modeled system has no usable answer."""
    exit_code = 2


class ProblemFormatError(InvalidInputError):
    """Syntax or schema error in a problem, assignment or measurement file."""

    def __init__(self, message: str, line: int = None, column: int = None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class InvalidProblemError(InvalidInputError):
    """Validation produced at least one error diagnostic."""

    def __init__(self, diagnostics: list):
        self.diagnostics = list(diagnostics)
        errors = [d for d in self.diagnostics if d.severity == "error"]
        first = errors[0] if errors else None
        summary = f"{first.location}: {first.message}" if first else "invalid problem"
        if len(errors) > 1:
            summary += f" (and {len(errors) - 1} more error(s))"
        super().__init__(summary)


class InconsistentRates(InvalidInputError):
    """The rate-balance equations admit only the zero solution."""

    def __init__(self, channel_id: str, message: str = None):
        self.channel_id = channel_id
        super().__init__(message or f"inconsistent rates on channel '{channel_id}'")


class RateOverflowError(InvalidInputError):
    """A repetition count does not fit a signed 64-bit integer."""


class AssignmentError(InvalidInputError):
    """An assignment does not fit the problem it is applied to."""


class IncompleteAssignment(AssignmentError):
    """Some processes have no placement, or unknown processes are named."""


class PinViolation(AssignmentError):
    """A process is placed against its placement pin."""


class RmaxExceeded(AssignmentError):
    """A replication factor lies outside 1..r_max."""


class SearchSpaceTooLarge(InvalidInputError):
    """The exhaustive search space exceeds the configured limit."""

    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"search space has {size} assignments, limit is {limit}")


class SimulationConfigError(InvalidInputError):
    """Simulation parameters violate a precondition."""


class CalibrationError(InvalidInputError):
    """Measurements cannot be applied to the base problem."""


class Infeasible(ModelError):
    """No assignment satisfies the FPGA resource budget."""


class UnboundedThroughput(ModelError):
    """No finite constraint caps the iteration rate."""

    def __init__(self, message: str = "unbounded throughput: no finite constraint"):
        super().__init__(message)


class DeadlockError(ModelError):
    """The simulation stopped making progress."""

    def __init__(self, time: float, cycle: list):
        self.time = time
        self.cycle = list(cycle)
        waits = " -> ".join(f"{a} waits on {b}" for a, b in self.cycle) or "no wait cycle found"
        super().__init__(f"deadlock at t={time:.6g}s: {waits}")


class ComparisonError(ModelError):
    """Measured and predicted throughput cannot be compared."""
