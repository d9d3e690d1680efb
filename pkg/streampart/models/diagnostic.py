"""Validation diagnostics."""
from dataclasses import dataclass


class Severity:
    """Diagnostic severity constants."""
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding."""
    severity: str
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.location}: {self.message}"

    @property
    def is_error(self) -> bool:
        return self.severity == Severity.ERROR
