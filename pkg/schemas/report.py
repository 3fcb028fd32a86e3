"""Validation report returned by ``validate_document``."""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, computed_field

# ── Enums ──────────────────────────────────────────────────────────────

class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


_STYLES: dict[Severity, str] = {
    Severity.ERROR: "\x1b[31m",
    Severity.WARNING: "\x1b[33m",
}
_RESET = "\x1b[0m"


# ── Models ─────────────────────────────────────────────────────────────

class ValidationIssue(BaseModel):
    model_config = ConfigDict(frozen=True)

    severity: Severity
    path: str
    code: str
    message: str

    def render(self, *, color: bool = False) -> str:
        label = self.severity.value.upper()
        if color:
            label = f"{_STYLES[self.severity]}{label}{_RESET}"
        return f"{label} {self.path} {self.code}: {self.message}"


class ValidationReport(BaseModel):
    """Findings of a document check; ``valid`` iff there is no error."""

    model_config = ConfigDict(frozen=True)

    issues: tuple[ValidationIssue, ...] = ()

    @computed_field  # type: ignore[prop-decorator]
    @property
    def valid(self) -> bool:
        return not self.errors

    @property
    def errors(self) -> list[ValidationIssue]:
        return [i for i in self.issues if i.severity is Severity.ERROR]

    def codes(self) -> list[str]:
        return [i.code for i in self.issues]

    def render(self, *, color: bool = False) -> list[str]:
        return [issue.render(color=color) for issue in self.issues]
