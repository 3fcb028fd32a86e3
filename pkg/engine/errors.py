"""Exception hierarchy shared by the engine modules and the CLI."""

from __future__ import annotations


class AttribCalcError(Exception):
    """Base class for every domain error raised by attribcalc."""


class SchemaMismatchError(AttribCalcError):
    """An attribute or value does not belong to the universe in use."""


class ConceptSelectionError(AttribCalcError):
    """A concept selector (name or index) does not resolve to one concept."""


# ── VL1 ────────────────────────────────────────────────────────────────

class VL1Error(AttribCalcError):
    """Base class for VL1 expression errors."""


class VL1SyntaxError(VL1Error):
    """The expression text does not follow the VL1 grammar."""

    def __init__(self, message: str, *, position: int, expected: str) -> None:
        super().__init__(f"{message} at position {position} (expected {expected})")
        self.position = position
        self.expected = expected


class VL1ValueError(VL1Error):
    """Well-formed selector that does not fit the universe."""


# ── XML ────────────────────────────────────────────────────────────────

class DocumentError(AttribCalcError):
    """Malformed XML or a document that breaks the root/concept/rule shape."""

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None) -> None:
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class SchemaShapeError(AttribCalcError):
    """An XML Schema document does not follow the concept-schema template."""


class SerializationError(AttribCalcError):
    """A document cannot be written in the instance format."""


class ExpansionLimitError(SerializationError):
    """Cross-product expansion would emit more rule elements than allowed."""


class UniverseDefinitionError(AttribCalcError):
    """A plain-text universe definition is invalid."""

    def __init__(self, message: str, *, line: int | None = None) -> None:
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line
