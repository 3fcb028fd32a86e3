"""Universe schemas: attributes, their finite ranges, and objects."""

from __future__ import annotations

import math
import re
from collections.abc import Iterable, Sequence

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from engine.errors import SchemaMismatchError

IDENTIFIER_PATTERN = r"^[A-Za-z][A-Za-z0-9_]*$"

# Reserved for the optional concept name on <concept name="...">.
RESERVED_ATTRIBUTE = "name"

# Commas separate values in CSV rows and object literals; control characters
# would not survive XML attribute-value normalisation.
_ILLEGAL_VALUE_CHARS = re.compile(r"[,\x00-\x1f\x7f]")


class AttributeDef(BaseModel):
    """One attribute ``a: X -> W`` with its ordered, finite range ``W``."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(pattern=IDENTIFIER_PATTERN)
    range: tuple[str, ...] = Field(min_length=1)

    @field_validator("range")
    @classmethod
    def _check_range(cls, values: tuple[str, ...]) -> tuple[str, ...]:
        seen: set[str] = set()
        for value in values:
            if not value:
                raise ValueError("range values must be nonempty")
            if _ILLEGAL_VALUE_CHARS.search(value):
                raise ValueError(f"range value {value!r} contains a comma or control character")
            if value in seen:
                raise ValueError(f"duplicate range value {value!r}")
            seen.add(value)
        return values


class ObjectInstance(BaseModel):
    """A full assignment ``(w1, ..., wn)``, in attribute declaration order."""

    model_config = ConfigDict(frozen=True)

    values: tuple[str, ...]

    def to_csv(self) -> str:
        return ",".join(self.values)


class UniverseSchema(BaseModel):
    """Ordered attribute declarations; the universe is their Cartesian product."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(pattern=IDENTIFIER_PATTERN)
    namespace: str = ""
    attributes: tuple[AttributeDef, ...] = ()

    _positions: dict[str, int] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check_attributes(self) -> UniverseSchema:
        seen: set[str] = set()
        for attr in self.attributes:
            if attr.name == RESERVED_ATTRIBUTE:
                raise ValueError(f"attribute name {RESERVED_ATTRIBUTE!r} is reserved for concept names")
            if attr.name in seen:
                raise ValueError(f"duplicate attribute {attr.name!r}")
            seen.add(attr.name)
        return self

    def model_post_init(self, __context: object) -> None:
        self._positions = {attr.name: index for index, attr in enumerate(self.attributes)}

    @classmethod
    def build(cls, name: str, attributes: Iterable[tuple[str, Sequence[str]]], *, namespace: str = "") -> UniverseSchema:
        """Shorthand: ``UniverseSchema.build("toy", [("a", ["x", "y"])])``."""
        return cls(
            name=name,
            namespace=namespace,
            attributes=tuple(AttributeDef(name=n, range=tuple(r)) for n, r in attributes),
        )

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(attr.name for attr in self.attributes)

    def has_attribute(self, name: str) -> bool:
        return name in self._positions

    def position(self, name: str) -> int:
        try:
            return self._positions[name]
        except KeyError:
            raise SchemaMismatchError(f"attribute {name!r} is not declared in universe {self.name!r}") from None

    def attribute(self, name: str) -> AttributeDef:
        return self.attributes[self.position(name)]

    def size(self) -> int:
        return math.prod(len(attr.range) for attr in self.attributes)

    def make_object(self, values: Sequence[str]) -> ObjectInstance:
        """Validate *values* against the declared ranges and wrap them."""
        if len(values) != len(self.attributes):
            raise SchemaMismatchError(
                f"object has {len(values)} value(s), universe {self.name!r} declares {len(self.attributes)} attribute(s)"
            )
        for attr, value in zip(self.attributes, values):
            if value not in attr.range:
                raise SchemaMismatchError(f"value {value!r} is not in the range of {attr.name!r}")
        return ObjectInstance(values=tuple(values))

    def parse_object(self, text: str) -> ObjectInstance:
        """Parse a comma-separated object literal (an empty string is the 0-tuple)."""
        values = [v.strip() for v in text.split(",")] if text.strip() else []
        return self.make_object(values)
