"""Selectors, rules, concepts and concept documents."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from types import MappingProxyType

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from schemas.universe import ObjectInstance


class Selector(BaseModel):
    """``{x : a(x) in allowed}``.

    A singleton ``allowed`` is an elementary selector; a larger set is a
    disjunction of elementary selectors on one attribute; an empty set
    selects nothing.
    """

    model_config = ConfigDict(frozen=True)

    attribute: str
    allowed: frozenset[str]

    @classmethod
    def of(cls, attribute: str, *values: str) -> Selector:
        return cls(attribute=attribute, allowed=frozenset(values))

    @property
    def is_elementary(self) -> bool:
        return len(self.allowed) == 1


class Rule(BaseModel):
    """Conjunction of selectors, at most one per attribute.

    Attributes without a selector are "don't care".
    """

    model_config = ConfigDict(frozen=True)

    constraints: Mapping[str, Selector] = Field(default_factory=dict, validate_default=True)

    @field_validator("constraints", mode="after")
    @classmethod
    def _read_only(cls, constraints: Mapping[str, Selector]) -> Mapping[str, Selector]:
        return MappingProxyType(dict(constraints))

    @model_validator(mode="after")
    def _keys_match_selectors(self) -> Rule:
        for key, selector in self.constraints.items():
            if key != selector.attribute:
                raise ValueError(f"constraint key {key!r} does not match selector attribute {selector.attribute!r}")
        return self

    def __hash__(self) -> int:
        return hash(frozenset(self.constraints.values()))

    @classmethod
    def elementary(cls, pairs: Mapping[str, str]) -> Rule:
        """Rule from ``{attribute: value}``, one elementary selector each."""
        return cls(constraints={a: Selector.of(a, w) for a, w in pairs.items()})

    @classmethod
    def from_sets(cls, sets: Mapping[str, Iterable[str]]) -> Rule:
        return cls(constraints={a: Selector(attribute=a, allowed=frozenset(ws)) for a, ws in sets.items()})

    @property
    def is_elementary(self) -> bool:
        return all(s.is_elementary for s in self.constraints.values())


class Concept(BaseModel):
    """Union of rules (disjunctive normal form), optionally named."""

    model_config = ConfigDict(frozen=True)

    name: str | None = None
    rules: tuple[Rule, ...] = ()


class LabeledExample(BaseModel):
    model_config = ConfigDict(frozen=True)

    object: ObjectInstance
    positive: bool

    @property
    def label(self) -> str:
        return "positive" if self.positive else "negative"


class ConceptDocument(BaseModel):
    """XML-level artifact: a universe root element holding concepts."""

    model_config = ConfigDict(frozen=True)

    universe_name: str
    namespace: str = ""
    # Set when the source used namespace prefixes; output always uses a default namespace.
    prefixed: bool = False
    concepts: tuple[Concept, ...] = ()
