"""VL1 expression trees."""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator


class Relation(str, Enum):
    EQ = "="
    NE = "<>"
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="

    @classmethod
    def from_token(cls, token: str) -> Relation | None:
        return _RELATION_TOKENS.get(token)


_RELATION_TOKENS: dict[str, Relation] = {
    "=": Relation.EQ,
    "<>": Relation.NE,
    "!=": Relation.NE,
    "≠": Relation.NE,
    "<": Relation.LT,
    "<=": Relation.LE,
    "≤": Relation.LE,
    "≦": Relation.LE,
    ">": Relation.GT,
    ">=": Relation.GE,
    "≥": Relation.GE,
    "≧": Relation.GE,
}


class VL1Selector(BaseModel):
    """``[attribute relation value]``."""

    model_config = ConfigDict(frozen=True)

    attribute: str
    relation: Relation
    value: str


class VL1Expression(BaseModel):
    """Disjunction of conjunctions of VL1 selectors."""

    model_config = ConfigDict(frozen=True)

    disjuncts: tuple[tuple[VL1Selector, ...], ...] = Field(min_length=1)

    @field_validator("disjuncts")
    @classmethod
    def _nonempty_conjunctions(cls, disjuncts: tuple[tuple[VL1Selector, ...], ...]) -> tuple[tuple[VL1Selector, ...], ...]:
        if any(not conjunction for conjunction in disjuncts):
            raise ValueError("every conjunction needs at least one selector")
        return disjuncts
