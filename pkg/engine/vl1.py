"""VL1 selector notation: parsing, pretty-printing and lowering to DNF concepts.

Grammar (ASCII renderings of the VL1 symbols)::

    expression  := conjunction { ("v" | "|") conjunction }
    conjunction := selector { ["&"] selector }
    selector    := "[" attribute relation value "]"
    relation    := "=" | "<>" | "!=" | "<" | "<=" | ">" | ">="   (also ≠ ≤ ≥ ≦ ≧)
    value       := plain-token | '"' quoted-string '"'

Relational selectors compare positions in the attribute's declared range.
"""

from __future__ import annotations

import logging
import operator
import re
from collections.abc import Callable

import pyparsing as pp

from engine.errors import VL1SyntaxError, VL1ValueError
from schemas.concept import Concept, Rule, Selector
from schemas.expression import Relation, VL1Expression, VL1Selector
from schemas.universe import ObjectInstance, UniverseSchema

logger = logging.getLogger("attribcalc.engine.vl1")

_RELATION_CHARS = "=<>!≠≤≥≦≧"
_PLAIN_VALUE = rf'[^\[\]"{_RELATION_CHARS}\s]+'

# ── Grammar ────────────────────────────────────────────────────────────

_attribute = pp.Regex(r"[A-Za-z][A-Za-z0-9_]*").set_name("attribute")
_relation = pp.Regex(rf"[{_RELATION_CHARS}]+").set_name("relation")
_value = (pp.QuotedString('"', esc_char="\\") | pp.Regex(_PLAIN_VALUE)).set_name("value")
_selector = pp.Group(
    pp.Suppress("[") + _attribute("attribute") + _relation("relation") + _value("value") + pp.Suppress("]")
).set_name("selector")
_conjunction = pp.Group(_selector + pp.ZeroOrMore(pp.Opt(pp.Suppress("&")) + _selector))
_expression = _conjunction + pp.ZeroOrMore(pp.Suppress(pp.Literal("v") | pp.Literal("|")) + _conjunction)

_COMPARE: dict[Relation, Callable[[int, int], bool]] = {
    Relation.EQ: operator.eq,
    Relation.NE: operator.ne,
    Relation.LT: operator.lt,
    Relation.LE: operator.le,
    Relation.GT: operator.gt,
    Relation.GE: operator.ge,
}


# ── Parsing ────────────────────────────────────────────────────────────

def _build_selector(attribute: str, token: str, value: str, schema: UniverseSchema) -> VL1Selector:
    if not schema.has_attribute(attribute):
        raise VL1ValueError(f"unknown attribute {attribute!r}")
    relation = Relation.from_token(token)
    if relation is None:
        raise VL1ValueError(f"unknown relation {token!r} in selector on {attribute!r}")
    if value not in schema.attribute(attribute).range:
        raise VL1ValueError(f"value {value!r} is not in the range of {attribute!r}")
    return VL1Selector(attribute=attribute, relation=relation, value=value)


def parse_vl1(text: str, schema: UniverseSchema) -> VL1Expression:
    """Parse *text* and check every selector against *schema*."""
    try:
        parsed = _expression.parse_string(text, parse_all=True)
    except pp.ParseException as exc:
        expected = str(exc.msg).removeprefix("Expected ")
        raise VL1SyntaxError("invalid VL1 expression", position=exc.loc, expected=expected) from exc

    disjuncts = tuple(
        tuple(_build_selector(s["attribute"], s["relation"], s["value"], schema) for s in conjunction)
        for conjunction in parsed
    )
    return VL1Expression(disjuncts=disjuncts)


def _format_value(value: str) -> str:
    if re.fullmatch(_PLAIN_VALUE, value):
        return value
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def format_vl1(expr: VL1Expression) -> str:
    """Canonical text: ``[a=w][b<>v] v [c>=u]``."""
    return " v ".join(
        "".join(f"[{s.attribute}{s.relation.value}{_format_value(s.value)}]" for s in conjunction)
        for conjunction in expr.disjuncts
    )


# ── Semantics ──────────────────────────────────────────────────────────

def expand_selector(selector: VL1Selector, schema: UniverseSchema) -> Selector:
    """Rewrite a general selector as the set of values it admits."""
    values = schema.attribute(selector.attribute).range
    pivot = values.index(selector.value)
    compare = _COMPARE[selector.relation]
    allowed = frozenset(v for i, v in enumerate(values) if compare(i, pivot))
    return Selector(attribute=selector.attribute, allowed=allowed)


def lower_to_concept(expr: VL1Expression, schema: UniverseSchema, *, name: str | None = None) -> Concept:
    """One rule per conjunction; selectors on the same attribute intersect."""
    rules: list[Rule] = []
    for conjunction in expr.disjuncts:
        allowed: dict[str, frozenset[str]] = {}
        for vl1_selector in conjunction:
            expanded = expand_selector(vl1_selector, schema).allowed
            current = allowed.get(vl1_selector.attribute)
            allowed[vl1_selector.attribute] = expanded if current is None else current & expanded
        rules.append(Rule.from_sets(allowed))
    logger.debug("Lowered %d disjunct(s) to rules", len(rules))
    return Concept(name=name, rules=tuple(rules))


def evaluate_vl1(expr: VL1Expression, obj: ObjectInstance, schema: UniverseSchema) -> bool:
    """Evaluate *expr* on one object by comparing range positions directly."""

    def holds(selector: VL1Selector) -> bool:
        attr = schema.attribute(selector.attribute)
        actual = attr.range.index(obj.values[schema.position(selector.attribute)])
        return _COMPARE[selector.relation](actual, attr.range.index(selector.value))

    return any(all(holds(s) for s in conjunction) for conjunction in expr.disjuncts)
