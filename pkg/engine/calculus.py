"""Attributional calculus over a finite universe.

Every rule is compiled to a *box*: one bitmask per attribute, bit ``i`` set
when the ``i``-th range value (declaration order) is allowed.  An absent
constraint is the full mask.  Matching, counting and enumeration all work on
boxes and on index tuples; ``ObjectInstance`` values are produced only at the
edges.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterable, Iterator

from config import settings
from engine.errors import SchemaMismatchError
from schemas.concept import Concept, LabeledExample, Rule, Selector
from schemas.universe import ObjectInstance, UniverseSchema

logger = logging.getLogger("attribcalc.engine.calculus")

Box = tuple[int, ...]
Index = tuple[int, ...]


# ── Compilation ────────────────────────────────────────────────────────

def _full_mask(size: int) -> int:
    return (1 << size) - 1


def _selector_mask(selector: Selector, schema: UniverseSchema) -> int:
    attr = schema.attribute(selector.attribute)
    mask = 0
    for value in selector.allowed:
        try:
            mask |= 1 << attr.range.index(value)
        except ValueError:
            raise SchemaMismatchError(f"value {value!r} is not in the range of {attr.name!r}") from None
    return mask


def _compile_rule(rule: Rule, schema: UniverseSchema) -> Box:
    box = [_full_mask(len(attr.range)) for attr in schema.attributes]
    for selector in rule.constraints.values():
        box[schema.position(selector.attribute)] = _selector_mask(selector, schema)
    return tuple(box)


def _compile_concept(concept: Concept, schema: UniverseSchema) -> list[Box]:
    return [_compile_rule(rule, schema) for rule in concept.rules]


def _index_of(obj: ObjectInstance, schema: UniverseSchema) -> Index:
    if len(obj.values) != len(schema.attributes):
        raise SchemaMismatchError(
            f"object has {len(obj.values)} value(s), universe {schema.name!r} declares {len(schema.attributes)}"
        )
    try:
        return tuple(attr.range.index(value) for attr, value in zip(schema.attributes, obj.values))
    except ValueError:
        raise SchemaMismatchError(f"object {obj.to_csv()!r} has a value outside its attribute range") from None


def _box_contains(box: Box, index: Index) -> bool:
    return all(mask >> i & 1 for mask, i in zip(box, index))


def _box_size(box: Box) -> int:
    return math.prod(mask.bit_count() for mask in box)


def _to_object(index: Index, schema: UniverseSchema) -> ObjectInstance:
    return ObjectInstance.model_construct(
        values=tuple(attr.range[i] for attr, i in zip(schema.attributes, index))
    )


def _universe_indices(schema: UniverseSchema) -> Iterator[Index]:
    return itertools.product(*(range(len(attr.range)) for attr in schema.attributes))


# ── Universe ───────────────────────────────────────────────────────────

def universe_size(schema: UniverseSchema) -> int:
    """``|W1| * ... * |Wn|``; the empty product is 1."""
    return schema.size()


def attribute_value_pairs(schema: UniverseSchema) -> list[tuple[str, str]]:
    """The attribute-value set, attribute by attribute in declaration order."""
    return [(attr.name, value) for attr in schema.attributes for value in attr.range]


# ── Matching ───────────────────────────────────────────────────────────

def selector_matches(selector: Selector, obj: ObjectInstance, schema: UniverseSchema) -> bool:
    position = schema.position(selector.attribute)
    return obj.values[position] in selector.allowed


def rule_matches(rule: Rule, obj: ObjectInstance, schema: UniverseSchema) -> bool:
    return all(selector_matches(s, obj, schema) for s in rule.constraints.values())


def concept_matches(concept: Concept, obj: ObjectInstance, schema: UniverseSchema) -> bool:
    """Membership of a validated object; raises on arity or range mismatches."""
    index = _index_of(obj, schema)
    return any(_box_contains(box, index) for box in _compile_concept(concept, schema))


# ── Extensions ─────────────────────────────────────────────────────────

def _iter_extension(concept: Concept, schema: UniverseSchema) -> Iterator[Index]:
    boxes = [box for box in _compile_concept(concept, schema) if all(box)]
    if not boxes:
        return
    for index in _universe_indices(schema):
        if any(_box_contains(box, index) for box in boxes):
            yield index


def enumerate_extension(concept: Concept, schema: UniverseSchema) -> Iterator[ObjectInstance]:
    """Yield the concept's members in lexicographic (declaration) order."""
    for index in _iter_extension(concept, schema):
        yield _to_object(index, schema)


def rule_extension_size(rule: Rule, schema: UniverseSchema) -> int:
    return _box_size(_compile_rule(rule, schema))


def intersection_size(rules: Iterable[Rule], schema: UniverseSchema) -> int:
    """Size of the intersection of the given rules' extensions."""
    box = tuple(_full_mask(len(attr.range)) for attr in schema.attributes)
    for rule in rules:
        box = tuple(a & b for a, b in zip(box, _compile_rule(rule, schema)))
    return _box_size(box)


def _inclusion_exclusion(boxes: list[Box], schema: UniverseSchema) -> int:
    total = 0
    visited = 0

    # Depth-first over rule subsets; an empty intersection prunes all supersets.
    def visit(start: int, current: Box, odd: bool) -> None:
        nonlocal total, visited
        for i in range(start, len(boxes)):
            inter = tuple(a & b for a, b in zip(current, boxes[i]))
            if not all(inter):
                continue
            visited += 1
            size = _box_size(inter)
            total += size if odd else -size
            visit(i + 1, inter, not odd)

    visit(0, tuple(_full_mask(len(attr.range)) for attr in schema.attributes), True)
    logger.debug("Inclusion-exclusion visited %d nonempty subset(s)", visited)
    return total


def count_extension(concept: Concept, schema: UniverseSchema, *, rule_limit: int | None = None) -> int:
    """Exact ``|C|`` by inclusion-exclusion over the rules' boxes.

    Contradictory and duplicate rules are dropped first.  When more than
    *rule_limit* rules remain (default ``settings.ie_rule_limit``) the
    extension is counted by streaming instead.
    """
    limit = rule_limit if rule_limit is not None else settings.ie_rule_limit
    boxes = list(dict.fromkeys(box for box in _compile_concept(concept, schema) if all(box)))
    if not boxes:
        return 0
    if len(boxes) > limit:
        logger.debug("Counting %d rules by enumeration (limit %d)", len(boxes), limit)
        return sum(1 for _ in _iter_extension(concept, schema))
    return _inclusion_exclusion(boxes, schema)


def label_examples(concept: Concept, schema: UniverseSchema) -> Iterator[LabeledExample]:
    """Every universe object in lexicographic order, flagged by membership."""
    boxes = [box for box in _compile_concept(concept, schema) if all(box)]
    for index in _universe_indices(schema):
        yield LabeledExample.model_construct(
            object=_to_object(index, schema),
            positive=any(_box_contains(box, index) for box in boxes),
        )


# ── Comparison ─────────────────────────────────────────────────────────

def first_difference(a: Concept, b: Concept, schema: UniverseSchema) -> ObjectInstance | None:
    """First object (lexicographic) in exactly one of the two extensions."""
    left = _iter_extension(a, schema)
    right = _iter_extension(b, schema)
    x = next(left, None)
    y = next(right, None)
    while x is not None or y is not None:
        if x == y:
            x = next(left, None)
            y = next(right, None)
        elif y is None or (x is not None and x < y):
            return _to_object(x, schema)
        else:
            return _to_object(y, schema)
    return None


def equivalent(a: Concept, b: Concept, schema: UniverseSchema) -> bool:
    """Extension equality, by walking both enumerations in lockstep."""
    return first_difference(a, b, schema) is None


# ── Simplification ─────────────────────────────────────────────────────

def _subsumes(general: Box, specific: Box) -> bool:
    return all(g | s == g for g, s in zip(general, specific))


def simplify(concept: Concept, schema: UniverseSchema) -> Concept:
    """Extension-equal concept without contradictory, subsumed or vacuous parts.

    Under mutual subsumption the earlier rule survives; survivors keep their
    order.
    """
    candidates: list[tuple[Rule, Box]] = []
    for rule in concept.rules:
        box = _compile_rule(rule, schema)
        if not all(box):
            continue
        kept = {
            name: selector
            for name, selector in rule.constraints.items()
            if len(selector.allowed) < len(schema.attribute(name).range)
        }
        candidates.append((Rule(constraints=kept), box))

    survivors: list[Rule] = []
    for i, (rule, box) in enumerate(candidates):
        dominated = False
        for j, (_, other) in enumerate(candidates):
            if i == j or not _subsumes(other, box):
                continue
            if not _subsumes(box, other) or j < i:
                dominated = True
                break
        if not dominated:
            survivors.append(rule)

    logger.debug("Simplified %d rule(s) to %d", len(concept.rules), len(survivors))
    return Concept(name=concept.name, rules=tuple(survivors))
