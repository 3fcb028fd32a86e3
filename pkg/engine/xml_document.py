"""Concept documents: the ``<universe><concept><rule .../></concept></universe>`` format.

A selector is an attribute-value pair on a ``rule`` element, a rule is the
list of pairs on one element, and a concept is the union of its ``rule``
children.  The root element is named after the universe.
"""

from __future__ import annotations

import itertools
import logging
import math
import re
from collections import Counter
from collections.abc import Iterator

from lxml import etree

from config import settings
from engine.errors import DocumentError, ExpansionLimitError, SchemaMismatchError, SerializationError
from schemas.concept import Concept, ConceptDocument, Rule, Selector
from schemas.report import Severity, ValidationIssue, ValidationReport
from schemas.universe import UniverseSchema

logger = logging.getLogger("attribcalc.engine.xml_document")

XML_DECLARATION = '<?xml version="1.0" encoding="UTF-8"?>\n'
CONCEPT_TAG = "concept"
RULE_TAG = "rule"
NAME_ATTRIBUTE = "name"

_COMMENT = re.compile(r"<!--.*?-->", re.S)
_UNSUPPORTED_MARKUP: list[tuple[re.Pattern[str], str]] = [
    (re.compile(r"<!DOCTYPE"), "DTD declarations are not supported"),
    (re.compile(r"<!\[CDATA\["), "CDATA sections are not supported"),
    (re.compile(r"<\?(?!xml[\s?])"), "processing instructions are not supported"),
]


def _hardened_parser() -> etree.XMLParser:
    return etree.XMLParser(
        remove_comments=True,
        resolve_entities=False,
        load_dtd=False,
        no_network=True,
        huge_tree=False,
    )


def parse_xml(text: str) -> etree._Element:
    """Parse the supported XML subset and return the root element.

    Shared with the schema reader.  Comments are dropped; DTDs, CDATA and
    processing instructions are rejected.
    """
    stripped = _COMMENT.sub("", text)
    for pattern, message in _UNSUPPORTED_MARKUP:
        if pattern.search(stripped):
            raise DocumentError(message)
    try:
        return etree.fromstring(text.encode("utf-8"), _hardened_parser())
    except etree.XMLSyntaxError as exc:
        line, column = exc.position if exc.position else (None, None)
        raise DocumentError(f"malformed XML: {exc.msg}", line=line, column=column) from exc


def split_tag(tag: str) -> tuple[str, str]:
    """``"{ns}local"`` -> ``("ns", "local")``; unqualified tags get ``""``."""
    qname = etree.QName(tag)
    return qname.namespace or "", qname.localname


# ── Parsing ────────────────────────────────────────────────────────────

def _reject_text(element: etree._Element, where: str) -> None:
    if element.text and element.text.strip():
        raise DocumentError(f"unexpected text inside {where}", line=element.sourceline)
    for child in element:
        if child.tail and child.tail.strip():
            raise DocumentError(f"unexpected text inside {where}", line=child.sourceline)


def _expect_child(element: etree._Element, namespace: str, local: str, depth: int) -> None:
    child_ns, child_local = split_tag(element.tag)
    if child_local != local or child_ns != namespace:
        raise DocumentError(
            f"unexpected element <{child_local}> at depth {depth} (expected <{local}>)",
            line=element.sourceline,
        )


def _parse_rule(element: etree._Element, namespace: str) -> Rule:
    _expect_child(element, namespace, RULE_TAG, 2)
    if len(element):
        raise DocumentError(
            f"unexpected element <{split_tag(element[0].tag)[1]}> at depth 3", line=element[0].sourceline
        )
    if element.text and element.text.strip():
        raise DocumentError("unexpected text inside <rule>", line=element.sourceline)
    return Rule(constraints={key: Selector.of(key, value) for key, value in element.attrib.items()})


def _parse_concept(element: etree._Element, namespace: str) -> Concept:
    _expect_child(element, namespace, CONCEPT_TAG, 1)
    _reject_text(element, "<concept>")
    for key in element.attrib:
        if key != NAME_ATTRIBUTE:
            raise DocumentError(f"unexpected attribute {key!r} on <concept>", line=element.sourceline)
    return Concept(
        name=element.get(NAME_ATTRIBUTE),
        rules=tuple(_parse_rule(child, namespace) for child in element),
    )


def parse_document(text: str) -> ConceptDocument:
    """Read a concept document.  No universe checks happen here."""
    root = parse_xml(text)
    namespace, universe_name = split_tag(root.tag)
    if root.attrib:
        raise DocumentError(f"unexpected attribute {next(iter(root.attrib))!r} on <{universe_name}>")
    _reject_text(root, f"<{universe_name}>")
    concepts = tuple(_parse_concept(child, namespace) for child in root)
    prefixed = any(element.prefix is not None for element in root.iter())
    logger.debug("Parsed document <%s> with %d concept(s)", universe_name, len(concepts))
    return ConceptDocument(universe_name=universe_name, namespace=namespace, prefixed=prefixed, concepts=concepts)


# ── Serialization ──────────────────────────────────────────────────────

def _expand_rule(rule: Rule, schema: UniverseSchema) -> Iterator[list[tuple[str, str]]]:
    """Cross product of a rule's allowed sets, in declaration order."""
    columns: list[list[tuple[str, str]]] = []
    for attr in schema.attributes:
        selector = rule.constraints.get(attr.name)
        if selector is not None:
            columns.append([(attr.name, v) for v in attr.range if v in selector.allowed])
    for combination in itertools.product(*columns):
        yield list(combination)


def _check_rule(rule: Rule, schema: UniverseSchema) -> None:
    for name, selector in rule.constraints.items():
        if not schema.has_attribute(name):
            raise SchemaMismatchError(f"attribute {name!r} is not declared in universe {schema.name!r}")
        outside = selector.allowed - set(schema.attribute(name).range)
        if outside:
            raise SchemaMismatchError(f"value {min(outside)!r} is not in the range of {name!r}")


def _emitted_rules(rule: Rule) -> int:
    return math.prod(len(s.allowed) for s in rule.constraints.values())


def serialize_document(
    doc: ConceptDocument,
    schema: UniverseSchema,
    *,
    expand: bool = True,
    expansion_limit: int | None = None,
) -> str:
    """Canonical instance text for *doc*.

    Value-set selectors are expanded into sibling ``rule`` elements (a rule
    with an empty selector emits none) unless *expand* is false.
    """
    limit = expansion_limit if expansion_limit is not None else settings.expansion_limit
    emitted = 0
    for concept in doc.concepts:
        for rule in concept.rules:
            _check_rule(rule, schema)
            if not rule.is_elementary and not expand:
                raise SerializationError(f"concept {concept.name or '(unnamed)'} has a non-elementary rule")
            emitted += _emitted_rules(rule)
    if emitted > limit:
        raise ExpansionLimitError(f"expansion would emit {emitted} rule elements (limit {limit})")
    logger.debug("Serializing %d rule element(s)", emitted)

    def tag(local: str) -> str:
        return f"{{{doc.namespace}}}{local}" if doc.namespace else local

    root = etree.Element(tag(doc.universe_name), nsmap={None: doc.namespace} if doc.namespace else None)
    for concept in doc.concepts:
        concept_el = etree.SubElement(root, tag(CONCEPT_TAG))
        if concept.name is not None:
            concept_el.set(NAME_ATTRIBUTE, concept.name)
        for rule in concept.rules:
            for pairs in _expand_rule(rule, schema):
                rule_el = etree.SubElement(concept_el, tag(RULE_TAG))
                for name, value in pairs:
                    rule_el.set(name, value)
    return XML_DECLARATION + etree.tostring(root, pretty_print=True, encoding="unicode")


# ── Validation ─────────────────────────────────────────────────────────

def validate_document(doc: ConceptDocument, schema: UniverseSchema) -> ValidationReport:
    """Check *doc* against *schema*; every finding becomes a report entry."""
    issues: list[ValidationIssue] = []

    def report(severity: Severity, path: str, code: str, message: str) -> None:
        issues.append(ValidationIssue(severity=severity, path=path, code=code, message=message))

    root_path = f"/{doc.universe_name}"
    if doc.universe_name != schema.name:
        report(Severity.ERROR, root_path, "root-mismatch",
               f"root element <{doc.universe_name}> does not match universe {schema.name!r}")
    if doc.namespace and doc.namespace != schema.namespace:
        report(Severity.ERROR, root_path, "namespace-mismatch",
               f"namespace {doc.namespace!r} does not match {schema.namespace or '(none)'!r}")
    if doc.prefixed:
        report(Severity.ERROR, root_path, "namespace-mismatch",
               "namespace prefixes are not supported; declare the namespace as the default (xmlns=\"...\")")

    names = Counter(c.name for c in doc.concepts if c.name is not None)
    for name, count in names.items():
        if count > 1:
            report(Severity.WARNING, root_path, "duplicate-concept-name", f"{count} concepts are named {name!r}")

    for ci, concept in enumerate(doc.concepts, start=1):
        concept_path = f"{root_path}/concept[{ci}]"
        if not concept.rules:
            report(Severity.WARNING, concept_path, "empty-concept", "concept has no rules; its extension is empty")
        seen: list[Rule] = []
        for ri, rule in enumerate(concept.rules, start=1):
            rule_path = f"{concept_path}/rule[{ri}]"
            if rule in seen:
                report(Severity.WARNING, rule_path, "duplicate-rule",
                       f"rule repeats rule[{seen.index(rule) + 1}] of the same concept")
            seen.append(rule)
            for name, selector in rule.constraints.items():
                attr_path = f"{rule_path}/@{name}"
                if not schema.has_attribute(name):
                    report(Severity.ERROR, attr_path, "undeclared-attribute",
                           f"attribute {name!r} is not declared in universe {schema.name!r}")
                    continue
                declared = schema.attribute(name).range
                for value in sorted(selector.allowed - set(declared)):
                    report(Severity.ERROR, attr_path, "value-out-of-range",
                           f"value {value!r} is not in the range of {name!r}")
                if not selector.allowed:
                    report(Severity.WARNING, attr_path, "contradictory-selector",
                           "selector allows no value; the rule selects nothing")
                elif not selector.is_elementary:
                    report(Severity.WARNING, attr_path, "non-elementary-selector",
                           f"selector allows {len(selector.allowed)} values; it will be expanded on serialization")

    return ValidationReport(issues=tuple(issues))
