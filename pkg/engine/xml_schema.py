"""XML Schema documents for concept documents.

The generated schema declares the universe root element holding an unbounded
sequence of ``concept`` elements, each an unbounded sequence of ``rule``
elements whose optional attributes are typed by one enumerated simpleType per
universe attribute.  A ``{true, false}`` range restricts ``xsd:boolean`` with
pattern facets instead of enumerating strings.
"""

from __future__ import annotations

import logging

from lxml import etree
from pydantic import ValidationError

from engine.errors import SchemaShapeError
from engine.xml_document import CONCEPT_TAG, NAME_ATTRIBUTE, RULE_TAG, XML_DECLARATION, parse_xml, split_tag
from schemas.report import Severity, ValidationIssue
from schemas.universe import AttributeDef, UniverseSchema

logger = logging.getLogger("attribcalc.engine.xml_schema")

XSD_NS = "http://www.w3.org/2001/XMLSchema"
BOOLEAN_RANGE = ("true", "false")

_STRING_BASES = {"string", "token", "normalizedString", "NMTOKEN"}


def _xsd(local: str) -> str:
    return f"{{{XSD_NS}}}{local}"


# ── Generation ─────────────────────────────────────────────────────────

def type_names(schema: UniverseSchema) -> dict[str, str]:
    """Attribute name -> simpleType name (first letter uppercased, made unique)."""
    taken: set[str] = set()
    names: dict[str, str] = {}
    for attr in schema.attributes:
        base = attr.name[0].upper() + attr.name[1:]
        candidate, suffix = base, 2
        while candidate in taken:
            candidate, suffix = f"{base}{suffix}", suffix + 1
        if candidate != base:
            logger.warning("Type name %s already used; %s gets %s", base, attr.name, candidate)
        taken.add(candidate)
        names[attr.name] = candidate
    return names


def _element(parent: etree._Element, name: str, *, unbounded: bool) -> etree._Element:
    element = etree.SubElement(parent, _xsd("element"), name=name)
    if unbounded:
        element.set("minOccurs", "0")
        element.set("maxOccurs", "unbounded")
    return element


def _simple_type(parent: etree._Element, type_name: str, attr: AttributeDef) -> None:
    simple = etree.SubElement(parent, _xsd("simpleType"), name=type_name)
    if attr.range == BOOLEAN_RANGE:
        restriction = etree.SubElement(simple, _xsd("restriction"), base="xsd:boolean")
        facet = "pattern"
    else:
        restriction = etree.SubElement(simple, _xsd("restriction"), base="xsd:string")
        facet = "enumeration"
    for value in attr.range:
        etree.SubElement(restriction, _xsd(facet), value=value)


def generate_schema(schema: UniverseSchema) -> str:
    nsmap: dict[str | None, str] = {"xsd": XSD_NS}
    if schema.namespace:
        nsmap[None] = schema.namespace
    root = etree.Element(_xsd("schema"), nsmap=nsmap)
    if schema.namespace:
        root.set("targetNamespace", schema.namespace)
        root.set("elementFormDefault", "qualified")

    universe = _element(root, schema.name, unbounded=False)
    outer = etree.SubElement(
        etree.SubElement(universe, _xsd("complexType")), _xsd("sequence"), minOccurs="0", maxOccurs="unbounded"
    )
    concept_type = etree.SubElement(_element(outer, CONCEPT_TAG, unbounded=True), _xsd("complexType"))
    rule = _element(etree.SubElement(concept_type, _xsd("sequence")), RULE_TAG, unbounded=True)
    etree.SubElement(concept_type, _xsd("attribute"), name=NAME_ATTRIBUTE, type="xsd:string")

    rule_type = etree.SubElement(rule, _xsd("complexType"))
    names = type_names(schema)
    for attr in schema.attributes:
        etree.SubElement(rule_type, _xsd("attribute"), name=attr.name, type=names[attr.name])
    for attr in schema.attributes:
        _simple_type(root, names[attr.name], attr)

    return XML_DECLARATION + etree.tostring(root, pretty_print=True, encoding="unicode")


# ── Reading ────────────────────────────────────────────────────────────

def _resolve(element: etree._Element, qname: str) -> tuple[str, str]:
    prefix, _, local = qname.rpartition(":")
    return element.nsmap.get(prefix or None, ""), local


def _find_declaration(scope: etree._Element, name: str) -> etree._Element:
    found = scope.find(f".//{_xsd('element')}[@name='{name}']")
    if found is None:
        raise SchemaShapeError(f"missing <xsd:element name=\"{name}\"> declaration")
    return found


def _range_of(simple: etree._Element, type_name: str) -> tuple[str, ...]:
    restriction = simple.find(_xsd("restriction"))
    if restriction is None or restriction.get("base") is None:
        raise SchemaShapeError(f"simpleType {type_name!r} has no restriction base")
    base_ns, base = _resolve(restriction, restriction.get("base"))
    if base_ns != XSD_NS or (base not in _STRING_BASES and base != "boolean"):
        raise SchemaShapeError(f"simpleType {type_name!r} restricts unsupported base {restriction.get('base')!r}")

    values: list[str] = []
    for facet in restriction:
        if not isinstance(facet.tag, str):
            continue
        facet_ns, facet_name = split_tag(facet.tag)
        if facet_ns == XSD_NS and facet_name == "annotation":
            continue
        allowed = {"enumeration", "pattern"} if base == "boolean" else {"enumeration"}
        if facet_ns != XSD_NS or facet_name not in allowed:
            raise SchemaShapeError(f"simpleType {type_name!r} uses unsupported facet {facet_name!r}")
        values.append(facet.get("value", ""))
    if base == "boolean" and not values:
        return BOOLEAN_RANGE
    return tuple(values)


def parse_schema(text: str) -> UniverseSchema:
    """Recover a universe from a schema that follows the concept template.

    Accepts the concept declaration either directly in the root's sequence or
    wrapped in a nested unbounded sequence.
    """
    root = parse_xml(text)
    if root.tag != _xsd("schema"):
        raise SchemaShapeError("root element is not <xsd:schema>")
    namespace = root.get("targetNamespace", "")

    universes = root.findall(_xsd("element"))
    if len(universes) != 1:
        raise SchemaShapeError(f"expected exactly one top-level element declaration, found {len(universes)}")
    universe = universes[0]
    rule = _find_declaration(_find_declaration(universe, CONCEPT_TAG), RULE_TAG)
    rule_type = rule.find(_xsd("complexType"))
    if rule_type is None:
        raise SchemaShapeError("rule element declaration has no complexType")

    simple_types = {st.get("name"): st for st in root.findall(_xsd("simpleType"))}
    attributes: list[AttributeDef] = []
    try:
        for decl in rule_type.findall(_xsd("attribute")):
            name = decl.get("name")
            inline = decl.find(_xsd("simpleType"))
            if inline is not None:
                values = _range_of(inline, f"{name} (inline)")
            else:
                type_ref = decl.get("type")
                if type_ref is None:
                    raise SchemaShapeError(f"attribute {name!r} has no type")
                type_ns, type_name = _resolve(decl, type_ref)
                if type_ns == XSD_NS or type_name not in simple_types:
                    raise SchemaShapeError(f"attribute {name!r} references undeclared type {type_ref!r}")
                values = _range_of(simple_types[type_name], type_name)
            attributes.append(AttributeDef(name=name, range=values))
        schema = UniverseSchema(name=universe.get("name", ""), namespace=namespace, attributes=tuple(attributes))
    except ValidationError as exc:
        raise SchemaShapeError(f"schema declares an invalid universe: {exc}") from exc

    logger.debug("Read universe %s with %d attribute(s)", schema.name, len(schema.attributes))
    return schema


# ── Instance checking ──────────────────────────────────────────────────

def schema_violations(text: str, schema: UniverseSchema) -> list[ValidationIssue]:
    """Run an instance document through the XML Schema generated for *schema*.

    Each entry of the schema processor's error log becomes a
    ``schema-violation`` error.
    """
    try:
        validator = etree.XMLSchema(etree.fromstring(generate_schema(schema).encode("utf-8")))
    except etree.XMLSchemaParseError as exc:
        raise SchemaShapeError(f"generated schema is not usable: {exc}") from exc
    if validator.validate(parse_xml(text)):
        return []
    issues = [
        ValidationIssue(
            severity=Severity.ERROR,
            path=entry.path or f"line {entry.line}",
            code="schema-violation",
            message=entry.message,
        )
        for entry in validator.error_log
    ]
    logger.debug("Schema processor reported %d violation(s)", len(issues))
    return issues
