"""File access around the engine: loading universes and documents, writing output."""

from __future__ import annotations

import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import TextIO

from engine.errors import ConceptSelectionError
from engine.universe_file import parse_universe_definition
from engine.xml_document import parse_document
from engine.xml_schema import parse_schema
from schemas.concept import Concept, ConceptDocument
from schemas.universe import UniverseSchema

logger = logging.getLogger("attribcalc.services.files")


def read_text(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def parse_universe_source(text: str) -> UniverseSchema:
    """A universe from either an XML Schema or a plain-text definition."""
    if text.lstrip().startswith("<"):
        return parse_schema(text)
    return parse_universe_definition(text)


def load_universe(path: Path) -> UniverseSchema:
    schema = parse_universe_source(read_text(path))
    logger.info("Loaded universe %s (%d attributes) from %s", schema.name, len(schema.attributes), path)
    return schema


def load_document(path: Path) -> ConceptDocument:
    doc = parse_document(read_text(path))
    logger.info("Loaded document <%s> with %d concept(s) from %s", doc.universe_name, len(doc.concepts), path)
    return doc


def select_concept(doc: ConceptDocument, selector: str) -> Concept:
    """Resolve *selector* as a concept name first, then as a zero-based index."""
    named = [c for c in doc.concepts if c.name == selector]
    if len(named) > 1:
        raise ConceptSelectionError(f"{len(named)} concepts are named {selector!r}")
    if named:
        return named[0]
    if selector.isdigit():
        index = int(selector)
        if index < len(doc.concepts):
            return doc.concepts[index]
        raise ConceptSelectionError(f"concept index {index} out of range ({len(doc.concepts)} concept(s))")
    raise ConceptSelectionError(f"no concept named {selector!r}")


@contextmanager
def open_output(path: Path | None) -> Iterator[TextIO]:
    """Write to *path*, or to standard output when it is ``None``."""
    if path is None:
        yield sys.stdout
        sys.stdout.flush()
        return
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        yield handle
