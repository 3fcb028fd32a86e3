"""Plain-text universe definitions.

::

    universe: emerald
    namespace: http://www.math-it.org/xml/2002/emerald.xsd
    headShape: round, square, octagon
    isSmiling: true, false

``universe`` and ``namespace`` are header keys and cannot name attributes.
Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

from pydantic import ValidationError

from engine.errors import UniverseDefinitionError
from schemas.universe import AttributeDef, UniverseSchema

_HEADERS = ("universe", "namespace")


def parse_universe_definition(text: str) -> UniverseSchema:
    headers: dict[str, str] = {}
    attributes: list[AttributeDef] = []
    seen: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        key, rest = key.strip(), rest.strip()
        if not sep or not key:
            raise UniverseDefinitionError("expected 'name: value, value, ...'", line=lineno)
        if key in _HEADERS:
            if key in headers:
                raise UniverseDefinitionError(f"duplicate header {key!r}", line=lineno)
            headers[key] = rest
            continue
        if key in seen:
            raise UniverseDefinitionError(f"duplicate attribute {key!r} (first on line {seen[key]})", line=lineno)
        seen[key] = lineno
        values = tuple(v.strip() for v in rest.split(",")) if rest else ()
        try:
            attributes.append(AttributeDef(name=key, range=values))
        except ValidationError as exc:
            raise UniverseDefinitionError(f"invalid attribute {key!r}: {exc.errors()[0]['msg']}", line=lineno) from exc

    if "universe" not in headers:
        raise UniverseDefinitionError("missing 'universe: <name>' header")
    try:
        return UniverseSchema(
            name=headers["universe"],
            namespace=headers.get("namespace", ""),
            attributes=tuple(attributes),
        )
    except ValidationError as exc:
        raise UniverseDefinitionError(f"invalid universe: {exc.errors()[0]['msg']}") from exc


def format_universe_definition(schema: UniverseSchema) -> str:
    lines = [f"universe: {schema.name}"]
    if schema.namespace:
        lines.append(f"namespace: {schema.namespace}")
    lines.extend(f"{attr.name}: {', '.join(attr.range)}" for attr in schema.attributes)
    return "\n".join(lines) + "\n"
