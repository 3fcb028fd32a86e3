"""attribcalc: attributional calculus over finite attribute-value universes.

Command-line entry point.  Every subcommand reads files, writes results to
standard output (or ``--out``) and reports through its exit code:
0 success / positive / valid / equivalent, 1 semantic negative, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import TextIO

from pydantic import ValidationError

from config import settings
from engine.calculus import (
    concept_matches,
    count_extension,
    enumerate_extension,
    first_difference,
    label_examples,
    universe_size,
)
from engine.errors import AttribCalcError, DocumentError
from engine.vl1 import lower_to_concept, parse_vl1
from engine.xml_document import serialize_document, validate_document
from engine.xml_schema import generate_schema, schema_violations
from schemas.cli import CliConfig, OutputFormat
from schemas.concept import Concept, ConceptDocument
from schemas.report import ValidationReport
from schemas.universe import UniverseSchema
from services.files import load_document, load_universe, open_output, read_text, select_concept

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

# ── Logging ────────────────────────────────────────────────────────────

logging.basicConfig(
    level=settings.log_level.upper(),
    format="%(asctime)s | %(name)-30s | %(levelname)-7s | %(message)s",
    stream=sys.stderr,
)
logger = logging.getLogger("attribcalc.cli")


# ── Helpers ────────────────────────────────────────────────────────────

def _use_color(stream: TextIO) -> bool:
    return not settings.no_color and stream.isatty()


def _universe(config: CliConfig) -> UniverseSchema:
    assert config.schema_path is not None
    return load_universe(config.schema_path)


def _concept(schema: UniverseSchema, path: Path, selector: str) -> Concept:
    """Load a document, insist that it validates, and pick one concept."""
    doc = load_document(path)
    report = validate_document(doc, schema)
    if not report.valid:
        raise DocumentError(f"{path} does not validate: {report.errors[0].render()}")
    return select_concept(doc, selector)


def _print(config: CliConfig, text: str) -> None:
    with open_output(config.output_path) as out:
        out.write(text + "\n")


# ── Commands ───────────────────────────────────────────────────────────

def cmd_schema(args: argparse.Namespace, config: CliConfig) -> int:
    assert config.input_path is not None
    schema = load_universe(config.input_path)
    with open_output(config.output_path) as out:
        out.write(generate_schema(schema))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, config: CliConfig) -> int:
    schema = _universe(config)
    assert config.input_path is not None
    report = validate_document(load_document(config.input_path), schema)
    if args.xsd:
        extra = schema_violations(read_text(config.input_path), schema)
        report = ValidationReport(issues=(*report.issues, *extra))
    with open_output(config.output_path) as out:
        for line in report.render(color=_use_color(out)):
            out.write(line + "\n")
        out.write("VALID\n" if report.valid else f"INVALID ({len(report.errors)} errors)\n")
    return EXIT_OK if report.valid else EXIT_NEGATIVE


def cmd_count(args: argparse.Namespace, config: CliConfig) -> int:
    schema = _universe(config)
    assert config.input_path is not None
    concept = _concept(schema, config.input_path, args.concept)
    count = count_extension(concept, schema, rule_limit=config.rule_limit_for_inclusion_exclusion)
    _print(config, f"{count}/{universe_size(schema)}")
    return EXIT_OK


def cmd_match(args: argparse.Namespace, config: CliConfig) -> int:
    schema = _universe(config)
    assert config.input_path is not None
    concept = _concept(schema, config.input_path, args.concept)
    positive = concept_matches(concept, schema.parse_object(args.object), schema)
    _print(config, "positive" if positive else "negative")
    return EXIT_OK if positive else EXIT_NEGATIVE


def cmd_enumerate(args: argparse.Namespace, config: CliConfig) -> int:
    schema = _universe(config)
    assert config.input_path is not None
    concept = _concept(schema, config.input_path, args.concept)
    with open_output(config.output_path) as out:
        if config.format is OutputFormat.CSV:
            out.write(",".join(schema.names) + "\n")
        for obj in enumerate_extension(concept, schema):
            out.write(obj.to_csv() + "\n")
    return EXIT_OK


def cmd_equiv(args: argparse.Namespace, config: CliConfig) -> int:
    schema = _universe(config)
    assert config.input_path is not None
    left = _concept(schema, config.input_path, args.concept)
    right = _concept(schema, args.other_in or config.input_path, args.other_concept)
    witness = first_difference(left, right, schema)
    if witness is None:
        _print(config, "equivalent")
        return EXIT_OK
    _print(config, f"differ\n{witness.to_csv()}")
    return EXIT_NEGATIVE


def cmd_dataset(args: argparse.Namespace, config: CliConfig) -> int:
    schema = _universe(config)
    assert config.input_path is not None
    concept = _concept(schema, config.input_path, args.concept)
    with open_output(config.output_path) as out:
        out.write(",".join([*schema.names, "label"]) + "\n")
        for example in label_examples(concept, schema):
            out.write(",".join([*example.object.values, example.label]) + "\n")
    return EXIT_OK


def cmd_lower(args: argparse.Namespace, config: CliConfig) -> int:
    schema = _universe(config)
    concept = lower_to_concept(parse_vl1(args.expression, schema), schema, name=args.name)
    doc = ConceptDocument(universe_name=schema.name, namespace=schema.namespace, concepts=(concept,))
    with open_output(config.output_path) as out:
        out.write(serialize_document(doc, schema, expansion_limit=config.expansion_limit))
    return EXIT_OK


_COMMANDS: dict[str, Callable[[argparse.Namespace, CliConfig], int]] = {
    "schema": cmd_schema,
    "validate": cmd_validate,
    "count": cmd_count,
    "match": cmd_match,
    "enumerate": cmd_enumerate,
    "equiv": cmd_equiv,
    "dataset": cmd_dataset,
    "lower": cmd_lower,
}


# ── Argument parsing ───────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="output file (default: standard output)")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.TEXT.value)
    common.add_argument("--expansion-limit", type=int, help="max rule elements emitted after value-set expansion")
    common.add_argument("--ie-rule-limit", type=int, help="max rules counted by inclusion-exclusion")

    universe = argparse.ArgumentParser(add_help=False)
    universe.add_argument("--schema", type=Path, required=True, help="universe definition or XML Schema")

    document = argparse.ArgumentParser(add_help=False)
    document.add_argument("--in", dest="input", type=Path, required=True, help="concept document")

    concept = argparse.ArgumentParser(add_help=False)
    concept.add_argument("--concept", default="0", help="concept name or zero-based index (default: 0)")

    parser = argparse.ArgumentParser(prog="attribcalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    cmd = sub.add_parser("schema", parents=[common], help="generate the XML Schema of a universe")
    cmd.add_argument("--in", dest="input", type=Path, required=True, help="universe definition or XML Schema")

    cmd = sub.add_parser("validate", parents=[common, universe, document], help="check a document against a universe")
    cmd.add_argument("--xsd", action="store_true", help="also run the document through the generated XML Schema")
    sub.add_parser("count", parents=[common, universe, document, concept], help="print count/total")

    cmd = sub.add_parser("match", parents=[common, universe, document, concept], help="classify one object")
    cmd.add_argument("object", help="comma-separated values in declaration order")

    sub.add_parser("enumerate", parents=[common, universe, document, concept], help="list the concept's objects")

    cmd = sub.add_parser("equiv", parents=[common, universe, document, concept], help="compare two concepts")
    cmd.add_argument("--other-in", type=Path, help="document of the second concept (default: --in)")
    cmd.add_argument("--other-concept", required=True, help="name or index of the second concept")

    sub.add_parser("dataset", parents=[common, universe, document, concept], help="labeled examples as CSV")

    cmd = sub.add_parser("lower", parents=[common, universe], help="VL1 expression to a concept document")
    cmd.add_argument("expression", help='e.g. "[headShape=round][jacketColor=red]"')
    cmd.add_argument("--name", help="name of the produced concept")

    return parser


def _describe(exc: Exception) -> str:
    if isinstance(exc, ValidationError):
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        return f"{where}: {first['msg']}" if where else first["msg"]
    return str(exc)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = CliConfig(
            schema_path=getattr(args, "schema", None),
            input_path=getattr(args, "input", None),
            output_path=args.out,
            format=args.format,
            expansion_limit=args.expansion_limit if args.expansion_limit is not None else settings.expansion_limit,
            rule_limit_for_inclusion_exclusion=(
                args.ie_rule_limit if args.ie_rule_limit is not None else settings.ie_rule_limit
            ),
        )
        if getattr(args, "other_in", None) is not None and not args.other_in.is_file():
            raise DocumentError(f"{args.other_in} does not exist or is not a file")
        logger.debug("Running %s", args.command)
        return _COMMANDS[args.command](args, config)
    except (AttribCalcError, ValidationError, OSError) as exc:
        logger.debug("Command %s failed", args.command, exc_info=True)
        print(f"error: {_describe(exc)}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
