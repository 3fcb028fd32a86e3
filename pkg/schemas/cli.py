"""Validated command-line configuration."""

from __future__ import annotations

from enum import Enum
from pathlib import Path

from pydantic import BaseModel, Field, field_validator


class OutputFormat(str, Enum):
    TEXT = "text"
    CSV = "csv"


class CliConfig(BaseModel):
    """Options shared by every subcommand, after defaults from ``settings``."""

    schema_path: Path | None = Field(default=None, description="Universe definition or XML Schema.")
    input_path: Path | None = Field(default=None, description="Concept document (or universe source for `schema`).")
    output_path: Path | None = Field(default=None, description="Output file; standard output when absent.")
    format: OutputFormat = OutputFormat.TEXT
    expansion_limit: int = Field(ge=1)
    rule_limit_for_inclusion_exclusion: int = Field(ge=1)

    @field_validator("schema_path", "input_path")
    @classmethod
    def _must_exist(cls, path: Path | None) -> Path | None:
        if path is not None and not path.is_file():
            raise ValueError(f"{path} does not exist or is not a file")
        return path
