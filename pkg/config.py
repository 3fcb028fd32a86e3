"""attribcalc configuration, loaded from environment / .env file."""

from __future__ import annotations

from typing import Any

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="ATTRIBCALC_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # --- Serialization --------------------------------------------------
    expansion_limit: int = Field(default=10_000, ge=1)  # max rule elements after value-set expansion

    # --- Counting -------------------------------------------------------
    ie_rule_limit: int = Field(default=20, ge=1)  # above this many rules, count by streaming

    # --- Output ---------------------------------------------------------
    log_level: str = "warning"
    no_color: bool = False

    @field_validator("no_color", mode="before")
    @classmethod
    def _set_unless_explicitly_off(cls, value: Any) -> bool:
        """Set to anything but "0", "false" or "no" to disable styling."""
        if isinstance(value, str):
            return value.strip().lower() not in {"0", "false", "no"}
        return bool(value)


settings = Settings()
