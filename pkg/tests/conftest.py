"""Shared fixtures: Emerald's robot universe and its concept C."""

from __future__ import annotations

import pytest

from schemas.concept import Concept, Rule
from schemas.universe import UniverseSchema

from tests.emerald import EMERALD_NS, EMERALD_RANGES


@pytest.fixture
def emerald() -> UniverseSchema:
    return UniverseSchema.build("emerald", EMERALD_RANGES, namespace=EMERALD_NS)


@pytest.fixture
def concept_c() -> Concept:
    """Head is round and jacket is red, or head is square and holding a balloon."""
    return Concept(
        rules=(
            Rule.elementary({"headShape": "round", "jacketColor": "red"}),
            Rule.elementary({"headShape": "square", "holding": "balloon"}),
        )
    )


@pytest.fixture
def toy() -> UniverseSchema:
    return UniverseSchema.build("toy", [("a", ["x", "y"]), ("b", ["p", "q"])])
