from __future__ import annotations

import functools
import time
from pathlib import Path

import pytest

from knotword.diagram import load_presentation
from knotword.pullback import enumerate_configurations

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


ENUMERATION_SECONDS: dict[int, float] = {}


@functools.lru_cache(maxsize=None)
def enumerated(r: int):
    """Enumerations are slow beyond r=6, so every test shares one run."""
    start = time.perf_counter()
    report = enumerate_configurations(r)
    ENUMERATION_SECONDS[r] = time.perf_counter() - start
    return report


@pytest.fixture
def load():
    return lambda name: load_presentation(fixture_path(name))
