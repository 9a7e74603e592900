"""Packaged data files: the published matrices, an example machine and automaton."""

from __future__ import annotations

from importlib import resources

from .field import AdjacencyField
from .grammar import parse

FIELDS = ("nor", "state1_a1", "state1_a2", "state2_a1", "state2_a2")


def read_text(name: str) -> str:
    return resources.files("graphfield").joinpath("data", name).read_text(encoding="utf-8")


def load_field(name: str) -> AdjacencyField:
    """One of :data:`FIELDS`, parsed verbatim (no canonicalization)."""
    if name not in FIELDS:
        raise KeyError(f"no packaged field {name!r}; choose from {FIELDS}")
    return parse(read_text(f"{name}.field"))
