"""Python access to the hkmodel kernel."""

from ._core import (
    HkError,
    Module,
    ParseError,
    Run,
    Structure,
    System,
    check,
    compose,
    explore,
    final_marking,
    instantiate,
    load,
    place_invariants,
    simulate,
    validate_run,
)

__all__ = [
    "HkError",
    "Module",
    "ParseError",
    "Run",
    "Structure",
    "System",
    "check",
    "compose",
    "explore",
    "final_marking",
    "instantiate",
    "load",
    "place_invariants",
    "simulate",
    "validate_run",
]
