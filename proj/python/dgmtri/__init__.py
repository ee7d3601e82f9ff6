"""Boundary-based triangulation of dynamic graphical model templates."""

from dgmtri._dgmtri import (  # noqa: F401
    boundary,
    generate,
    moralized_edges,
    parse_template,
    partition,
    triangulate,
    unroll_stats,
    validate,
)

__all__ = [
    "boundary",
    "generate",
    "moralized_edges",
    "parse_template",
    "partition",
    "triangulate",
    "unroll_stats",
    "validate",
]
