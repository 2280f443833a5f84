"""Spectral search, proof replay and geometry checks for hyperbolic integer matrices."""

from ._core import (
    GeomError,
    IntPolynomial,
    ParseError,
    PolyError,
    build,
    certify,
    discriminant,
    factor,
    parse_poly,
    power_transform,
    replay,
    reverse,
    run_cli,
    search,
    verify_ot,
    verify_torus,
)

__version__ = "0.1.0"

__all__ = [
    "GeomError",
    "IntPolynomial",
    "ParseError",
    "PolyError",
    "build",
    "certify",
    "discriminant",
    "factor",
    "parse_poly",
    "power_transform",
    "replay",
    "reverse",
    "run_cli",
    "search",
    "verify_ot",
    "verify_torus",
]
