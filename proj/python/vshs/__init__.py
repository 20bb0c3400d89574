"""Exact VSHS normal forms, mirror maps and instanton numbers.

Scalars cross the boundary as exact strings ("3/2", "1/2-1*i"); use
``to_fraction`` for real values.
"""

from fractions import Fraction

from ._core import (
    VshsError,
    check,
    frobenius_basis,
    g_from_instantons,
    instantons_from_g,
    normal_form,
    parse_operator,
    pipeline,
    run_cli,
    weight_filtration,
)

__all__ = [
    "VshsError",
    "check",
    "frobenius_basis",
    "g_from_instantons",
    "instantons_from_g",
    "normal_form",
    "parse_operator",
    "pipeline",
    "run_cli",
    "to_fraction",
    "weight_filtration",
]


def to_fraction(text):
    """Exact Fraction for a real scalar string; ValueError if it has an imaginary part."""
    if "i" in text:
        raise ValueError(f"{text!r} is not real")
    return Fraction(text)
