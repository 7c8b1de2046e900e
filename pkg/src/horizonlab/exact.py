"""Exact-number helpers shared by the reports: reduced fractions and dyadics."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

RNG_NAME = "numpy.random.PCG64"
DEFAULT_SEED = 20190411


def make_rng(seed: int = DEFAULT_SEED) -> np.random.Generator:
    """The one random source used everywhere: PCG64 seeded with a 64-bit integer."""
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def fraction_str(value: Fraction | int) -> str:
    """Render an exact rational as ``p/q`` in lowest terms (``1/1``, ``0/1`` included)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def dyadic_parts(value: Fraction) -> tuple[int, int]:
    """Return ``(numerator, k)`` with ``value == numerator / 2**k`` and k minimal."""
    value = Fraction(value)
    den = value.denominator
    if den & (den - 1):
        raise ValueError(f"{value} is not a dyadic rational")
    return value.numerator, den.bit_length() - 1
