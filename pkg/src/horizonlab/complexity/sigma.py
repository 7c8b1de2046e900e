"""Locating a point in [0, 1) by repeated halving.

Bit ``i`` of the encoding is 1 when the point lies in the upper half of the
current interval. Intervals are closed below and open above, so a point on a
boundary falls in the upper half and the bits are exactly the binary
expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Protocol

import numpy as np

from ..hvm import MachineConfig, Program, parse_program, run

__all__ = [
    "SigmaEncoding",
    "HalfSpaceOracle",
    "HiddenPoint",
    "BitSourcePoint",
    "InconsistentOracle",
    "sigma_encode",
    "sigma_decode",
    "localize",
    "random_point",
    "program_point",
]


@dataclass(frozen=True)
class SigmaEncoding:
    bits: str
    low: Fraction

    @property
    def width(self) -> Fraction:
        return Fraction(1, 2 ** len(self.bits))

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return self.low, self.low + self.width

    def __str__(self) -> str:
        lo, hi = self.interval
        return f"{self.bits or 'ε'} -> [{lo}, {hi})"


def sigma_encode(x: Fraction, n: int) -> SigmaEncoding:
    x = Fraction(x)
    if not 0 <= x < 1:
        raise ValueError(f"x must lie in [0, 1), got {x}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    lo, hi = Fraction(0), Fraction(1)
    bits = []
    for _ in range(n):
        mid = (lo + hi) / 2
        if x >= mid:
            bits.append("1")
            lo = mid
        else:
            bits.append("0")
            hi = mid
    return SigmaEncoding("".join(bits), lo)


def sigma_decode(bits: str) -> SigmaEncoding:
    if bits.strip("01"):
        raise ValueError(f"expected a bitstring, got {bits!r}")
    low = Fraction(int(bits, 2), 2 ** len(bits)) if bits else Fraction(0)
    return SigmaEncoding(bits, low)


class HalfSpaceOracle(Protocol):
    def contains(self, lo: Fraction, hi: Fraction) -> bool:
        """Dichotomic measurement: is the hidden point in ``[lo, hi)``?"""


class InconsistentOracle(RuntimeError):
    pass


class HiddenPoint:
    def __init__(self, x: Fraction):
        self.x = Fraction(x)

    def contains(self, lo: Fraction, hi: Fraction) -> bool:
        return lo <= self.x < hi


class BitSourcePoint:
    """A point whose binary expansion is drawn lazily from a bit source."""

    def __init__(self, next_bit: Callable[[], int]):
        self._next_bit = next_bit
        self.expansion: list[int] = []

    def _prefix(self, k: int) -> int:
        while len(self.expansion) < k:
            self.expansion.append(int(self._next_bit()))
        value = 0
        for b in self.expansion[:k]:
            value = 2 * value + b
        return value

    def contains(self, lo: Fraction, hi: Fraction) -> bool:
        k = max(Fraction(lo).denominator, Fraction(hi).denominator).bit_length() - 1
        cell = Fraction(self._prefix(k), 2**k)
        return lo <= cell < hi


def random_point(rng: np.random.Generator) -> BitSourcePoint:
    return BitSourcePoint(lambda: int(rng.integers(2)))


def program_point(program: Program | str, step_cap: int = 100_000) -> BitSourcePoint:
    """A point whose expansion is the output of a VM program."""
    if isinstance(program, str):
        program = parse_program(program)
    output = run(program, MachineConfig(step_cap=step_cap)).output
    stream = iter(output)

    def next_bit() -> int:
        try:
            return int(next(stream))
        except StopIteration:
            raise InconsistentOracle(f"program {program.bits} emitted only {len(output)} bits") from None

    return BitSourcePoint(next_bit)


def localize(oracle: HalfSpaceOracle, n: int) -> SigmaEncoding:
    """Narrow the hidden point down with ``n`` halving measurements.

    Each level asks about both halves of the current interval; exactly one
    answer must be yes, or the oracle has contradicted the nesting.
    """
    lo, hi = Fraction(0), Fraction(1)
    if not oracle.contains(lo, hi):
        raise InconsistentOracle("hidden point is not in [0, 1)")
    bits = []
    for level in range(n):
        mid = (lo + hi) / 2
        upper = oracle.contains(mid, hi)
        lower = oracle.contains(lo, mid)
        if upper == lower:
            raise InconsistentOracle(f"level {level}: upper={upper}, lower={lower} for [{lo}, {hi})")
        if upper:
            bits.append("1")
            lo = mid
        else:
            bits.append("0")
            hi = mid
    return SigmaEncoding("".join(bits), lo)
