"""A law that is algorithmic except where it consults a random oracle.

``edis_eval`` squares every input not divisible by three and returns an
oracle bit otherwise. ``edis_decompose`` goes the other way: given observed
``(n, value)`` pairs and the squaring hypothesis, it separates the
hypothesis-explained positions from the residue and reads the oracle bits off
the residue.

Oracle indexing is 1-based: ``rho(n)`` is the n-th listed bit. ``rho(0)`` reads
the first bit, since input 0 is also divisible by three.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "LISTED_RHO",
    "BitOracle",
    "EdisTrace",
    "OracleExhausted",
    "HypothesisViolated",
    "edis_eval",
    "edis_trace",
    "edis_decompose",
    "seeded_oracle",
]

LISTED_RHO = "1101110101011010"


class OracleExhausted(LookupError):
    pass


class HypothesisViolated(ValueError):
    pass


class BitOracle:
    """Random bits addressed by natural number.

    Built either from a listed bitstring (1-based) or from an explicit
    ``{n: bit}`` map, which is what a decomposition recovers.
    """

    def __init__(self, listing: str = "", explicit: Mapping[int, int] | None = None):
        if listing.strip("01"):
            raise ValueError(f"oracle listing must be a bitstring, got {listing!r}")
        self.listing = listing
        self.explicit = dict(explicit or {})

    def __call__(self, n: int) -> int:
        if n in self.explicit:
            return self.explicit[n]
        pos = max(n - 1, 0)
        if pos >= len(self.listing):
            raise OracleExhausted(f"oracle undefined at n={n}")
        return int(self.listing[pos])


def seeded_oracle(length: int, rng: np.random.Generator) -> BitOracle:
    bits = rng.integers(0, 2, size=length)
    return BitOracle("".join(str(int(b)) for b in bits))


def edis_eval(n: int, rho: BitOracle) -> int:
    if n < 0:
        raise ValueError(f"n must be a natural number, got {n}")
    if n % 3:
        return n * n
    return rho(n)


@dataclass(frozen=True)
class EdisTrace:
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    oracle_bits_consumed: str
    algorithmic_positions: frozenset[int]
    random_positions: frozenset[int]

    def oracle(self) -> BitOracle:
        """An oracle that answers exactly at the random positions."""
        randoms = [n for n in self.inputs if n in self.random_positions]
        return BitOracle(explicit={n: int(b) for n, b in zip(randoms, self.oracle_bits_consumed)})

    def replay(self) -> tuple[int, ...]:
        rho = self.oracle()
        return tuple(edis_eval(n, rho) for n in self.inputs)


def edis_trace(inputs: Iterable[int], rho: BitOracle) -> EdisTrace:
    """Evaluate over ``inputs``, recording which calls consumed oracle bits."""
    inputs = tuple(inputs)
    outputs = tuple(edis_eval(n, rho) for n in inputs)
    randoms = frozenset(n for n in inputs if n % 3 == 0)
    consumed = "".join(str(v) for n, v in zip(inputs, outputs) if n % 3 == 0)
    return EdisTrace(inputs, outputs, consumed, frozenset(inputs) - randoms, randoms)


def _square(n: int) -> int:
    return n * n


def _not_multiple_of_three(n: int) -> bool:
    return n % 3 != 0


def edis_decompose(
    observations: Sequence[tuple[int, int]],
    law: Callable[[int], int] = _square,
    covers: Callable[[int], bool] = _not_multiple_of_three,
) -> EdisTrace:
    """Split observations into a hypothesised law and residual oracle bits.

    ``covers(n)`` says where the law is claimed to hold; everywhere else the
    observed value must be a bit, and it is taken as the oracle's answer.
    """
    inputs = tuple(n for n, _ in observations)
    if len(set(inputs)) != len(inputs):
        raise ValueError("observations must have distinct inputs")
    algorithmic, random_, bits = set(), set(), []
    for n, value in observations:
        if covers(n):
            if value != law(n):
                raise HypothesisViolated(f"u({n}) = {value}, expected {law(n)}")
            algorithmic.add(n)
        else:
            if value not in (0, 1):
                raise ValueError(f"residual value at n={n} is {value}, not a bit")
            random_.add(n)
            bits.append(str(value))
    return EdisTrace(
        inputs,
        tuple(v for _, v in observations),
        "".join(bits),
        frozenset(algorithmic),
        frozenset(random_),
    )
