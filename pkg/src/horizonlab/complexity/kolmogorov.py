"""Cap-relative Kolmogorov complexity on the laboratory VM.

Every figure here is conditioned on two search bounds: the longest program
tried (``search_max_bits``) and the step cap. A step cap can only make K look
larger, because a short producer that runs past the cap is missed. Records
carry both bounds so they are never read as unconditional.
"""

from __future__ import annotations

import itertools
import statistics
from collections import Counter
from dataclasses import dataclass, field

from ..hvm import MachineConfig, Program, parse_program, run
from .search import shortest_producers

__all__ = [
    "ComplexityRecord",
    "RandomnessCensus",
    "GrowthTable",
    "GeneratorTooShort",
    "k_complexity",
    "incompressibility_census",
    "compressibility_growth",
    "CENSUS_MAX_N",
]

CENSUS_MAX_N = 12


@dataclass(frozen=True)
class ComplexityRecord:
    target: str
    search_max_bits: int
    step_cap: int
    k_bits: int | None = None
    witness: str | None = None

    @property
    def exact(self) -> bool:
        return self.k_bits is not None

    @property
    def k_exceeds(self) -> int | None:
        """For unresolved targets: K is known only to exceed this many bits."""
        return None if self.exact else self.search_max_bits

    @property
    def lower_bound(self) -> int:
        """Smallest K consistent with the search (the value itself when exact)."""
        return self.k_bits if self.k_bits is not None else self.search_max_bits + 1

    @property
    def status(self) -> str:
        return "Exact" if self.exact else "LowerBoundOnly"

    def to_dict(self) -> dict:
        body = {
            "target": self.target,
            "status": self.status,
            "search_max_bits": self.search_max_bits,
            "step_cap": self.step_cap,
        }
        if self.exact:
            body.update(k_bits=self.k_bits, witness=self.witness)
        else:
            body["k_exceeds"] = self.k_exceeds
        return body

    def __str__(self) -> str:
        if self.exact:
            return f"K({self.target!r}) = {self.k_bits} via {self.witness}"
        return f"K({self.target!r}) > {self.search_max_bits}"


def _check_bounds(search_max_bits: int, step_cap: int) -> None:
    if search_max_bits < 3:
        raise ValueError(f"search_max_bits must be >= 3, got {search_max_bits}")
    if step_cap < 1:
        raise ValueError(f"step_cap must be >= 1, got {step_cap}")


def k_complexity(target: str, search_max_bits: int, step_cap: int) -> ComplexityRecord:
    """Shortest (then lexicographically first) program printing exactly ``target``."""
    _check_bounds(search_max_bits, step_cap)
    if target.strip("01"):
        raise ValueError(f"target must be a bitstring, got {target!r}")
    found = shortest_producers(search_max_bits, step_cap, target.startswith, target.__eq__)
    hit = found.get(target)
    if hit is None:
        return ComplexityRecord(target, search_max_bits, step_cap)
    return ComplexityRecord(target, search_max_bits, step_cap, hit.length_bits, hit.bits)


@dataclass(frozen=True)
class RandomnessCensus:
    n: int
    search_max_bits: int
    step_cap: int
    records: dict[str, ComplexityRecord] = field(repr=False)

    @property
    def counts(self) -> dict[int, int]:
        """Resolved strings per K value."""
        return dict(sorted(Counter(r.k_bits for r in self.records.values() if r.exact).items()))

    @property
    def unresolved(self) -> int:
        return sum(1 for r in self.records.values() if not r.exact)

    @property
    def deficiency_histogram(self) -> dict[int, int]:
        """Resolved strings per randomness deficiency ``n - K``."""
        return dict(sorted((self.n - k, c) for k, c in self.counts.items()))

    def count_below(self, m: int) -> int:
        """Number of strings shown to have K < m."""
        return sum(1 for r in self.records.values() if r.exact and r.k_bits < m)

    def counting_bound_holds(self) -> bool:
        top = self.search_max_bits + 2
        return all(self.count_below(m) < 2**m for m in range(0, top + 1))

    def median_lower_bound(self) -> float:
        """Median over strings of the smallest K each could have."""
        return statistics.median(r.lower_bound for r in self.records.values())

    def rows(self) -> list[tuple[int, str, int]]:
        """``(n, K, count)`` rows; unresolved strings appear as ``>max_bits``."""
        out = [(self.n, str(k), c) for k, c in self.counts.items()]
        if self.unresolved:
            out.append((self.n, f">{self.search_max_bits}", self.unresolved))
        return out


def incompressibility_census(n: int, search_max_bits: int, step_cap: int) -> RandomnessCensus:
    """K-search every ``n``-bit string with one shared program scan."""
    _check_bounds(search_max_bits, step_cap)
    if not 0 <= n <= CENSUS_MAX_N:
        raise ValueError(f"census length must be in 0..{CENSUS_MAX_N}, got {n}")
    found = shortest_producers(
        search_max_bits,
        step_cap,
        lambda out: len(out) <= n,
        lambda out: len(out) == n,
    )
    records = {}
    for combo in itertools.product("01", repeat=n):
        s = "".join(combo)
        hit = found.get(s)
        if hit is None:
            records[s] = ComplexityRecord(s, search_max_bits, step_cap)
        else:
            records[s] = ComplexityRecord(s, search_max_bits, step_cap, hit.length_bits, hit.bits)
    return RandomnessCensus(n, search_max_bits, step_cap, records)


class GeneratorTooShort(ValueError):
    pass


@dataclass(frozen=True)
class GrowthTable:
    generator: str
    generator_output: str
    rows: tuple[tuple[int, ComplexityRecord], ...]

    @property
    def generator_bits(self) -> int:
        return len(self.generator)

    def csv_rows(self) -> list[tuple[int, str, str]]:
        return [
            (n, str(r.k_bits) if r.exact else f">{r.search_max_bits}", r.status)
            for n, r in self.rows
        ]


def compressibility_growth(
    generator: Program | str,
    prefix_lengths: list[int],
    search_max_bits: int,
    step_cap: int,
    generator_cap: int = 100_000,
) -> GrowthTable:
    """K of each requested prefix of a generator program's output.

    A single search serves every prefix, since each one is a prefix of the
    same string.
    """
    _check_bounds(search_max_bits, step_cap)
    if isinstance(generator, str):
        generator = parse_program(generator)
    if not prefix_lengths:
        raise ValueError("prefix_lengths must be nonempty")
    need = max(prefix_lengths)
    result = run(generator, MachineConfig(step_cap=generator_cap))
    if not result.halted or len(result.output) < need:
        raise GeneratorTooShort(
            f"generator produced {len(result.output)} bits ({result.status.value}); {need} needed"
        )
    full = result.output[:need]
    lengths = set(prefix_lengths)
    found = shortest_producers(
        search_max_bits,
        step_cap,
        full.startswith,
        lambda out: len(out) in lengths and full.startswith(out),
    )
    rows = []
    for n in prefix_lengths:
        target = full[:n]
        hit = found.get(target)
        if hit is None:
            rec = ComplexityRecord(target, search_max_bits, step_cap)
        else:
            rec = ComplexityRecord(target, search_max_bits, step_cap, hit.length_bits, hit.bits)
        rows.append((n, rec))
    return GrowthTable(generator.bits, result.output, tuple(rows))
