"""Halting-probability lower bounds for the laboratory VM.

``estimate_omega(max_bits, step_cap)`` sums ``2**-len(p)`` over the valid
programs of at most ``max_bits`` bits that halt within ``step_cap`` steps. The
sum is exact (a :class:`fractions.Fraction` with a power-of-two denominator).
It is a lower bound on the true value and carries the two budgets that
produced it.

``decide_by_prefix`` runs the classic argument in the other direction. Treat
an estimate as the true halting mass of programs up to some length. Dovetail
those programs until the mass that has halted reaches the oracle's. Anything
still running at that point is declared non-halting, relative to the oracle.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import dyadic_parts, fraction_str
from .hvm import Machine, Program, enumerate_valid

__all__ = [
    "CensusEntry",
    "OmegaEstimate",
    "HaltingVerdict",
    "BudgetZero",
    "OracleTooSmall",
    "OracleMismatch",
    "estimate_omega",
    "decide_by_prefix",
    "prefix_decisions",
    "convergence_series",
    "dovetail",
]


class BudgetZero(ValueError):
    pass


class OracleTooSmall(ValueError):
    pass


class OracleMismatch(RuntimeError):
    pass


@dataclass(frozen=True)
class CensusEntry:
    bits: str
    steps: int
    output: str


@dataclass(frozen=True)
class OmegaEstimate:
    lower_bound: Fraction
    max_bits: int
    step_cap: int
    halting_census: tuple[CensusEntry, ...]

    @property
    def numerator(self) -> int:
        return dyadic_parts(self.lower_bound)[0]

    @property
    def log2_denominator(self) -> int:
        return dyadic_parts(self.lower_bound)[1]

    def mass_up_to(self, length_bits: int) -> Fraction:
        return _mass(e.bits for e in self.halting_census if len(e.bits) <= length_bits)

    def census_sum(self) -> Fraction:
        return _mass(e.bits for e in self.halting_census)

    def csv_row(self) -> dict:
        return {
            "max_bits": self.max_bits,
            "step_cap": self.step_cap,
            "numerator": self.numerator,
            "log2_denominator": self.log2_denominator,
            "census_size": len(self.halting_census),
        }

    def to_dict(self) -> dict:
        return {
            **self.csv_row(),
            "lower_bound": fraction_str(self.lower_bound),
            "census": [{"bits": e.bits, "steps": e.steps, "output": e.output} for e in self.halting_census],
        }


def _mass(bit_strings: Iterable[str]) -> Fraction:
    lengths = [len(b) for b in bit_strings]
    if not lengths:
        return Fraction(0)
    top = max(lengths)
    return Fraction(sum(1 << (top - n) for n in lengths), 1 << top)


def dovetail(
    programs: Sequence[Program],
    step_cap: int,
    order: Sequence[int] | None = None,
) -> list[Machine]:
    """Run all programs round-robin under doubling budgets, up to ``step_cap``.

    ``order`` permutes the execution schedule only; the returned machines are
    in the same order as ``programs``.
    """
    machines = [Machine(p) for p in programs]
    schedule = list(order) if order is not None else list(range(len(machines)))
    if sorted(schedule) != list(range(len(machines))):
        raise ValueError("order must be a permutation of program indices")
    budget = 1
    while True:
        budget = min(budget, step_cap)
        for i in schedule:
            machines[i].advance(budget)
        if budget == step_cap:
            return machines
        budget *= 2


def _check_budget(max_bits: int, step_cap: int) -> None:
    if step_cap == 0:
        raise BudgetZero("step_cap must be positive")
    if step_cap < 0:
        raise ValueError(f"step_cap must be positive, got {step_cap}")
    if max_bits < 3:
        raise ValueError(f"max_bits must be >= 3, got {max_bits}")


def _estimate(programs: list[Program], machines: list[Machine], max_bits: int, step_cap: int) -> OmegaEstimate:
    census = tuple(
        CensusEntry(p.bits, m.steps, "".join(m.output))
        for p, m in zip(programs, machines)
        if m.halted and m.steps <= step_cap and p.length_bits <= max_bits
    )
    return OmegaEstimate(_mass(e.bits for e in census), max_bits, step_cap, census)


def estimate_omega(max_bits: int, step_cap: int, order: Sequence[int] | None = None) -> OmegaEstimate:
    """Exact lower bound on the halting probability from one budget pair."""
    _check_budget(max_bits, step_cap)
    programs = list(enumerate_valid(max_bits))
    machines = dovetail(programs, step_cap, order)
    return _estimate(programs, machines, max_bits, step_cap)


def convergence_series(max_bits_list: Sequence[int], step_cap_list: Sequence[int]) -> list[OmegaEstimate]:
    """Estimates over the grid ``max_bits_list x step_cap_list``.

    One dovetail at the largest budgets serves the whole grid: a program that
    halts in ``s`` steps halts identically under every cap of at least ``s``.
    """
    if not max_bits_list or not step_cap_list:
        raise ValueError("both lists must be nonempty")
    for values in (max_bits_list, step_cap_list):
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError(f"lists must be strictly increasing: {list(values)}")
    top_bits, top_cap = max_bits_list[-1], step_cap_list[-1]
    for cap in step_cap_list:
        _check_budget(max_bits_list[0], cap)
    programs = list(enumerate_valid(top_bits))
    machines = dovetail(programs, top_cap)
    return [
        _estimate(programs, machines, bits, cap)
        for bits in max_bits_list
        for cap in step_cap_list
    ]


@dataclass(frozen=True)
class HaltingVerdict:
    program: str
    halts: bool
    steps: int | None
    budget: int

    def __str__(self) -> str:
        if self.halts:
            return f"{self.program}: HaltsWithin({self.steps})"
        return f"{self.program}: NotDecidedWithinBudget({self.budget})"


@functools.lru_cache(maxsize=32)
def prefix_decisions(length_bits: int, oracle: OmegaEstimate) -> dict[str, HaltingVerdict]:
    """Verdicts for every valid program of at most ``length_bits`` bits.

    Budgets double until the halted mass equals the oracle's mass for that
    length. The oracle's own step cap is the last budget tried. If the mass
    still does not match there, the oracle does not describe this machine.
    """
    if oracle.max_bits < length_bits:
        raise OracleTooSmall(f"oracle covers {oracle.max_bits} bits; {length_bits} needed")
    target_mass = oracle.mass_up_to(length_bits)
    programs = list(enumerate_valid(length_bits))
    machines = [Machine(p) for p in programs]
    budget = 1
    while True:
        budget = min(budget, oracle.step_cap)
        for m in machines:
            m.advance(budget)
        mass = _mass(p.bits for p, m in zip(programs, machines) if m.halted)
        if mass == target_mass:
            break
        if mass > target_mass or budget == oracle.step_cap:
            raise OracleMismatch(f"halted mass {mass} never matches oracle mass {target_mass}")
        budget *= 2
    return {
        p.bits: HaltingVerdict(p.bits, m.halted, m.steps if m.halted else None, budget)
        for p, m in zip(programs, machines)
    }


def decide_by_prefix(target: Program, oracle: OmegaEstimate) -> HaltingVerdict:
    return prefix_decisions(target.length_bits, oracle)[target.bits]
