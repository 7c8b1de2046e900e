"""Diagonal constructions over finite outcome tables.

An :class:`OutcomeTable` lists, for each program (row), the symbol it outputs
on each encoded state (column). Reading down the diagonal and pushing every
entry through a fixed-point-free map yields a column function that disagrees
with every row somewhere. That is the finite shadow of the argument that no
enumeration of programs reproduces every measurement. Replacing the diagonal
by the graph of a row permutation gives the same result for each permutation.

The escape route is checked too. The quantum swap ``D = |0><1| + |1><0|``
has no fixed basis state, yet it fixes ``|+>``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .hvm import MachineConfig, Program, parse_program, run

__all__ = [
    "OutcomeTable",
    "ExcludedRow",
    "AlphabetMap",
    "DiagonalWitness",
    "DiagonalResult",
    "SequenceDiagonal",
    "Qubit2",
    "NotSquare",
    "NotBijective",
    "EmptyTable",
    "build_outcome_table",
    "random_table",
    "diagonalize",
    "diagonalize_beta",
    "fixed_point_scan",
    "quantum_negation_check",
    "measurement_sequence_diagonal",
]


class NotSquare(ValueError):
    pass


class NotBijective(ValueError):
    pass


class EmptyTable(ValueError):
    pass


@dataclass(frozen=True)
class ExcludedRow:
    program: str
    state: int
    reason: str


@dataclass(frozen=True)
class OutcomeTable:
    rows: tuple[str, ...]
    cols: tuple[int, ...]
    cells: tuple[tuple[int, ...], ...]
    alphabet: tuple[int, ...] = (0, 1)
    excluded: tuple[ExcludedRow, ...] = ()

    def __post_init__(self) -> None:
        if len(self.cells) != len(self.rows):
            raise ValueError(f"{len(self.cells)} cell rows for {len(self.rows)} row labels")
        allowed = set(self.alphabet)
        for label, row in zip(self.rows, self.cells):
            if len(row) != len(self.cols):
                raise ValueError(f"row {label} has {len(row)} cells, expected {len(self.cols)}")
            bad = set(row) - allowed
            if bad:
                raise ValueError(f"row {label} has symbols {sorted(bad)} outside {self.alphabet}")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    @property
    def is_square(self) -> bool:
        return len(self.rows) == len(self.cols)

    def cell(self, j: int, k: int) -> int:
        return self.cells[j][k]

    def truncate(self, n: int) -> OutcomeTable:
        """Keep the first ``n`` rows and columns."""
        if n > min(self.shape):
            raise ValueError(f"cannot truncate a {self.shape} table to {n}x{n}")
        return OutcomeTable(
            self.rows[:n],
            self.cols[:n],
            tuple(row[:n] for row in self.cells[:n]),
            self.alphabet,
            self.excluded,
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["program", *self.cols])
        for label, row in zip(self.rows, self.cells):
            writer.writerow([label, *row])
        return buf.getvalue()


def build_outcome_table(
    programs: Sequence[Program | str],
    states: Sequence[int],
    step_cap: int,
) -> OutcomeTable:
    """Cell ``(j, k)``: first output bit of program ``j`` started on state ``k``.

    A program that fails to halt, or halts silently, on any state is left out
    and listed in ``excluded``, so the remaining table is total.
    """
    cfgs = [MachineConfig(step_cap=step_cap, input_cell=s) for s in states]
    rows, cells, excluded = [], [], []
    for prog in programs:
        if isinstance(prog, str):
            prog = parse_program(prog)
        row = []
        for state, cfg in zip(states, cfgs):
            result = run(prog, cfg)
            if not result.halted:
                excluded.append(ExcludedRow(prog.bits, state, "StepLimit"))
                break
            if not result.output:
                excluded.append(ExcludedRow(prog.bits, state, "NoOutput"))
                break
            row.append(int(result.output[0]))
        else:
            rows.append(prog.bits)
            cells.append(tuple(row))
    if not rows:
        raise EmptyTable("no program produced output on every state")
    return OutcomeTable(tuple(rows), tuple(states), tuple(cells), (0, 1), tuple(excluded))


def random_table(size: int, alphabet_size: int, rng: np.random.Generator) -> OutcomeTable:
    matrix = rng.integers(0, alphabet_size, size=(size, size))
    return OutcomeTable(
        tuple(f"r{j}" for j in range(size)),
        tuple(range(size)),
        tuple(tuple(int(v) for v in row) for row in matrix),
        tuple(range(alphabet_size)),
    )


@dataclass(frozen=True)
class AlphabetMap:
    alphabet: tuple[int, ...]
    mapping: Mapping[int, int] = field(hash=False)

    def __post_init__(self) -> None:
        if set(self.mapping) != set(self.alphabet):
            raise ValueError("mapping must be total on the alphabet")
        if not set(self.mapping.values()) <= set(self.alphabet):
            raise ValueError("mapping must land in the alphabet")

    def __call__(self, a: int) -> int:
        return self.mapping[a]

    @classmethod
    def negation(cls) -> AlphabetMap:
        return cls((0, 1), {0: 1, 1: 0})

    @classmethod
    def identity(cls, size: int = 2) -> AlphabetMap:
        return cls(tuple(range(size)), {a: a for a in range(size)})

    @classmethod
    def cyclic_successor(cls, size: int) -> AlphabetMap:
        return cls(tuple(range(size)), {a: (a + 1) % size for a in range(size)})

    @classmethod
    def named(cls, name: str, size: int = 2) -> AlphabetMap:
        if name == "not":
            if size != 2:
                return cls.cyclic_successor(size)
            return cls.negation()
        if name == "id":
            return cls.identity(size)
        if name == "succ":
            return cls.cyclic_successor(size)
        raise ValueError(f"unknown alphabet map {name!r}; use not, id or succ")


def fixed_point_scan(alpha: AlphabetMap) -> list[int]:
    return [a for a in alpha.alphabet if alpha(a) == a]


@dataclass(frozen=True)
class DiagonalWitness:
    g: tuple[int, ...]
    per_row_witness: dict[int, int]

    def quadruples(self, table: OutcomeTable) -> list[dict]:
        """``(row, column, expected, got)``: the row's symbol versus g's."""
        return [
            {"row": j, "column": k, "expected": table.cell(j, k), "got": self.g[k]}
            for j, k in sorted(self.per_row_witness.items())
        ]

    def failures(self, table: OutcomeTable) -> list[int]:
        """Rows with no witness, or with a witness that does not differ."""
        bad = []
        for j in range(len(table.rows)):
            k = self.per_row_witness.get(j)
            if k is None or self.g[k] == table.cell(j, k):
                bad.append(j)
        return bad

    def valid_for(self, table: OutcomeTable) -> bool:
        return not self.failures(table)


@dataclass(frozen=True)
class DiagonalResult:
    witness: DiagonalWitness
    coinciding_rows: tuple[int, ...]

    @property
    def g(self) -> tuple[int, ...]:
        return self.witness.g


def _require_square(table: OutcomeTable) -> int:
    if not table.is_square:
        raise NotSquare(f"table is {table.shape[0]}x{table.shape[1]}; truncate it first")
    return len(table.rows)


def _witnesses(table: OutcomeTable, g: Sequence[int], preferred: Sequence[int]) -> DiagonalResult:
    found: dict[int, int] = {}
    coinciding = []
    for j, row in enumerate(table.cells):
        k = preferred[j]
        if g[k] != row[k]:
            found[j] = k
            continue
        other = next((c for c, (a, b) in enumerate(zip(g, row)) if a != b), None)
        if other is None:
            coinciding.append(j)
        else:
            found[j] = other
    return DiagonalResult(DiagonalWitness(tuple(g), found), tuple(coinciding))


def diagonalize(table: OutcomeTable, alpha: AlphabetMap) -> DiagonalResult:
    """``g(k) = alpha(cell(k, k))``, with a differing column for each row.

    Rows that g reproduces everywhere are listed in ``coinciding_rows``. That
    requires ``alpha`` to fix the row's diagonal symbol.
    """
    n = _require_square(table)
    g = [alpha(table.cell(k, k)) for k in range(n)]
    return _witnesses(table, g, list(range(n)))


def diagonalize_beta(
    table: OutcomeTable,
    beta: Sequence[int],
    alpha: AlphabetMap | None = None,
) -> DiagonalResult:
    """``g'(k) = alpha(cell(beta(k), k))``; row j is refuted at column beta^-1(j)."""
    n = _require_square(table)
    if sorted(beta) != list(range(n)):
        raise NotBijective(f"beta is not a permutation of 0..{n - 1}: {list(beta)}")
    if alpha is None:
        alpha = AlphabetMap.negation() if table.alphabet == (0, 1) else AlphabetMap.cyclic_successor(len(table.alphabet))
    g = [alpha(table.cell(beta[k], k)) for k in range(n)]
    inverse = [0] * n
    for k, j in enumerate(beta):
        inverse[j] = k
    return _witnesses(table, g, inverse)


@dataclass(frozen=True)
class SequenceDiagonal:
    entries: tuple[tuple[int, int, int], ...]
    witness: DiagonalWitness

    @property
    def outcomes(self) -> tuple[int, ...]:
        return tuple(sym for _, _, sym in self.entries)


def measurement_sequence_diagonal(table: OutcomeTable, alpha: AlphabetMap | None = None) -> SequenceDiagonal:
    """Take measurement l of sequence l and perform its orthogonal instead.

    Rows are outcome strings of measurement sequences on one fixed state. The
    result lists ``(row, column, inverted symbol)`` for each diagonal position.
    """
    n = _require_square(table)
    if alpha is None:
        alpha = AlphabetMap.negation() if table.alphabet == (0, 1) else AlphabetMap.cyclic_successor(len(table.alphabet))
    entries = tuple((l, l, alpha(table.cell(l, l))) for l in range(n))
    g = tuple(sym for _, _, sym in entries)
    return SequenceDiagonal(entries, _witnesses(table, g, list(range(n))).witness)


@dataclass(frozen=True)
class Qubit2:
    a0: complex
    a1: complex

    def __post_init__(self) -> None:
        norm = abs(self.a0) ** 2 + abs(self.a1) ** 2
        if abs(norm - 1) > 1e-12:
            raise ValueError(f"state not normalized: |a0|^2 + |a1|^2 = {norm}")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a0, self.a1], dtype=complex)

    @classmethod
    def from_vector(cls, v: np.ndarray) -> Qubit2:
        return cls(complex(v[0]), complex(v[1]))

    @classmethod
    def random(cls, rng: np.random.Generator) -> Qubit2:
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        return cls.from_vector(v / np.linalg.norm(v))


KET0 = Qubit2(1, 0)
KET1 = Qubit2(0, 1)
KET_PLUS = Qubit2(2**-0.5, 2**-0.5)
SWAP = np.outer(KET0.vector, KET1.vector.conj()) + np.outer(KET1.vector, KET0.vector.conj())


def quantum_negation_check(
    tolerance: float = 1e-12,
    rng: np.random.Generator | None = None,
    n_random: int = 100,
) -> dict:
    """Check that the swap negates basis states, fixes ``|+>``, and is an involution."""
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")

    def dist(u: np.ndarray, v: np.ndarray) -> float:
        return float(np.linalg.norm(u - v))

    d0 = SWAP @ KET0.vector
    d1 = SWAP @ KET1.vector
    dplus = SWAP @ KET_PLUS.vector
    report = {
        "D": [[str(complex(x)) for x in row] for row in SWAP],
        "D|0>=|1>": dist(d0, KET1.vector),
        "D|1>=|0>": dist(d1, KET0.vector),
        "D|+>=|+>": dist(dplus, KET_PLUS.vector),
        "basis_fixed_points": [
            label for label, ket in (("|0>", KET0), ("|1>", KET1)) if dist(SWAP @ ket.vector, ket.vector) <= tolerance
        ],
        "fixed_vector": [KET_PLUS.a0.real, KET_PLUS.a1.real],
    }
    if rng is not None and n_random:
        # Batched: one column per random normalized state.
        states = rng.normal(size=(2, n_random)) + 1j * rng.normal(size=(2, n_random))
        states /= np.linalg.norm(states, axis=0)
        back = SWAP @ (SWAP @ states)
        report["involution_max_error"] = float(np.max(np.linalg.norm(back - states, axis=0)))
        report["involution_samples"] = n_random
    checks = [report["D|0>=|1>"], report["D|1>=|0>"], report["D|+>=|+>"], report.get("involution_max_error", 0.0)]
    report["passed"] = all(c <= tolerance for c in checks) and not report["basis_fixed_points"]
    return report
