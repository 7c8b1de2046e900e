"""The toy bit: four ontic states, three complementary dichotomic measurements.

An observer never holds more than one bit about the two-bit ontic state. A
measurement therefore disturbs the system: after reporting its outcome, the
ontic state is redrawn uniformly inside the two-element set that outcome
picks out, and the observer's knowledge shrinks to just that set.

Two labelings of the three measurement axes are provided. ``"table"`` (the
default) is the measurement table::

            t1 t2 t3 t4
      m_z    1  1  0  0
      m_x    1  0  1  0
      m_y    1  0  0  1

``"listing"`` is the property listing ``pi_x = {t1,t2}``, ``pi_y = {t1,t3}``,
``pi_z = {t1,t4}``. It is the same three partitions with the axis names
rotated, and it is the labeling in which the worked inference
``m_x = 0, m_y = 1  =>  t3, m_z = 0`` holds.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

__all__ = [
    "OnticState",
    "EpistemicState",
    "Property",
    "ToyMeasurement",
    "ToySystem",
    "Prediction",
    "SampledRun",
    "InconsistentKnowledge",
    "ALL_STATES",
    "IGNORANCE",
    "measurements",
    "get_measurement",
    "measure",
    "apply_measurement",
    "run_sequence",
    "property_algebra",
    "classicality_experiment",
]


class OnticState(enum.IntEnum):
    T1 = 1
    T2 = 2
    T3 = 3
    T4 = 4

    def __str__(self) -> str:
        return f"t{int(self)}"

    @classmethod
    def parse(cls, name: str) -> OnticState:
        name = name.strip().lower().replace("_", "")
        if len(name) == 2 and name[0] == "t" and name[1] in "1234":
            return cls(int(name[1]))
        raise ValueError(f"unknown ontic state {name!r}")


ALL_STATES: frozenset[OnticState] = frozenset(OnticState)


def _names(states: Iterable[OnticState]) -> str:
    return "{" + ",".join(str(t) for t in sorted(states)) + "}"


@dataclass(frozen=True)
class EpistemicState:
    """The set of ontic states the observer cannot rule out."""

    members: frozenset[OnticState]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("epistemic state must be nonempty")
        object.__setattr__(self, "members", frozenset(self.members))

    @classmethod
    def of(cls, *states: OnticState | str) -> EpistemicState:
        return cls(frozenset(s if isinstance(s, OnticState) else OnticState.parse(s) for s in states))

    @property
    def balanced(self) -> bool:
        """True for maximal knowledge (2 states) or complete ignorance (4)."""
        return len(self.members) in (2, 4)

    @property
    def violates_balance(self) -> bool:
        return len(self.members) < 2

    def __str__(self) -> str:
        return _names(self.members)


IGNORANCE = EpistemicState(ALL_STATES)


@dataclass(frozen=True)
class Property:
    members: frozenset[OnticState]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))

    @classmethod
    def of(cls, *states: OnticState | str) -> Property:
        return cls(frozenset(s if isinstance(s, OnticState) else OnticState.parse(s) for s in states))

    def complement(self) -> Property:
        return Property(ALL_STATES - self.members)

    def meet(self, other: Property) -> Property:
        return Property(self.members & other.members)

    def join(self, other: Property) -> Property:
        return Property(self.members | other.members)

    def implies(self, other: Property) -> bool:
        return self.members <= other.members

    def __str__(self) -> str:
        return _names(self.members)


def property_algebra(
    a: Property,
    b: Property | None,
    op: Literal["complement", "meet", "join", "implies"],
) -> Property | int:
    """Lattice operations on properties; ``implies`` returns a bit."""
    if op == "complement":
        return a.complement()
    if b is None:
        raise ValueError(f"{op} needs two properties")
    if op == "meet":
        return a.meet(b)
    if op == "join":
        return a.join(b)
    if op == "implies":
        return int(a.implies(b))
    raise ValueError(f"unknown property operation {op!r}")


@dataclass(frozen=True)
class ToyMeasurement:
    name: str
    table: Mapping[OnticState, int]

    @property
    def axis(self) -> str:
        return self.name.rstrip("'")

    @property
    def is_orthogonal(self) -> bool:
        return self.name.endswith("'")

    @property
    def orthogonal(self) -> ToyMeasurement:
        name = self.axis if self.is_orthogonal else self.name + "'"
        return ToyMeasurement(name, {t: 1 - b for t, b in self.table.items()})

    def outcome_set(self, bit: int) -> frozenset[OnticState]:
        return frozenset(t for t, b in self.table.items() if b == bit)

    @property
    def property(self) -> Property:
        return Property(self.outcome_set(1))

    def __hash__(self) -> int:
        return hash((self.name, tuple(sorted(self.table.items()))))

    def __str__(self) -> str:
        return self.name


_CONVENTIONS: dict[str, dict[str, tuple[int, int, int, int]]] = {
    "table": {"mz": (1, 1, 0, 0), "mx": (1, 0, 1, 0), "my": (1, 0, 0, 1)},
    "listing": {"mx": (1, 1, 0, 0), "my": (1, 0, 1, 0), "mz": (1, 0, 0, 1)},
}


def measurements(convention: str = "table") -> dict[str, ToyMeasurement]:
    """All six measurements (``mx my mz`` and their orthogonals ``mx' my' mz'``)."""
    try:
        rows = _CONVENTIONS[convention]
    except KeyError:
        raise ValueError(f"unknown convention {convention!r}; use 'table' or 'listing'") from None
    out: dict[str, ToyMeasurement] = {}
    for axis in ("mx", "my", "mz"):
        m = ToyMeasurement(axis, dict(zip(OnticState, rows[axis])))
        out[axis] = m
        out[axis + "'"] = m.orthogonal
    return out


def _normalize_name(name: str) -> str:
    name = name.strip().lower().replace("_", "").replace("⊥", "'")
    if name.endswith("perp"):
        name = name[:-4] + "'"
    return name


def get_measurement(name: str, convention: str = "table") -> ToyMeasurement:
    """Look up a measurement by ASCII name: ``mx``, ``m_z``, ``my'``, ``m_x⊥``."""
    key = _normalize_name(name)
    table = measurements(convention)
    if key not in table:
        raise ValueError(f"unknown measurement {name!r}")
    return table[key]


def measure(ontic: OnticState, m: ToyMeasurement) -> int:
    return m.table[ontic]


@dataclass(frozen=True)
class ToySystem:
    ontic: OnticState
    epistemic: EpistemicState = IGNORANCE

    def __post_init__(self) -> None:
        if self.ontic not in self.epistemic.members:
            raise ValueError(f"ontic state {self.ontic} not in epistemic state {self.epistemic}")


def apply_measurement(
    sys: ToySystem,
    m: ToyMeasurement,
    rng: np.random.Generator | None,
    disturb: bool = True,
) -> tuple[int, ToySystem]:
    """Measure, then update both the ontic state and the observer's knowledge.

    With ``disturb`` (the physical rule) the ontic state is redrawn uniformly
    from the outcome's two-element set and knowledge becomes exactly that set.
    Without it the ontic state is untouched and knowledge accumulates by
    intersection. That is the hypothetical full-access observer, who can end
    up holding a singleton.
    """
    bit = measure(sys.ontic, m)
    outcome_set = m.outcome_set(bit)
    if not disturb:
        return bit, ToySystem(sys.ontic, EpistemicState(sys.epistemic.members & outcome_set))
    if rng is None:
        raise ValueError("a random source is required when the measurement disturbs")
    choices = sorted(outcome_set)
    ontic = choices[int(rng.integers(len(choices)))]
    return bit, ToySystem(ontic, EpistemicState(outcome_set))


@dataclass(frozen=True)
class SampledRun:
    outcomes: str
    final: ToySystem


def _start_distribution(start: ToySystem | EpistemicState) -> dict[OnticState, Fraction]:
    if isinstance(start, ToySystem):
        return {start.ontic: Fraction(1)}
    share = Fraction(1, len(start.members))
    return {t: share for t in sorted(start.members)}


def run_sequence(
    seq: Sequence[ToyMeasurement],
    start: ToySystem | EpistemicState,
    mode: Literal["exact", "sampled"] = "exact",
    rng: np.random.Generator | None = None,
    disturb: bool = True,
) -> dict[str, Fraction] | SampledRun:
    """Apply a measurement sequence.

    ``start`` is either a definite system or an epistemic state, read as a
    uniform distribution over its members. Exact mode returns the
    distribution over outcome strings by propagating probabilities over the
    four ontic states; sampled mode returns one trajectory.
    """
    if not seq:
        raise ValueError("measurement sequence must be nonempty")
    if mode == "sampled":
        if isinstance(start, EpistemicState):
            if rng is None:
                raise ValueError("sampled mode needs a random source")
            choices = sorted(start.members)
            start = ToySystem(choices[int(rng.integers(len(choices)))], start)
        sys = start
        bits = []
        for m in seq:
            bit, sys = apply_measurement(sys, m, rng, disturb)
            bits.append(str(bit))
        return SampledRun("".join(bits), sys)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")

    dist: dict[tuple[str, OnticState], Fraction] = {("", t): p for t, p in _start_distribution(start).items()}
    for m in seq:
        nxt: dict[tuple[str, OnticState], Fraction] = defaultdict(Fraction)
        for (prefix, t), p in dist.items():
            bit = measure(t, m)
            key = prefix + str(bit)
            if disturb:
                targets = sorted(m.outcome_set(bit))
                for u in targets:
                    nxt[(key, u)] += p / len(targets)
            else:
                nxt[(key, t)] += p
        dist = nxt
    outcomes: dict[str, Fraction] = defaultdict(Fraction)
    for (prefix, _), p in dist.items():
        outcomes[prefix] += p
    return dict(sorted(outcomes.items()))


class InconsistentKnowledge(ValueError):
    pass


@dataclass(frozen=True)
class Prediction:
    determined: bool
    p_one: Fraction
    epistemic: EpistemicState

    @property
    def bit(self) -> int | None:
        if not self.determined:
            return None
        return int(self.p_one)

    @property
    def ontic(self) -> OnticState | None:
        """The ontic state, when knowledge pins it down completely."""
        if len(self.epistemic.members) == 1:
            return next(iter(self.epistemic.members))
        return None


def classicality_experiment(
    known: Sequence[tuple[ToyMeasurement, int]],
    target: ToyMeasurement,
    ontic_access: bool = False,
) -> Prediction:
    """Predict ``target`` from recorded outcomes.

    Under the disturbance rule only the latest outcome survives, so the
    observer's knowledge is that outcome's two-element set. With
    ``ontic_access`` every recorded outcome is kept, which models an observer
    who could read off the undisturbed state.
    """
    if not known:
        raise ValueError("at least one known outcome is required")
    compatible = set(ALL_STATES)
    for m, bit in known:
        compatible &= m.outcome_set(bit)
    if not compatible:
        raise InconsistentKnowledge("no ontic state is compatible with " + ", ".join(f"{m}={b}" for m, b in known))
    if ontic_access:
        members = frozenset(compatible)
    else:
        last_m, last_bit = known[-1]
        members = last_m.outcome_set(last_bit)
    ones = sum(measure(t, target) for t in members)
    p_one = Fraction(ones, len(members))
    return Prediction(p_one in (0, 1), p_one, EpistemicState(members))
