"""A bit-level virtual machine whose valid programs form a prefix-free set.

Programs are bitstrings read as 3-bit opcodes, most significant bit first::

    000 INC   001 DEC   010 LEFT   011 RIGHT
    100 OUT   101 LOOP_BEGIN   110 LOOP_END   111 HALT

Parsing stops at the first HALT, and a program is valid only if nothing follows
that HALT and its loops balance. No valid program can therefore extend another,
which is what lets the halting-probability sum converge.

The tape holds 8-bit wrapping cells, unbounded in both directions. ``OUT``
appends the parity of the current cell to the output.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator

__all__ = [
    "Opcode",
    "InvalidReason",
    "InvalidProgram",
    "Program",
    "MachineConfig",
    "RunStatus",
    "VmRun",
    "Machine",
    "parse_program",
    "is_valid",
    "run",
    "enumerate_valid",
    "OPCODE_BITS",
]

OPCODE_BITS = 3


class Opcode(enum.IntEnum):
    INC = 0
    DEC = 1
    LEFT = 2
    RIGHT = 3
    OUT = 4
    LOOP_BEGIN = 5
    LOOP_END = 6
    HALT = 7

    @property
    def bits(self) -> str:
        return format(int(self), "03b")


class InvalidReason(enum.Enum):
    TRAILING_BITS = "TrailingBits"
    UNBALANCED_LOOP = "UnbalancedLoop"
    NO_HALT = "NoHalt"
    NOT_MULTIPLE_OF_3 = "NotMultipleOf3"


class InvalidProgram(ValueError):
    def __init__(self, reason: InvalidReason, bits: str):
        super().__init__(f"invalid program {bits!r}: {reason.value}")
        self.reason = reason
        self.bits = bits


@dataclass(frozen=True)
class Program:
    """A validated program. Build one with :func:`parse_program`."""

    bits: str
    instructions: tuple[Opcode, ...]
    jumps: tuple[int, ...] = field(repr=False, compare=False)

    @property
    def length_bits(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return self.bits

    def mnemonic(self) -> str:
        return " ".join(op.name for op in self.instructions)


def _clean(bits: str) -> str:
    cleaned = "".join(bits.split())
    if cleaned.strip("01"):
        raise ValueError(f"program text must contain only '0' and '1': {bits!r}")
    return cleaned


def parse_program(bits: str) -> Program:
    """Parse an ASCII bitstring (whitespace ignored) into a :class:`Program`.

    Raises :class:`InvalidProgram` carrying the reason when ``bits`` is not a
    valid program.
    """
    bits = _clean(bits)
    ops: list[Opcode] = []
    jumps: list[int] = []
    open_loops: list[int] = []
    unbalanced = False
    halted = False
    for start in range(0, len(bits) - OPCODE_BITS + 1, OPCODE_BITS):
        op = Opcode(int(bits[start : start + OPCODE_BITS], 2))
        ops.append(op)
        jumps.append(-1)
        if op is Opcode.LOOP_BEGIN:
            open_loops.append(len(ops) - 1)
        elif op is Opcode.LOOP_END:
            if not open_loops:
                unbalanced = True
            else:
                begin = open_loops.pop()
                jumps[begin] = len(ops) - 1
                jumps[-1] = begin
        elif op is Opcode.HALT:
            halted = True
            break

    if not halted:
        if len(bits) % OPCODE_BITS:
            raise InvalidProgram(InvalidReason.NOT_MULTIPLE_OF_3, bits)
        raise InvalidProgram(InvalidReason.NO_HALT, bits)
    if len(bits) != OPCODE_BITS * len(ops):
        raise InvalidProgram(InvalidReason.TRAILING_BITS, bits)
    if unbalanced or open_loops:
        raise InvalidProgram(InvalidReason.UNBALANCED_LOOP, bits)
    return Program(bits, tuple(ops), tuple(jumps))


def is_valid(bits: str) -> bool:
    try:
        parse_program(bits)
    except InvalidProgram:
        return False
    return True


@dataclass(frozen=True)
class MachineConfig:
    step_cap: int = 1000
    input_cell: int = 0

    def __post_init__(self) -> None:
        if self.step_cap < 1:
            raise ValueError(f"step_cap must be >= 1, got {self.step_cap}")
        if not 0 <= self.input_cell <= 255:
            raise ValueError(f"input_cell must be in 0..255, got {self.input_cell}")


class RunStatus(enum.Enum):
    HALTED = "Halted"
    STEP_LIMIT = "StepLimit"


@dataclass(frozen=True)
class VmRun:
    status: RunStatus
    output: str
    steps: int
    tape_span: tuple[int, int]

    @property
    def halted(self) -> bool:
        return self.status is RunStatus.HALTED

    def to_record(self) -> dict:
        return {"status": self.status.value, "output": self.output, "steps": self.steps}


class Machine:
    """Resumable execution of one program.

    ``advance(budget)`` runs until the program halts or its total step count
    reaches ``budget``; calling it again with a larger budget continues where
    it stopped. Results never depend on how the budget was split.
    """

    __slots__ = ("program", "tape", "head", "pc", "steps", "output", "halted", "lo", "hi")

    def __init__(self, program: Program, input_cell: int = 0):
        self.program = program
        self.tape: dict[int, int] = {0: input_cell} if input_cell else {}
        self.head = 0
        self.pc = 0
        self.steps = 0
        self.output: list[str] = []
        self.halted = False
        self.lo = self.hi = 0

    def advance(self, budget: int) -> bool:
        if self.halted:
            return True
        ops = self.program.instructions
        jumps = self.program.jumps
        tape = self.tape
        head, pc, steps = self.head, self.pc, self.steps
        out = self.output
        lo, hi = self.lo, self.hi
        halted = False
        while steps < budget:
            op = ops[pc]
            steps += 1
            if op == 0:
                tape[head] = (tape.get(head, 0) + 1) & 0xFF
            elif op == 1:
                tape[head] = (tape.get(head, 0) - 1) & 0xFF
            elif op == 2:
                head -= 1
                if head < lo:
                    lo = head
            elif op == 3:
                head += 1
                if head > hi:
                    hi = head
            elif op == 4:
                out.append("1" if tape.get(head, 0) & 1 else "0")
            elif op == 5:
                if not tape.get(head, 0):
                    pc = jumps[pc]
            elif op == 6:
                if tape.get(head, 0):
                    # back to the LOOP_BEGIN itself, which executes again
                    pc = jumps[pc]
                    continue
            else:
                halted = True
                break
            pc += 1
        self.head, self.pc, self.steps = head, pc, steps
        self.lo, self.hi = lo, hi
        self.halted = halted
        return halted

    def result(self) -> VmRun:
        status = RunStatus.HALTED if self.halted else RunStatus.STEP_LIMIT
        return VmRun(status, "".join(self.output), self.steps, (self.lo, self.hi))


def run(program: Program | str, cfg: MachineConfig | None = None) -> VmRun:
    """Execute ``program`` for at most ``cfg.step_cap`` steps."""
    if isinstance(program, str):
        program = parse_program(program)
    cfg = cfg or MachineConfig()
    machine = Machine(program, cfg.input_cell)
    machine.advance(cfg.step_cap)
    return machine.result()


_BODY_OPS = tuple(op for op in Opcode if op is not Opcode.HALT)


def _programs_of_length(n_ops: int) -> Iterator[Program]:
    # depth-first in opcode order, so programs come out in lexicographic bit order
    body: list[Opcode] = []
    jumps: list[int] = []
    open_loops: list[int] = []
    n_body = n_ops - 1

    def extend() -> Iterator[Program]:
        remaining = n_body - len(body)
        if remaining == 0:
            if not open_loops:
                ops = (*body, Opcode.HALT)
                bits = "".join(op.bits for op in ops)
                yield Program(bits, ops, (*jumps, -1))
            return
        for op in _BODY_OPS:
            if op is Opcode.LOOP_BEGIN:
                if len(open_loops) + 1 > remaining - 1:
                    continue
                open_loops.append(len(body))
                body.append(op)
                jumps.append(-1)
                yield from extend()
                body.pop()
                jumps.pop()
                open_loops.pop()
            elif op is Opcode.LOOP_END:
                if not open_loops:
                    continue
                begin = open_loops.pop()
                jumps[begin] = len(body)
                body.append(op)
                jumps.append(begin)
                yield from extend()
                body.pop()
                jumps.pop()
                jumps[begin] = -1
                open_loops.append(begin)
            else:
                if len(open_loops) > remaining - 1:
                    continue
                body.append(op)
                jumps.append(-1)
                yield from extend()
                body.pop()
                jumps.pop()

    yield from extend()


def enumerate_valid(max_bits: int) -> Iterator[Program]:
    """Yield every valid program of at most ``max_bits`` bits.

    Order is by length, then lexicographically by bits; it is deterministic and
    independent of how the programs are later executed.
    """
    if max_bits < OPCODE_BITS:
        raise ValueError(f"max_bits must be >= {OPCODE_BITS}, got {max_bits}")
    for n_ops in range(1, max_bits // OPCODE_BITS + 1):
        yield from _programs_of_length(n_ops)
