"""Exhaustive shortest-producer search over the VM's valid programs.

The search walks program prefixes depth first in opcode order and executes
them incrementally, so a prefix's machine state is computed once and shared by
every program that extends it. Three pruning rules keep it exact:

* **Output viability.** Output only ever grows. Once a prefix's output can no
  longer become a wanted string, nothing that extends it can either.
* **Skipped top-level loops.** A loop entered on a zero cell (outside any
  other loop) is jumped over. Deleting it gives a shorter program with the
  same output and fewer steps, so programs containing it never win.
* **State dominance.** Take two loop-free-at-the-cut prefixes that reach the
  same machine state (tape up to translation, plus output). The one that is
  no longer, no slower, and not lexicographically later produces everything
  the other one can, at least as early in canonical order.

Inside an open loop the first pass of the body is still executed eagerly; a
pass always runs at least once when the loop was entered on a nonzero cell.
When the loop closes on a nonzero cell the whole loop is run with the
interpreter.

The reported winner for each output is the canonical minimum: shortest, then
lexicographically first. That is the same answer a plain scan of
:func:`~horizonlab.hvm.enumerate_valid` gives.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..hvm import OPCODE_BITS

_INC, _DEC, _LEFT, _RIGHT, _OUT, _BEGIN, _END, _HALT = range(8)
_OP_BITS = tuple(format(op, "03b") for op in range(8))


@dataclass(frozen=True)
class Producer:
    bits: str
    steps: int

    @property
    def length_bits(self) -> int:
        return len(self.bits)


def _run_loop(code, begin, end, cells, head, out, steps, cap):
    """Run code[begin..end] (a whole loop) from the given state.

    Returns the new state, or None if the step cap is exceeded.
    """
    seg = code[begin : end + 1]
    jumps = [-1] * len(seg)
    stack = []
    for i, op in enumerate(seg):
        if op == _BEGIN:
            stack.append(i)
        elif op == _END:
            j = stack.pop()
            jumps[i], jumps[j] = j, i
    tape = list(cells)
    out_parts = [out]
    pc = 0
    n = len(seg)
    while pc < n:
        if steps >= cap:
            return None
        steps += 1
        op = seg[pc]
        if op == _INC:
            tape[head] = (tape[head] + 1) & 0xFF
        elif op == _DEC:
            tape[head] = (tape[head] - 1) & 0xFF
        elif op == _LEFT:
            if head == 0:
                tape.insert(0, 0)
            else:
                head -= 1
        elif op == _RIGHT:
            head += 1
            if head == len(tape):
                tape.append(0)
        elif op == _OUT:
            out_parts.append("1" if tape[head] & 1 else "0")
        elif op == _BEGIN:
            if not tape[head]:
                pc = jumps[pc]
        else:
            if tape[head]:
                pc = jumps[pc]
                continue
        pc += 1
    return tuple(tape), head, "".join(out_parts), steps


def _state_key(cells, head, out):
    first = 0
    last = len(cells) - 1
    while first <= last and not cells[first]:
        first += 1
    if first > last:
        return ((), 0, out)
    while not cells[last]:
        last -= 1
    return (cells[first : last + 1], head - first, out)


def shortest_producers(
    max_bits: int,
    step_cap: int,
    viable: Callable[[str], bool],
    wanted: Callable[[str], bool],
    input_cell: int = 0,
) -> dict[str, Producer]:
    """Map each wanted output to its canonical-first producer of <= max_bits bits.

    ``viable(out)`` must be True whenever some extension of ``out`` is wanted.
    ``wanted(out)`` selects the outputs to report.
    """
    if max_bits < OPCODE_BITS:
        raise ValueError(f"max_bits must be >= {OPCODE_BITS}, got {max_bits}")
    if step_cap < 1:
        raise ValueError(f"step_cap must be >= 1, got {step_cap}")
    max_body = max_bits // OPCODE_BITS - 1
    best: dict[str, tuple[int, str, int]] = {}
    seen: dict[tuple, list[tuple[int, int]]] = {}
    code: list[int] = []

    def record(out: str, steps: int) -> None:
        n_ops = len(code) + 1
        bits = "".join(_OP_BITS[op] for op in code) + _OP_BITS[_HALT]
        prev = best.get(out)
        if prev is None or (n_ops, bits) < (prev[0], prev[1]):
            best[out] = (n_ops, bits, steps)

    def dominated(cells, head, out, steps) -> bool:
        key = _state_key(cells, head, out)
        depth = len(code)
        entries = seen.get(key)
        if entries is None:
            seen[key] = [(depth, steps)]
            return False
        for d, s in entries:
            if d <= depth and s <= steps:
                return True
        entries[:] = [(d, s) for d, s in entries if not (depth <= d and steps <= s)]
        entries.append((depth, steps))
        return False

    # exec_stack: code indices of loops whose first pass is being executed
    # skip: nesting depth of loops being skipped on the current first pass
    def visit(cells, head, out, steps, exec_stack, skip):
        closed = not exec_stack and not skip
        if closed:
            if dominated(cells, head, out, steps):
                return
            if steps < step_cap and wanted(out):
                record(out, steps + 1)
        remaining = max_body - len(code)
        if remaining == 0:
            return
        n_open = len(exec_stack) + skip
        straight_ok = n_open <= remaining - 1

        if skip:
            # nothing executes until the skipped loop closes
            if straight_ok:
                for op in (_INC, _DEC, _LEFT, _RIGHT, _OUT):
                    code.append(op)
                    visit(cells, head, out, steps, exec_stack, skip)
                    code.pop()
            if n_open + 1 <= remaining - 1:
                code.append(_BEGIN)
                visit(cells, head, out, steps, exec_stack, skip + 1)
                code.pop()
            code.append(_END)
            visit(cells, head, out, steps, exec_stack, skip - 1)
            code.pop()
            return

        if steps >= step_cap:
            return
        nsteps = steps + 1
        cell = cells[head]
        if straight_ok:
            code.append(_INC)
            visit(cells[:head] + ((cell + 1) & 0xFF,) + cells[head + 1 :], head, out, nsteps, exec_stack, 0)
            code[-1] = _DEC
            visit(cells[:head] + ((cell - 1) & 0xFF,) + cells[head + 1 :], head, out, nsteps, exec_stack, 0)
            code[-1] = _LEFT
            if head == 0:
                visit((0,) + cells, 0, out, nsteps, exec_stack, 0)
            else:
                visit(cells, head - 1, out, nsteps, exec_stack, 0)
            code[-1] = _RIGHT
            if head + 1 == len(cells):
                visit(cells + (0,), head + 1, out, nsteps, exec_stack, 0)
            else:
                visit(cells, head + 1, out, nsteps, exec_stack, 0)
            nout = out + ("1" if cell & 1 else "0")
            if viable(nout):
                code[-1] = _OUT
                visit(cells, head, nout, nsteps, exec_stack, 0)
            code.pop()
        if n_open + 1 <= remaining - 1:
            if cell:
                code.append(_BEGIN)
                visit(cells, head, out, nsteps, exec_stack + (len(code) - 1,), 0)
                code.pop()
            elif exec_stack:
                code.append(_BEGIN)
                visit(cells, head, out, nsteps, exec_stack, 1)
                code.pop()
            # a top-level loop on a zero cell is skipped outright: dominated
        if exec_stack:
            begin = exec_stack[-1]
            code.append(_END)
            if not cell:
                visit(cells, head, out, nsteps, exec_stack[:-1], 0)
            else:
                state = _run_loop(code, begin, len(code) - 1, cells, head, out, nsteps, step_cap)
                if state is not None and viable(state[2]):
                    visit(*state, exec_stack[:-1], 0)
            code.pop()

    visit((input_cell,), 0, "", 0, (), 0)
    return {out: Producer(bits, steps) for out, (_, bits, steps) in best.items()}

