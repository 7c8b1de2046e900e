"""An independent, deliberately naive model of the laboratory VM.

It shares no code with the package. Programs are found by scanning every
bitstring of a given length, and validity and execution are reimplemented
from the instruction table. It is slow and only used at small sizes.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

OPS = {"000": "+", "001": "-", "010": "<", "011": ">", "100": ".", "101": "[", "110": "]", "111": "H"}


def decode(bits: str):
    """Instruction list when ``bits`` is a valid program, else None."""
    if len(bits) % 3:
        return None
    ops = [OPS[bits[i : i + 3]] for i in range(0, len(bits), 3)]
    if "H" not in ops or ops.index("H") != len(ops) - 1:
        return None
    depth = 0
    for op in ops:
        if op == "[":
            depth += 1
        elif op == "]":
            depth -= 1
            if depth < 0:
                return None
    return ops if depth == 0 else None


def execute(ops, cap: int, cell0: int = 0):
    """(halted, output, steps), stepping one instruction at a time."""
    tape = {0: cell0}
    head = pc = steps = 0
    out = []
    while steps < cap:
        op = ops[pc]
        steps += 1
        if op == "H":
            return True, "".join(out), steps
        if op == "+":
            tape[head] = (tape.get(head, 0) + 1) % 256
        elif op == "-":
            tape[head] = (tape.get(head, 0) - 1) % 256
        elif op == "<":
            head -= 1
        elif op == ">":
            head += 1
        elif op == ".":
            out.append(str(tape.get(head, 0) % 2))
        elif op == "[":
            if tape.get(head, 0) == 0:
                depth = 1
                while depth:
                    pc += 1
                    depth += {"[": 1, "]": -1}.get(ops[pc], 0)
        elif op == "]":
            if tape.get(head, 0) != 0:
                depth = 1
                while depth:
                    pc -= 1
                    depth += {"]": 1, "[": -1}.get(ops[pc], 0)
                continue
        pc += 1
    return False, "".join(out), steps


def all_bitstrings(length: int):
    for combo in itertools.product("01", repeat=length):
        yield "".join(combo)


def valid_programs(max_bits: int):
    for length in range(max_bits + 1):
        for bits in all_bitstrings(length):
            if decode(bits) is not None:
                yield bits


def omega(max_bits: int, cap: int) -> Fraction:
    total = Fraction(0)
    for bits in valid_programs(max_bits):
        if execute(decode(bits), cap)[0]:
            total += Fraction(1, 2 ** len(bits))
    return total


def shortest_producer(target: str, max_bits: int, cap: int):
    """First program in (length, lexicographic) order printing exactly ``target``."""
    for bits in valid_programs(max_bits):
        halted, out, _ = execute(decode(bits), cap)
        if halted and out == target:
            return bits
    return None
