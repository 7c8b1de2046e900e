"""Command-line entry point: ``horizonlab <subcommand> [options]``.

Every subcommand writes one report to ``--out`` (``-`` for stdout). Reports
carry the subcommand name, the echoed parameters, the payload and a
provenance block (tool version, config hash, random generator). They contain
no timestamps or paths, so identical parameters give byte-identical files.

A flat ``key = value`` config file may be passed with ``--config``. Keys use
the option names with underscores (``max_bits = 12``); command-line flags
override the file.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import itertools
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .complexity import (
    LISTED_RHO,
    BitOracle,
    HiddenPoint,
    edis_decompose,
    edis_eval,
    edis_trace,
    incompressibility_census,
    k_complexity,
    localize,
    program_point,
    random_point,
    seeded_oracle,
)
from .complexity.sigma import sigma_encode
from .diagonal import (
    AlphabetMap,
    build_outcome_table,
    diagonalize,
    diagonalize_beta,
    fixed_point_scan,
    measurement_sequence_diagonal,
    quantum_negation_check,
    random_table,
)
from .exact import DEFAULT_SEED, RNG_NAME, fraction_str, make_rng, parse_fraction
from .hvm import enumerate_valid
from .omega import convergence_series, estimate_omega
from .toybit import (
    IGNORANCE,
    InconsistentKnowledge,
    classicality_experiment,
    get_measurement,
    measurements,
    run_sequence,
)

ZERO_GENERATOR = "001001101100001001110111"


class CliError(Exception):
    """A failure reported as ``{"error": kind, "message": ...}`` with exit code 2."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


@dataclass
class Report:
    kind: str
    inputs: dict
    body: dict
    table: list[dict]

    def provenance(self) -> dict:
        canonical = json.dumps({"kind": self.kind, "inputs": self.inputs}, sort_keys=True)
        return {
            "tool": "horizonlab",
            "version": __version__,
            "config_sha256": hashlib.sha256(canonical.encode()).hexdigest(),
            "rng": RNG_NAME,
        }

    def to_json(self) -> str:
        doc = {
            "kind": self.kind,
            "inputs": self.inputs,
            "body": self.body,
            "table": self.table,
            "provenance": self.provenance(),
        }
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        """The report's table, preceded by ``# key=value`` header lines."""
        buf = io.StringIO()
        buf.write(f"# kind={self.kind}\n")
        for key, value in sorted(self.provenance().items()):
            buf.write(f"# {key}={value}\n")
        for key, value in sorted(self.inputs.items()):
            buf.write(f"# input.{key}={value}\n")
        for key, value in sorted(self.body.items()):
            buf.write(f"# {key}={json.dumps(value, sort_keys=True, ensure_ascii=False)}\n")
        if self.table:
            writer = csv.DictWriter(buf, fieldnames=list(self.table[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(self.table)
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise CliError("ParameterRange", message)


def _display(x: float) -> str:
    return f"{x:.6f}"


# Subcommands. Each validates its parameters, then computes.


def cmd_toy(args: argparse.Namespace) -> Report:
    _require(args.trials >= 0, f"trials must be >= 0, got {args.trials}")
    _require(args.convention in ("table", "listing"), f"unknown convention {args.convention!r}")
    try:
        seq = [get_measurement(name, args.convention) for name in args.sequence.split(",")]
    except ValueError as exc:
        raise CliError("ParameterRange", str(exc)) from None

    dist = run_sequence(seq, IGNORANCE, mode="exact")
    agree = sum((p for s, p in dist.items() if s[0] == s[-1]), Fraction(0))
    ms = measurements(args.convention)
    after_z = classicality_experiment([(ms["mz"], 1)], ms["mx"])
    body: dict[str, Any] = {
        "sequence": [str(m) for m in seq],
        "exact_distribution": {s: fraction_str(p) for s, p in dist.items()},
        "exact_first_last_agreement": fraction_str(agree),
        "mx_after_mz_p_one": fraction_str(after_z.p_one),
        "mx_after_mz_determined": after_z.determined,
    }
    if args.trials:
        rng = make_rng(args.seed)
        hits = 0
        for _ in range(args.trials):
            out = run_sequence(seq, IGNORANCE, mode="sampled", rng=rng).outcomes
            hits += out[0] == out[-1]
        body["sampled_trials"] = args.trials
        body["sampled_first_last_agreement"] = _display(hits / args.trials)

    table = []
    axes = ["mx", "my", "mz"]
    for a, b in itertools.permutations(axes, 2):
        target = next(c for c in axes if c not in (a, b))
        for x, y in itertools.product((0, 1), repeat=2):
            known = [(ms[a], x), (ms[b], y)]
            for access in (False, True):
                try:
                    pred = classicality_experiment(known, ms[target], ontic_access=access)
                except InconsistentKnowledge:
                    continue
                table.append({
                    "known": f"{a}={x},{b}={y}",
                    "target": target,
                    "ontic_access": int(access),
                    "determined": int(pred.determined),
                    "p_one": fraction_str(pred.p_one),
                    "ontic": str(pred.ontic) if pred.ontic is not None else "",
                })
    return Report("toy", _inputs(args, "trials", "sequence", "convention"), body, table)


def cmd_omega(args: argparse.Namespace) -> Report:
    _require(3 <= args.max_bits <= 21, f"max_bits must be in 3..21, got {args.max_bits}")
    _require(args.step_cap >= 1, f"step_cap must be >= 1, got {args.step_cap}")
    est = estimate_omega(args.max_bits, args.step_cap)
    body = {
        "lower_bound": fraction_str(est.lower_bound),
        "numerator": est.numerator,
        "log2_denominator": est.log2_denominator,
        "census_size": len(est.halting_census),
    }
    if args.series:
        bits_axis = list(range(3, args.max_bits + 1, 3))
        caps = sorted({c for c in (1, 10, 100, args.step_cap) if c <= args.step_cap})
        table = [e.csv_row() for e in convergence_series(bits_axis, caps)]
    else:
        table = [
            {"bits": e.bits, "length_bits": len(e.bits), "steps": e.steps, "output": e.output}
            for e in est.halting_census
        ]
    return Report("omega", _inputs(args, "max_bits", "step_cap", "series"), body, table)


def cmd_kolmo(args: argparse.Namespace) -> Report:
    _require(args.target.strip("01") == "", f"target must be a bitstring, got {args.target!r}")
    _require(3 <= args.max_bits <= 36, f"max_bits must be in 3..36, got {args.max_bits}")
    _require(args.step_cap >= 1, f"step_cap must be >= 1, got {args.step_cap}")
    _require(0 <= args.census_n <= 12, f"census_n must be in 0..12, got {args.census_n}")
    record = k_complexity(args.target, args.max_bits, args.step_cap)
    body: dict[str, Any] = {"record": record.to_dict()}
    table = []
    if args.census_n:
        census = incompressibility_census(args.census_n, args.max_bits, args.step_cap)
        body["census_unresolved"] = census.unresolved
        body["counting_bound_holds"] = census.counting_bound_holds()
        body["deficiency_histogram"] = {str(d): c for d, c in census.deficiency_histogram.items()}
        table = [{"n": n, "K": k, "count": c} for n, k, c in census.rows()]
    return Report("kolmo", _inputs(args, "target", "max_bits", "step_cap", "census_n"), body, table)


def cmd_diag(args: argparse.Namespace) -> Report:
    _require(1 <= args.rows <= 64, f"rows must be in 1..64, got {args.rows}")
    _require(2 <= args.alphabet <= 4, f"alphabet must be in 2..4, got {args.alphabet}")
    _require(args.source in ("programs", "random"), f"source must be programs or random, got {args.source!r}")
    _require(
        args.source == "random" or args.alphabet == 2,
        "program tables are binary; use --source random for larger alphabets",
    )
    _require(3 <= args.max_bits <= 21, f"max_bits must be in 3..21, got {args.max_bits}")
    _require(args.step_cap >= 1, f"step_cap must be >= 1, got {args.step_cap}")
    try:
        alpha = AlphabetMap.named(args.alpha, args.alphabet)
    except ValueError as exc:
        raise CliError("ParameterRange", str(exc)) from None

    rng = make_rng(args.seed)
    if args.source == "programs":
        table = build_outcome_table(list(enumerate_valid(args.max_bits)), list(range(args.rows)), args.step_cap)
        _require(len(table.rows) >= args.rows, f"only {len(table.rows)} qualifying programs up to {args.max_bits} bits")
        table = table.truncate(args.rows)
    else:
        table = random_table(args.rows, args.alphabet, rng)

    result = diagonalize(table, alpha)
    beta = [int(b) for b in rng.permutation(args.rows)]
    beta_result = diagonalize_beta(table, beta, alpha if args.alpha != "id" else None)
    seq = measurement_sequence_diagonal(table)
    quantum = quantum_negation_check(rng=rng)
    body = {
        "alpha": args.alpha,
        "fixed_points": fixed_point_scan(alpha),
        "g": list(result.g),
        "witnesses_valid": result.witness.valid_for(table),
        "coinciding_rows": list(result.coinciding_rows),
        "beta": beta,
        "g_beta": list(beta_result.g),
        "beta_witnesses_valid": beta_result.witness.valid_for(table),
        "sequence_diagonal": [list(e) for e in seq.entries],
        "quantum_passed": quantum["passed"],
        "quantum_fixed_vector": quantum["fixed_vector"],
        "table_rows": list(table.rows),
        "table_cells": [list(r) for r in table.cells],
    }
    rows = result.witness.quadruples(table)
    return Report("diag", _inputs(args, "rows", "alpha", "alphabet", "source", "max_bits", "step_cap"), body, rows)


def cmd_edis(args: argparse.Namespace) -> Report:
    _require(1 <= args.n <= 100_000, f"n must be in 1..100000, got {args.n}")
    _require(args.rho in ("seeded", "listed"), f"rho must be seeded or listed, got {args.rho!r}")
    if args.rho == "listed":
        _require(args.n <= len(LISTED_RHO), f"the listed oracle has {len(LISTED_RHO)} bits; n must be <= {len(LISTED_RHO)}")
        rho = BitOracle(LISTED_RHO)
    else:
        rho = seeded_oracle(args.n, make_rng(args.seed))
    inputs = range(1, args.n + 1)
    trace = edis_trace(inputs, rho)
    recovered = edis_decompose(list(zip(trace.inputs, trace.outputs)))
    body = {
        "u4": edis_eval(4, rho) if args.n >= 4 else None,
        "oracle_bits_consumed": trace.oracle_bits_consumed,
        "random_positions": len(trace.random_positions),
        "algorithmic_positions": len(trace.algorithmic_positions),
        "round_trip_exact": recovered == trace and recovered.replay() == trace.outputs,
    }
    table = [
        {"n": n, "value": v, "part": "random" if n in trace.random_positions else "algorithmic"}
        for n, v in zip(trace.inputs, trace.outputs)
    ]
    return Report("edis", _inputs(args, "n", "rho"), body, table)


def cmd_localize(args: argparse.Namespace) -> Report:
    _require(0 <= args.bits <= 64, f"bits must be in 0..64, got {args.bits}")
    _require(3 <= args.max_bits <= 36, f"max_bits must be in 3..36, got {args.max_bits}")
    _require(args.step_cap >= 1, f"step_cap must be >= 1, got {args.step_cap}")
    if args.source == "random":
        oracle = random_point(make_rng(args.seed))
    elif args.source == "zeros":
        oracle = program_point(ZERO_GENERATOR)
    elif args.source.startswith("x="):
        try:
            x = parse_fraction(args.source[2:])
        except (ValueError, ZeroDivisionError):
            raise CliError("ParameterRange", f"cannot parse {args.source!r} as x=p/q") from None
        _require(0 <= x < 1, f"x must lie in [0, 1), got {x}")
        oracle = HiddenPoint(x)
    else:
        raise CliError("ParameterRange", f"source must be random, zeros or x=p/q, got {args.source!r}")
    enc = localize(oracle, args.bits)
    lo, hi = enc.interval
    body: dict[str, Any] = {
        "sigma": enc.bits,
        "interval": [fraction_str(lo), fraction_str(hi)],
        "width": fraction_str(enc.width),
        "complexity": k_complexity(enc.bits, args.max_bits, args.step_cap).to_dict(),
    }
    if isinstance(oracle, HiddenPoint):
        body["matches_sigma_encode"] = sigma_encode(oracle.x, args.bits) == enc
    return Report("localize", _inputs(args, "bits", "source", "max_bits", "step_cap"), body, [])


def _inputs(args: argparse.Namespace, *names: str) -> dict:
    return {"seed": args.seed, **{n: getattr(args, n) for n in names}}


COMMANDS: dict[str, Callable[[argparse.Namespace], Report]] = {
    "toy": cmd_toy,
    "omega": cmd_omega,
    "kolmo": cmd_kolmo,
    "diag": cmd_diag,
    "edis": cmd_edis,
    "localize": cmd_localize,
}


def _add_global(p: argparse.ArgumentParser, suppress: bool) -> None:
    # Globals are accepted before or after the subcommand. The subparser copy
    # uses SUPPRESS so it does not clobber a value given before it, and spells
    # the default out in its help text instead.
    defaults = {"seed": DEFAULT_SEED, "out": "reports", "format": "json", "config": None}
    helps = {
        "seed": "seed for the PCG64 generator",
        "out": "output directory, or - for stdout",
        "format": "report format",
        "config": "flat key = value config file",
    }
    for name, value in defaults.items():
        kwargs: dict[str, Any] = {"default": value, "help": helps[name]}
        if suppress:
            kwargs = {"default": argparse.SUPPRESS, "help": f"{helps[name]} (default: {value})"}
        if name == "seed":
            kwargs["type"] = int
        if name == "format":
            kwargs["choices"] = ("csv", "json")
        p.add_argument(f"--{name}", **kwargs)


_GLOBALS = ("seed", "out", "format", "config")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="horizonlab", description=__doc__.splitlines()[0], formatter_class=fmt)
    _add_global(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("toy", help="toy-bit complementarity and classicality", formatter_class=fmt)
    p.add_argument("--trials", type=int, default=10_000, help="sampled runs (0 for exact only)")
    p.add_argument("--sequence", default="mz,mx,mz", help="comma-separated measurements")
    p.add_argument("--convention", default="table", help="axis labeling: table or listing")

    p = sub.add_parser("omega", help="halting-probability lower bound", formatter_class=fmt)
    p.add_argument("--max-bits", type=int, default=12, help="longest program length")
    p.add_argument("--step-cap", type=int, default=1000, help="steps per program")
    p.add_argument("--series", action="store_true", help="emit the convergence grid instead of the census")

    p = sub.add_parser("kolmo", help="bounded Kolmogorov complexity", formatter_class=fmt)
    p.add_argument("--target", default="", help="bitstring to compress")
    p.add_argument("--max-bits", type=int, default=27, help="longest program searched")
    p.add_argument("--step-cap", type=int, default=1000, help="steps per program")
    p.add_argument("--census-n", type=int, default=8, help="also census all strings of this length (0 = skip)")

    p = sub.add_parser("diag", help="diagonal construction over an outcome table", formatter_class=fmt)
    p.add_argument("--rows", type=int, default=8, help="table size after truncation")
    p.add_argument("--alpha", default="not", help="alphabet map: not, id or succ")
    p.add_argument("--alphabet", type=int, default=2, help="alphabet size (random tables only above 2)")
    p.add_argument("--source", default="programs", help="programs or random")
    p.add_argument("--max-bits", type=int, default=15, help="longest program used as a row")
    p.add_argument("--step-cap", type=int, default=1000, help="steps per cell")

    p = sub.add_parser("edis", help="algorithmic/random decomposition", formatter_class=fmt)
    p.add_argument("--n", type=int, default=300, help="evaluate inputs 1..n")
    p.add_argument("--rho", default="seeded", help="oracle: seeded or listed")

    p = sub.add_parser("localize", help="bisection localization of a hidden point", formatter_class=fmt)
    p.add_argument("--bits", type=int, default=10, help="number of halvings")
    p.add_argument("--source", default="random", help="random, zeros or x=p/q")
    p.add_argument("--max-bits", type=int, default=24, help="K-search bound for the resulting bits")
    p.add_argument("--step-cap", type=int, default=1000, help="steps per program")

    sub.add_parser("suite", help="run every subcommand with its defaults", formatter_class=fmt)

    for name, action in sub.choices.items():
        _add_global(action, suppress=True)
    return parser


def read_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise CliError("ConfigError", f"{path}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError("ConfigError", f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise CliError("ConfigError", f"{path}:{lineno}: empty key")
        values[key.replace("-", "_")] = value
    return values


def _apply_config(parser: argparse.ArgumentParser, argv: list[str], path: str) -> argparse.Namespace:
    """Use config values as defaults, then reparse so flags win."""
    values = read_config(path)
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    first = parser.parse_args(argv)
    target = sub_action.choices[first.command]
    known = {a.dest: a for p in (parser, target) for a in p._actions if a.dest != "help"}
    for key, value in values.items():
        if key not in known:
            raise CliError("ConfigError", f"{path}: unknown key {key!r} for {first.command}")
        action = known[key]
        if isinstance(action, argparse._StoreTrueAction):
            if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise CliError("ConfigError", f"{path}: {key} = {value!r} is not a boolean")
            parser.set_defaults(**{key: value.lower() in ("true", "1", "yes")})
            target.set_defaults(**{key: value.lower() in ("true", "1", "yes")})
            continue
        try:
            converted = action.type(value) if action.type else value
        except ValueError:
            raise CliError("ConfigError", f"{path}: {key} = {value!r} is not a valid {action.type.__name__}") from None
        if action.choices and converted not in action.choices:
            raise CliError("ConfigError", f"{path}: {key} must be one of {list(action.choices)}")
        # Globals live on the top-level parser; the subparser copies are
        # suppressed and must stay that way so a flag before the subcommand wins.
        owner = parser if key in _GLOBALS else target
        owner.set_defaults(**{key: converted})
    return parser.parse_args(argv)


def _emit(report: Report, args: argparse.Namespace) -> None:
    text = report.render(args.format)
    if args.out == "-":
        sys.stdout.write(text)
        return
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{report.kind}.{args.format}"
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)
    print(path)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
        if args.config:
            args = _apply_config(parser, argv, args.config)
        _require(0 <= args.seed < 2**64, f"seed must be a 64-bit unsigned integer, got {args.seed}")
        if args.command == "suite":
            for name, fn in COMMANDS.items():
                sub_args = parser.parse_args([name, "--seed", str(args.seed), "--out", args.out, "--format", args.format])
                _emit(fn(sub_args), sub_args)
        else:
            _emit(COMMANDS[args.command](args), args)
    except CliError as exc:
        sys.stderr.write(json.dumps({"error": exc.kind, "message": str(exc)}) + "\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
