"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines inline; they
are also echoed with capture disabled, so a plain ``pytest`` run shows them.
"""

import filecmp
import itertools
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from horizonlab.complexity import (
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
    sigma_encode,
)
from horizonlab.diagonal import (
    AlphabetMap,
    diagonalize,
    diagonalize_beta,
    quantum_negation_check,
    random_table,
)
from horizonlab.exact import DEFAULT_SEED, make_rng
from horizonlab.hvm import MachineConfig, enumerate_valid, is_valid, run
from horizonlab.omega import convergence_series, decide_by_prefix, estimate_omega
from horizonlab.toybit import (
    IGNORANCE,
    OnticState,
    classicality_experiment,
    get_measurement,
    measure,
    measurements,
    run_sequence,
)

import naive_oracle

# Measurement table transcribed from the source, columns t1..t4.
MEASUREMENT_TABLE = {"mz": "1100", "mx": "1010", "my": "1001"}


@pytest.fixture
def verdict(pytestconfig):
    capman = pytestconfig.pluginmanager.getplugin("capturemanager")

    def emit(name: str, ok: bool, elapsed: float, budget: float, detail: str) -> None:
        in_time = elapsed < budget
        status = "PASS" if ok and in_time else "FAIL"
        line = f"[{status}] {name}: {detail} ({elapsed:.4g}s, budget {budget:g}s)"
        with capman.global_and_fixture_disabled():
            print("\n" + line)
        assert ok, line
        assert in_time, line

    return emit


def test_measurement_table(verdict):
    start = time.perf_counter()
    checked = mismatches = 0
    for name, row in MEASUREMENT_TABLE.items():
        m = get_measurement(name)
        for t, bit in zip(OnticState, row):
            mismatches += measure(t, m) != int(bit)
            mismatches += measure(t, m.orthogonal) != 1 - int(bit)
            checked += 2
    elapsed = time.perf_counter() - start
    verdict("measurement table", checked == 24 and mismatches == 0, elapsed, 1e-3, f"{checked} entries, {mismatches} mismatches")


def test_complementarity(verdict):
    start = time.perf_counter()
    mz, mx = get_measurement("mz"), get_measurement("mx")
    seq = [mz, mx, mz]
    dist = run_sequence(seq, IGNORANCE, mode="exact")
    exact = sum((p for s, p in dist.items() if s[0] == s[2]), Fraction(0))
    rng = make_rng(DEFAULT_SEED)
    n = 10_000
    hits = sum(
        (out := run_sequence(seq, IGNORANCE, mode="sampled", rng=rng).outcomes)[0] == out[2] for _ in range(n)
    )
    freq = hits / n
    elapsed = time.perf_counter() - start
    ok = isinstance(exact, Fraction) and exact == Fraction(1, 2) and abs(freq - 0.5) <= 0.02
    verdict("complementarity", ok, elapsed, 1.0, f"exact {exact}, sampled {freq:.4f} at N={n}")


def test_classicality_with_ontic_access(verdict):
    ms = measurements("listing")
    start = time.perf_counter()
    worked = classicality_experiment([(ms["mx"], 0), (ms["my"], 1)], ms["mz"], ontic_access=True)
    ok = worked.determined and worked.bit == 0 and worked.ontic is OnticState.T3
    pairs = 0
    for a, b in itertools.permutations(["mx", "my", "mz"], 2):
        c = ({"mx", "my", "mz"} - {a, b}).pop()
        for x, y in itertools.product((0, 1), repeat=2):
            pred = classicality_experiment([(ms[a], x), (ms[b], y)], ms[c], ontic_access=True)
            states = [t for t in OnticState if measure(t, ms[a]) == x and measure(t, ms[b]) == y]
            ok &= len(states) == 1 and pred.ontic is states[0] and pred.bit == measure(states[0], ms[c])
            pairs += 1
    elapsed = time.perf_counter() - start
    verdict("classicality with ontic access", ok, elapsed, 1e-3, f"mx=0,my=1 -> mz={worked.bit}, {worked.ontic}; {pairs} pairs")


def test_prefix_freeness(verdict):
    start = time.perf_counter()
    valid = set()
    for length in range(16):
        for combo in itertools.product("01", repeat=length):
            bits = "".join(combo)
            if is_valid(bits):
                valid.add(bits)
    clashes = sum(bits[:cut] in valid for bits in valid for cut in range(1, len(bits)))
    elapsed = time.perf_counter() - start
    verdict("prefix-freeness", clashes == 0, elapsed, 10.0, f"{len(valid)} valid programs up to 15 bits, {clashes} prefix clashes")


def test_omega_values(verdict):
    start = time.perf_counter()
    a, b = estimate_omega(3, 10).lower_bound, estimate_omega(6, 10).lower_bound
    ok = a == Fraction(1, 8) == naive_oracle.omega(3, 10)
    ok &= b == Fraction(13, 64) == naive_oracle.omega(6, 10)
    bits, caps = [3, 6, 9, 12, 15], [1, 10, 1000]
    grid = {(e.max_bits, e.step_cap): e.lower_bound for e in convergence_series(bits, caps)}
    for (i, bb), (j, c) in itertools.product(enumerate(bits), enumerate(caps)):
        if i:
            ok &= grid[(bits[i - 1], c)] <= grid[(bb, c)]
        if j:
            ok &= grid[(bb, caps[j - 1])] <= grid[(bb, c)]
    elapsed = time.perf_counter() - start
    verdict("omega values", ok, elapsed, 60.0, f"omega(3,10)={a}, omega(6,10)={b}, grid max {grid[(15, 1000)]}")


def test_omega_prefix_decision(verdict):
    start = time.perf_counter()
    oracle = estimate_omega(12, 1000)
    longer = estimate_omega(12, 100_000)
    complete = (oracle.lower_bound, oracle.halting_census) == (longer.lower_bound, longer.halting_census)
    agree = 0
    programs = list(enumerate_valid(12))
    for prog in programs:
        v = decide_by_prefix(prog, oracle)
        direct = run(prog, MachineConfig(step_cap=oracle.step_cap))
        agree += v.halts == direct.halted and (not v.halts or v.steps == direct.steps)
    elapsed = time.perf_counter() - start
    ok = complete and agree == len(programs)
    verdict("omega-prefix decision", ok, elapsed, 60.0, f"{agree}/{len(programs)} verdicts agree, census budget-complete={complete}")


def test_k_anchors(verdict):
    start = time.perf_counter()
    expected = {"": (3, "111"), "0": (6, "100111"), "1": (9, "000100111")}
    ok = True
    parts = []
    for target, (k, w) in expected.items():
        rec = k_complexity(target, 15, 1000)
        naive = naive_oracle.shortest_producer(target, 15, 1000)
        ok &= rec.exact and (rec.k_bits, rec.witness) == (k, w) and naive == w
        parts.append(f"K({target!r})={rec.k_bits}")
    elapsed = time.perf_counter() - start
    verdict("K anchors", ok, elapsed, 60.0, ", ".join(parts) + ", witnesses match naive scan")


def test_counting_bound(verdict):
    start = time.perf_counter()
    ok = True
    for n in range(1, 9):
        census = incompressibility_census(n, 27, 1000)
        ok &= census.counting_bound_holds()
        ok &= sum(census.counts.values()) + census.unresolved == 2**n
    elapsed = time.perf_counter() - start
    verdict("counting bound", ok, elapsed, 300.0, "n=1..8 at 27 bits, cap 1000")


def test_diagonal_property(verdict):
    start = time.perf_counter()
    rng = make_rng(DEFAULT_SEED)
    bad = 0
    for _ in range(1000):
        size = int(rng.integers(1, 65))
        k = int(rng.integers(2, 5))
        table = random_table(size, k, rng)
        alpha = AlphabetMap.negation() if k == 2 else AlphabetMap.cyclic_successor(k)
        res = diagonalize(table, alpha)
        beta = rng.permutation(size).tolist()
        res_beta = diagonalize_beta(table, beta, alpha)
        for r in (res, res_beta):
            bad += (not r.witness.valid_for(table)) or bool(r.coinciding_rows)
            bad += len(r.witness.per_row_witness) != size
    elapsed = time.perf_counter() - start
    verdict("diagonal property", bad == 0, elapsed, 30.0, f"1000 tables, {bad} failures")


def test_quantum_escape(verdict):
    quantum_negation_check(1e-12, rng=make_rng(0))  # warm up numpy dispatch
    start = time.perf_counter()
    rep = quantum_negation_check(1e-12, rng=make_rng(DEFAULT_SEED), n_random=100)
    elapsed = time.perf_counter() - start
    verdict(
        "quantum escape",
        rep["passed"],
        elapsed,
        1e-3,
        f"|D|+>-|+>|={rep['D|+>=|+>']:.1e}, involution error {rep['involution_max_error']:.1e} on 100 states",
    )


def test_edis_round_trip(verdict):
    start = time.perf_counter()
    rho = seeded_oracle(300, make_rng(DEFAULT_SEED))
    trace = edis_trace(range(1, 301), rho)
    back = edis_decompose(list(zip(trace.inputs, trace.outputs)))
    ok = (back.inputs, back.outputs, back.oracle_bits_consumed) == (trace.inputs, trace.outputs, trace.oracle_bits_consumed)
    ok &= back.replay() == trace.outputs
    listed = BitOracle(LISTED_RHO)
    ok &= edis_eval(4, listed) == 16
    listed_vals = [edis_eval(n, listed) for n in (3, 6, 9, 12, 15)]
    ok &= listed_vals == [int(LISTED_RHO[n - 1]) for n in (3, 6, 9, 12, 15)]
    elapsed = time.perf_counter() - start
    verdict("edis round trip", ok, elapsed, 1.0, f"n=1..300, {len(trace.oracle_bits_consumed)} oracle bits, listed rho(3..15)={listed_vals}")


def test_localization(verdict):
    start = time.perf_counter()
    ok = True
    for k in range(256):
        x = Fraction(k, 256)
        for n in range(9):
            enc = sigma_encode(x, n)
            expansion = format(k, "08b")[:n]
            ok &= enc.bits == expansion
            ok &= localize(HiddenPoint(x), n) == enc
            lo, hi = enc.interval
            ok &= hi - lo == Fraction(1, 2**n) and lo <= x < hi
    elapsed = time.perf_counter() - start
    verdict("localization", ok, elapsed, 1.0, "256 dyadic points x n=0..8")


def test_compressibility_contrast(verdict, census10):
    census, build_time = census10
    start = time.perf_counter()
    zeros = census.records["0" * 10]
    median = census.median_lower_bound()
    elapsed = build_time + time.perf_counter() - start
    ok = zeros.exact and zeros.k_bits < median
    verdict(
        "compressibility contrast",
        ok,
        elapsed,
        300.0,
        f"K(0^10)={zeros.k_bits}, median K lower bound {median} "
        f"({census.unresolved} of 1024 above {census.search_max_bits} bits)",
    )


def test_cli_determinism(verdict, tmp_path):
    start = time.perf_counter()
    dirs = [tmp_path / "a", tmp_path / "b"]
    codes = [
        subprocess.run([sys.executable, "-m", "horizonlab.cli", "suite", "--out", str(d)], capture_output=True).returncode
        for d in dirs
    ]
    names = sorted(p.name for p in dirs[0].iterdir())
    match, mismatch, errors = filecmp.cmpfiles(dirs[0], dirs[1], names, shallow=False)
    elapsed = time.perf_counter() - start
    ok = codes == [0, 0] and len(names) == 6 and not mismatch and not errors
    verdict("CLI determinism", ok, elapsed, 600.0, f"{len(match)}/{len(names)} reports byte-identical")


def test_sigma_of_random_point_is_typical(census10):
    """A seeded random point's 10-bit prefix sits in the typical band, not the compressible one."""
    census, _ = census10
    sigma = localize(random_point(make_rng(DEFAULT_SEED)), 10)
    rec = census.records[sigma.bits]
    assert rec.lower_bound > census.records["0" * 10].k_bits
    assert rec.lower_bound >= census.median_lower_bound()


def test_sigma_of_generated_point_is_compressible(census10):
    census, _ = census10
    sigma = localize(program_point("001001101100001001110111"), 10)
    rec = census.records[sigma.bits]
    assert rec.exact and rec.k_bits == min(r.lower_bound for r in census.records.values())
