from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from horizonlab.hvm import MachineConfig, enumerate_valid, parse_program, run
from horizonlab.omega import (
    BudgetZero,
    OracleMismatch,
    OracleTooSmall,
    convergence_series,
    decide_by_prefix,
    estimate_omega,
    prefix_decisions,
)

import naive_oracle


class TestEstimate:
    def test_three_bits(self):
        est = estimate_omega(3, 10)
        assert est.lower_bound == Fraction(1, 8)
        assert [e.bits for e in est.halting_census] == ["111"]

    def test_six_bits(self):
        assert estimate_omega(6, 10).lower_bound == Fraction(13, 64)

    def test_cap_one(self):
        assert estimate_omega(6, 1).lower_bound == Fraction(1, 8)

    def test_budget_zero(self):
        with pytest.raises(BudgetZero):
            estimate_omega(6, 0)

    def test_small_max_bits(self):
        with pytest.raises(ValueError):
            estimate_omega(2, 10)

    def test_csv_row(self):
        assert estimate_omega(6, 10).csv_row() == {
            "max_bits": 6,
            "step_cap": 10,
            "numerator": 13,
            "log2_denominator": 6,
            "census_size": 6,
        }

    def test_to_dict_is_exact(self):
        d = estimate_omega(6, 10).to_dict()
        assert d["lower_bound"] == "13/64"
        assert len(d["census"]) == 6

    @pytest.mark.parametrize("bits, cap", [(3, 10), (6, 10), (9, 5), (9, 100), (12, 50), (12, 1000)])
    def test_matches_naive_enumerator(self, bits, cap):
        assert estimate_omega(bits, cap).lower_bound == naive_oracle.omega(bits, cap)

    def test_census_consistent(self):
        est = estimate_omega(12, 1000)
        assert est.lower_bound == est.census_sum()
        assert est.lower_bound < 1
        order = [p.bits for p in enumerate_valid(12)]
        idx = [order.index(e.bits) for e in est.halting_census]
        assert idx == sorted(idx)
        for e in est.halting_census:
            r = run(e.bits, MachineConfig(step_cap=1000))
            assert r.halted and (r.steps, r.output) == (e.steps, e.output)

    def test_known_values(self):
        assert estimate_omega(12, 1000).lower_bound == Fraction(589, 2048)
        assert estimate_omega(15, 10_000).lower_bound == Fraction(10179, 32768)

    @settings(max_examples=15)
    @given(st.randoms(use_true_random=False))
    def test_schedule_independence(self, rnd):
        programs = list(enumerate_valid(9))
        order = list(range(len(programs)))
        rnd.shuffle(order)
        assert estimate_omega(9, 60, order) == estimate_omega(9, 60)


class TestSeries:
    def test_monotone_grid(self):
        bits, caps = [3, 6, 9, 12, 15], [1, 10, 1000]
        grid = convergence_series(bits, caps)
        table = {(e.max_bits, e.step_cap): e.lower_bound for e in grid}
        for i, b in enumerate(bits):
            for j, c in enumerate(caps):
                if i:
                    assert table[(bits[i - 1], c)] <= table[(b, c)]
                if j:
                    assert table[(b, caps[j - 1])] <= table[(b, c)]

    def test_matches_direct_estimates(self):
        for e in convergence_series([3, 6, 9], [1, 2, 10]):
            assert e == estimate_omega(e.max_bits, e.step_cap)

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            convergence_series([6, 3], [10])
        with pytest.raises(ValueError):
            convergence_series([], [10])


class TestDecide:
    def test_halt(self):
        v = decide_by_prefix(parse_program("111"), estimate_omega(3, 10))
        assert v.halts and v.steps == 1

    def test_six(self):
        v = decide_by_prefix(parse_program("000111"), estimate_omega(6, 10))
        assert v.halts and v.steps == 2
        assert str(v) == "000111: HaltsWithin(2)"

    def test_skipped_loop(self):
        v = decide_by_prefix(parse_program("101110111"), estimate_omega(9, 10))
        assert v.halts and v.steps <= 3

    def test_oracle_too_small(self):
        with pytest.raises(OracleTooSmall):
            decide_by_prefix(parse_program("000000111"), estimate_omega(6, 10))

    def test_oracle_mismatch(self):
        # An oracle from a tighter cap misses halters the dovetail will find.
        bad = estimate_omega(12, 1000)
        fake = type(bad)(bad.lower_bound, 12, 1000, bad.halting_census[:-1])
        with pytest.raises(OracleMismatch):
            prefix_decisions(12, fake)

    def test_non_halter_not_decided(self):
        oracle = estimate_omega(12, 1000)
        loops = parse_program("000101110111")
        v = decide_by_prefix(loops, oracle)
        assert not v.halts and "NotDecidedWithinBudget" in str(v)

    def test_agrees_with_direct_run(self):
        oracle = estimate_omega(12, 1000)
        verdicts = prefix_decisions(12, oracle)
        assert len(verdicts) == 172
        census = {e.bits: e.steps for e in oracle.halting_census}
        for bits, v in verdicts.items():
            direct = run(bits, MachineConfig(step_cap=1000))
            assert v.halts == direct.halted == (bits in census)
            if v.halts:
                assert v.steps == direct.steps <= v.budget
