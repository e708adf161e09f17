import numpy as np
import pytest
from hypothesis import given, settings

from photonic_ssp import (
    CountOverflow,
    InstanceTooLarge,
    MissingTarget,
    NonPositiveElement,
    SSPInstance,
    TargetOutOfRange,
    count_subsets_dp,
    decide,
    enumerate_subsets,
    parse_instance,
)
from photonic_ssp.ssp_core import first_primes, load_instance

from .conftest import instances
from .oracles import first_n_primes, subset_sum_histogram


class TestParseInstance:
    def test_fig1_instance(self):
        inst = parse_instance([2, 5, 7, 9], 14)
        assert inst.total == 23
        assert inst.size == 4
        assert inst.target == 14

    def test_no_target(self):
        inst = parse_instance([3, 7, 11])
        assert (inst.total, inst.size, inst.target) == (21, 3, None)

    def test_target_above_total(self):
        with pytest.raises(TargetOutOfRange):
            parse_instance([1], 2)

    def test_negative_target(self):
        with pytest.raises(TargetOutOfRange):
            parse_instance([1, 2], -1)

    @pytest.mark.parametrize("bad", [[0, 3], [4, -1]])
    def test_non_positive(self, bad):
        with pytest.raises(NonPositiveElement):
            parse_instance(bad)

    def test_empty(self):
        with pytest.raises(ValueError):
            parse_instance([])

    def test_non_integer(self):
        with pytest.raises(ValueError):
            parse_instance([1.5, 2])

    def test_order_and_duplicates_kept(self):
        assert parse_instance([9, 3, 3]).elements == (9, 3, 3)

    def test_load_instance(self, tmp_path):
        path = tmp_path / "inst.json"
        path.write_text('{"elements": [3, 7, 11], "target": null}')
        assert load_instance(path) == SSPInstance((3, 7, 11))


class TestCountSubsets:
    def test_three_seven_eleven(self):
        table = count_subsets_dp(SSPInstance((3, 7, 11)))
        assert table.achievable() == [0, 3, 7, 10, 11, 14, 18, 21]
        assert all(table[s] == 1 for s in table.achievable())

    def test_duplicate_sum(self):
        assert count_subsets_dp(SSPInstance((1, 2, 3)))[3] == 2

    def test_singleton(self):
        assert list(count_subsets_dp(SSPInstance((5,))).counts) == [1, 0, 0, 0, 0, 1]

    def test_counts_by_index_not_value(self):
        table = count_subsets_dp(SSPInstance((3, 3)))
        assert [table[s] for s in (0, 3, 6)] == [1, 2, 1]

    def test_big_instance_exact(self):
        inst = SSPInstance(tuple([1] * 70))
        table = count_subsets_dp(inst)
        assert table.counts.dtype == object
        assert sum(table.counts) == 2**70
        assert table[35] == 112186277816662845432

    def test_int64_overflow_guard(self):
        with pytest.raises(CountOverflow):
            count_subsets_dp(SSPInstance(tuple([1] * 63)), dtype=np.int64)

    @settings(max_examples=150, deadline=None)
    @given(instances(max_n=12, max_element=30))
    def test_matches_enumeration(self, inst):
        table = count_subsets_dp(inst)
        hist = subset_sum_histogram(inst.elements)
        assert all(table[s] == hist.get(s, 0) for s in range(inst.total + 1))

    @settings(max_examples=150, deadline=None)
    @given(instances(max_n=16, max_element=40))
    def test_table_invariants(self, inst):
        counts = count_subsets_dp(inst).counts
        assert int(counts.sum()) == 2**inst.size
        assert counts[0] >= 1 and counts[-1] >= 1
        assert np.array_equal(counts, counts[::-1])


class TestEnumerate:
    def test_pair(self):
        assert sorted(enumerate_subsets(SSPInstance((2, 5)))) == [(0, 0), (1, 2), (2, 5), (3, 7)]

    def test_singleton(self):
        assert sorted(enumerate_subsets(SSPInstance((9,)))) == [(0, 0), (1, 9)]

    def test_fig2c_sixteen_distinct(self):
        pairs = list(enumerate_subsets(SSPInstance((3, 7, 9, 11))))
        assert len(pairs) == 16
        assert len({s for _, s in pairs}) == 16
        assert len({m for m, _ in pairs}) == 16

    def test_guard(self):
        with pytest.raises(InstanceTooLarge):
            next(enumerate_subsets(SSPInstance(tuple([1] * 31))))

    @settings(max_examples=100, deadline=None)
    @given(instances(max_n=16, max_element=25))
    def test_dp_equals_enumeration_histogram(self, inst):
        counts = count_subsets_dp(inst).counts
        hist = np.zeros_like(counts)
        for _, s in enumerate_subsets(inst):
            hist[s] += 1
        assert np.array_equal(counts, hist)


class TestDecide:
    def test_fig1_fourteen(self):
        assert decide(SSPInstance((2, 5, 7, 9), 14))

    def test_five_absent(self):
        assert not decide(SSPInstance((3, 7, 11), 5))

    def test_missing_target(self):
        with pytest.raises(MissingTarget):
            decide(SSPInstance((3, 7, 11)))

    @given(instances(max_n=10, max_element=50))
    def test_zero_and_total_always_yes(self, inst):
        assert decide(inst.with_target(0))
        assert decide(inst.with_target(inst.total))


def test_first_primes_against_sympy():
    assert first_primes(60) == first_n_primes(60)
