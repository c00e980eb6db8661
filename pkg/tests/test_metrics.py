import math
import random

import pytest

from riskcal.catalog import fetch_records
from riskcal.errors import EmptyTable, UnknownAttribute
from riskcal.metrics import (
    attribute_entropy,
    k_anonymity,
    l_diversity,
    partition,
    risk_summary,
    skew_score,
    t_closeness,
    vulnerable_entry_points,
)

import oracles
from helpers import make_table, random_table


@pytest.fixture(scope="module")
def wpc_table(meta_by_id, source):
    return fetch_records(meta_by_id["smc-wpc-demographics-2"], source)


@pytest.fixture(scope="module")
def phpp_table(meta_by_id, source):
    return fetch_records(meta_by_id["smc-demographics-phpp"], source)


class TestPartition:
    def test_two_classes_of_two(self):
        table = make_table({"sex": ["F", "F", "M", "M"]})
        part = partition(table, ["sex"])
        assert sorted(len(v) for v in part.classes.values()) == [2, 2]

    def test_all_distinct_rows_all_singletons(self):
        table = make_table({"a": ["1", "2", "3"], "b": ["x", "y", "z"]})
        part = partition(table, ["a", "b"])
        assert len(part.classes) == 3
        assert all(len(v) == 1 for v in part.classes.values())

    def test_matches_exhaustive_grouping(self):
        rng = random.Random(11)
        table = random_table(rng, max_rows=10, max_attrs=3, alphabet_size=3)
        keys = list(table.attribute_names)
        part = partition(table, keys)
        expected = oracles.group_rows(table.rows, [table.column_index(k) for k in keys])
        assert {k: list(v) for k, v in part.classes.items()} == expected

    def test_cells_trimmed(self):
        table = make_table({"sex": [" F", "F ", "M"]})
        part = partition(table, ["sex"])
        assert set(part.classes) == {("F",), ("M",)}

    def test_unknown_attribute(self):
        table = make_table({"a": ["1"]})
        with pytest.raises(UnknownAttribute):
            partition(table, ["b"])

    def test_partition_is_disjoint_cover(self):
        rng = random.Random(7)
        for _ in range(25):
            table = random_table(rng, max_rows=60, max_attrs=4, allow_empty_cells=True)
            part = partition(table, list(table.attribute_names)[:2])
            seen = sorted(i for ix in part.classes.values() for i in ix)
            assert seen == list(range(len(table)))
            assert all(ix for ix in part.classes.values())


class TestKAnonymity:
    def test_unique_record_gives_k1(self, wpc_table):
        part = partition(wpc_table, ["age", "race", "sex"])
        assert k_anonymity(part) == 1

    def test_identical_keys_give_k_n(self):
        table = make_table({"age": ["30"] * 6, "sex": ["F"] * 6})
        assert k_anonymity(partition(table, ["age", "sex"])) == 6

    def test_matches_oracle_on_random_table(self):
        rng = random.Random(23)
        table = random_table(rng, max_rows=200, max_attrs=4)
        keys = list(table.attribute_names)[:2]
        expected = oracles.k_anonymity(table.rows, [table.column_index(k) for k in keys])
        assert k_anonymity(partition(table, keys)) == expected

    def test_empty_table(self):
        table = make_table({"age": []})
        with pytest.raises(EmptyTable):
            k_anonymity(partition(table, ["age"]))

    def test_duplicating_a_row_never_decreases_k(self):
        rng = random.Random(5)
        for _ in range(20):
            table = random_table(rng, max_rows=30, max_attrs=3)
            keys = list(table.attribute_names)
            k_before = k_anonymity(partition(table, keys))
            dup = table.rows[rng.randrange(len(table.rows))]
            bigger = make_table(
                {
                    name: [r[i] for r in table.rows + (dup,)]
                    for i, name in enumerate(table.attribute_names)
                }
            )
            assert k_anonymity(partition(bigger, keys)) >= k_before


class TestLDiversity:
    def test_single_value_classes(self):
        table = make_table({"age": ["1", "1", "2", "2"], "dx": ["flu", "flu", "tb", "tb"]})
        assert l_diversity(partition(table, ["age"]), table, "dx") == 1

    def test_all_distinct_sensitive_equals_k(self):
        table = make_table(
            {"age": ["1", "1", "2", "2"], "dx": ["a", "b", "c", "d"]}
        )
        part = partition(table, ["age"])
        assert l_diversity(part, table, "dx") == k_anonymity(part)

    def test_matches_oracle(self):
        rng = random.Random(31)
        for _ in range(10):
            table = random_table(rng, max_rows=120, max_attrs=4)
            names = list(table.attribute_names)
            keys, sensitive = names[:-1] or names, names[-1]
            expected = oracles.l_diversity(
                table.rows, [table.column_index(k) for k in keys], table.column_index(sensitive)
            )
            assert l_diversity(partition(table, keys), table, sensitive) == expected

    def test_l_never_exceeds_k(self):
        rng = random.Random(37)
        for _ in range(20):
            table = random_table(rng, max_rows=80, max_attrs=3)
            names = list(table.attribute_names)
            part = partition(table, names[:1])
            assert l_diversity(part, table, names[-1]) <= k_anonymity(part)


class TestTCloseness:
    def test_zero_when_classes_match_global(self):
        table = make_table(
            {"g": ["a", "a", "b", "b"], "dx": ["x", "y", "x", "y"]}
        )
        assert t_closeness(partition(table, ["g"]), table, "dx") == pytest.approx(0.0)

    def test_concentrated_class(self):
        # one class holds the only "rare" value, which carries global mass 1/4
        table = make_table(
            {"g": ["a", "b", "b", "b"], "dx": ["rare", "x", "y", "z"]}
        )
        assert t_closeness(partition(table, ["g"]), table, "dx") == pytest.approx(0.75)

    def test_matches_oracle_within_tolerance(self):
        rng = random.Random(41)
        for _ in range(10):
            table = random_table(rng, max_rows=150, max_attrs=4)
            names = list(table.attribute_names)
            keys, sensitive = names[:-1] or names, names[-1]
            expected = oracles.t_closeness(
                table.rows, [table.column_index(k) for k in keys], table.column_index(sensitive)
            )
            got = t_closeness(partition(table, keys), table, sensitive)
            assert abs(got - expected) < 1e-9
            assert 0.0 <= got <= 1.0


class TestEntropy:
    @pytest.mark.parametrize("n", [2, 4, 8, 16])
    def test_uniform_is_log2_n(self, n):
        table = make_table({"v": [f"c{i}" for i in range(n)]})
        assert attribute_entropy(table, "v") == pytest.approx(math.log2(n), abs=1e-9)

    def test_constant_is_zero(self):
        table = make_table({"v": ["same"] * 9})
        assert attribute_entropy(table, "v") == 0.0

    def test_half_quarter_quarter(self):
        table = make_table({"v": ["a", "a", "b", "c"]})
        assert attribute_entropy(table, "v") == pytest.approx(1.5, abs=1e-9)

    def test_bounded_by_log2_distinct(self):
        rng = random.Random(43)
        for _ in range(20):
            table = random_table(rng, max_rows=100, max_attrs=1)
            attr = table.attribute_names[0]
            distinct = len({c.strip() for c in table.column(attr)})
            assert attribute_entropy(table, attr) <= math.log2(distinct) + 1e-12

    def test_empty_table(self):
        with pytest.raises(EmptyTable):
            attribute_entropy(make_table({"v": []}), "v")


class TestSkew:
    def test_uniform_is_zero(self):
        table = make_table({"v": ["a", "b", "c", "d"]})
        assert skew_score(table, "v") == pytest.approx(0.0, abs=1e-12)

    def test_extreme_skew(self):
        table = make_table({"v": ["a"] * 999 + ["b"]})
        h = -(0.999 * math.log2(0.999) + 0.001 * math.log2(0.001))
        assert skew_score(table, "v") == pytest.approx(1 - h, abs=1e-9)
        assert skew_score(table, "v") == pytest.approx(0.9886, abs=1e-4)

    def test_single_value_is_zero(self):
        table = make_table({"v": ["only"] * 5})
        assert skew_score(table, "v") == 0.0

    def test_invariant_under_relabeling(self):
        values = ["a", "a", "a", "b", "c", "c"]
        relabeled = {"a": "z9", "b": "q1", "c": "m5"}
        t1 = make_table({"v": values})
        t2 = make_table({"v": [relabeled[v] for v in values]})
        assert skew_score(t1, "v") == pytest.approx(skew_score(t2, "v"), abs=1e-12)


class TestEntryPoints:
    def test_seven_rows_one_female(self, phpp_table):
        findings = vulnerable_entry_points(phpp_table, ["age", "sex"], 1)
        assert [f.key for f in findings] == [("18", "F")]
        assert findings[0].class_size == 1

    def test_threshold_zero_is_empty(self, phpp_table):
        assert vulnerable_entry_points(phpp_table, ["age", "sex"], 0) == []

    def test_matches_oracle(self):
        rng = random.Random(47)
        table = random_table(rng, max_rows=150, max_attrs=3)
        keys = list(table.attribute_names)
        findings = vulnerable_entry_points(table, keys, 5)
        expected = oracles.small_classes(
            table.rows, [table.column_index(k) for k in keys], 5
        )
        got = {(f.key, f.class_size, f.row_indices) for f in findings}
        assert got == set(expected)
        sizes = [f.class_size for f in findings]
        assert sizes == sorted(sizes)

    def test_subsets_scans_every_nonempty_subset(self):
        table = make_table(
            {"age": ["18", "18", "30"], "sex": ["F", "M", "F"]}
        )
        findings = vulnerable_entry_points(table, ["age", "sex"], 1, subsets=True)
        key_attr_sets = {f.key_attrs for f in findings}
        assert key_attr_sets == {("age",), ("sex",), ("age", "sex")}


class TestRiskSummary:
    def test_k_and_singletons_agree(self, wpc_table):
        summary = risk_summary(wpc_table, ["age", "race", "sex"])
        assert summary.k == 1
        assert summary.singleton_classes >= 1

    def test_k_gt_one_means_no_singletons(self):
        table = make_table({"age": ["1", "1", "2", "2"]})
        summary = risk_summary(table, ["age"])
        assert summary.k == 2
        assert summary.singleton_classes == 0

    def test_sensitive_maps(self):
        table = make_table(
            {"age": ["1", "1", "2", "2"], "charge": ["a", "b", "a", "a"]}
        )
        summary = risk_summary(table, ["age"], ["charge"])
        assert summary.l_per_sensitive == {"charge": 1}
        assert 0.0 <= summary.t_per_sensitive["charge"] <= 1.0
