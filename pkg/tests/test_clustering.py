import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from riskcal.clustering import (
    DatasetCluster,
    attribute_jaccard,
    cluster_datasets,
    rank_clusters,
)
from riskcal.errors import EmptyCollection

import oracles
from helpers import make_meta

attr_sets = st.sets(st.sampled_from("abcdefghij"), max_size=8)


class TestJaccard:
    def test_identical(self):
        assert attribute_jaccard({"age", "sex"}, {"age", "sex"}) == 1.0

    def test_disjoint(self):
        assert attribute_jaccard({"age"}, {"zip"}) == 0.0

    def test_half(self):
        assert attribute_jaccard({"age", "sex", "race"}, {"age", "sex", "zip"}) == 0.5

    def test_both_empty(self):
        assert attribute_jaccard(set(), set()) == 1.0

    @given(attr_sets, attr_sets)
    def test_symmetric_and_bounded(self, a, b):
        assert attribute_jaccard(a, b) == attribute_jaccard(b, a)
        assert 0.0 <= attribute_jaccard(a, b) <= 1.0

    @given(attr_sets)
    def test_self_similarity(self, a):
        assert attribute_jaccard(a, a) == 1.0


def metas_from_sets(sets: dict[str, list[str]]):
    return [make_meta("p.example", ds_id, attrs) for ds_id, attrs in sets.items()]


TWELVE = {
    "d01": ["a", "b", "c", "d"],
    "d02": ["a", "b", "c", "e"],
    "d03": ["a", "b", "f", "g"],
    "d04": ["h", "i", "j"],
    "d05": ["h", "i", "k"],
    "d06": ["l"],
    "d07": ["m", "n", "o", "p", "q"],
    "d08": ["m", "n", "o", "p", "r"],
    "d09": ["m", "n", "s", "t"],
    "d10": ["u", "v"],
    "d11": ["u", "w"],
    "d12": ["x", "y", "z"],
}


class TestClusterDatasets:
    def test_identical_attribute_sets_merge(self):
        metas = metas_from_sets({"a1": ["age", "sex"], "a2": ["age", "sex"]})
        clusters = cluster_datasets(metas, 0.6)
        assert len(clusters) == 1
        assert len(clusters[0].members) == 2

    def test_pairwise_disjoint_stay_singletons(self):
        metas = metas_from_sets({"a": ["x1"], "b": ["x2"], "c": ["x3"]})
        clusters = cluster_datasets(metas, 0.6)
        assert all(len(c.members) == 1 for c in clusters)
        assert len(clusters) == 3

    @pytest.mark.parametrize("cut", [0.4, 0.6, 0.8])
    def test_twelve_dataset_fixture_matches_reference(self, cut):
        metas = metas_from_sets(TWELVE)
        got = sorted(sorted(c.members) for c in cluster_datasets(metas, cut))
        items = sorted((m.ref, m.attribute_names) for m in metas)
        expected = oracles.average_linkage(items, cut)
        assert got == expected

    def test_output_is_partition(self):
        rng = random.Random(3)
        pool = [f"t{i}" for i in range(9)]
        sets = {
            f"d{i:02d}": sorted(rng.sample(pool, rng.randint(1, 6))) for i in range(15)
        }
        metas = metas_from_sets(sets)
        clusters = cluster_datasets(metas, 0.6)
        members = sorted(m for c in clusters for m in c.members)
        assert members == sorted(m.ref for m in metas)

    def test_lower_cut_refines(self):
        metas = metas_from_sets(TWELVE)
        coarse = {frozenset(c.members) for c in cluster_datasets(metas, 0.7)}
        fine = {frozenset(c.members) for c in cluster_datasets(metas, 0.3)}
        for group in fine:
            assert any(group <= big for big in coarse)

    def test_core_signature_contained_in_members(self):
        metas = metas_from_sets(TWELVE)
        by_ref = {m.ref: m.attribute_names for m in metas}
        for cluster in cluster_datasets(metas, 0.6):
            for member in cluster.members:
                assert cluster.core_signature <= by_ref[member]

    def test_empty_collection(self):
        with pytest.raises(EmptyCollection):
            cluster_datasets([], 0.6)

    def test_invalid_cut(self):
        metas = metas_from_sets({"a": ["x"]})
        with pytest.raises(ValueError):
            cluster_datasets(metas, 0.0)

    def test_deterministic(self):
        metas = metas_from_sets(TWELVE)
        first = [c.members for c in cluster_datasets(metas, 0.6)]
        second = [c.members for c in cluster_datasets(metas, 0.6)]
        assert first == second


def cluster_of(members, core=frozenset(), extended=None):
    return DatasetCluster(
        members=tuple(sorted(members)),
        core_signature=frozenset(core),
        extended_signature=extended or {},
    )


class TestRankClusters:
    def test_more_qi_hits_first(self):
        a = cluster_of(["x1", "x2"], {"age", "sex", "race", "location"})
        b = cluster_of(["y1", "y2", "y3"], {"age", "sex"})
        ranked = rank_clusters([b, a], ["age", "sex", "race", "location"])
        assert ranked[0].members == a.members
        assert ranked[0].rank_score == (4, 2)

    def test_size_breaks_ties(self):
        small = cluster_of([f"s{i}" for i in range(3)], {"age"})
        big = cluster_of([f"b{i}" for i in range(8)], {"age"})
        ranked = rank_clusters([small, big], ["age"])
        assert len(ranked[0].members) == 8

    def test_empty_selection_orders_by_size_then_id(self):
        a = cluster_of(["a1"], {"age"})
        b = cluster_of(["b1", "b2"], set())
        ranked = rank_clusters([a, b], [])
        assert ranked[0].members == b.members
        assert ranked[1].members == a.members

    def test_permutation(self):
        clusters = [
            cluster_of(["a"], {"age"}),
            cluster_of(["b", "c"], {"sex"}),
            cluster_of(["d"], set()),
        ]
        ranked = rank_clusters(clusters, ["age", "sex"])
        assert sorted(c.members for c in ranked) == sorted(c.members for c in clusters)


class TestCorpusClusters:
    def test_police_cluster_ranks_first(self, collection, dictionary):
        ranked = rank_clusters(
            cluster_datasets(collection), dictionary.profile("police")
        )
        top = ranked[0]
        assert len(top.members) == 8
        assert top.rank_score[0] == 6
        assert all("new-orleans.example" in m for m in top.members)
        assert top.core_signature == {
            "victim age", "victim gender", "victim race",
            "offender age", "offender gender", "location",
        }

    def test_extended_signature_picks_up_charge(self, collection, dictionary):
        ranked = rank_clusters(
            cluster_datasets(collection), dictionary.profile("police")
        )
        extended = ranked[0].extended_signature
        assert "charge" in extended
        assert extended["charge"] == pytest.approx(7 / 8)
