"""Grouping datasets into joinable clusters by attribute-space similarity.

Average-linkage agglomerative clustering over the distance 1 - Jaccard of
normalized attribute sets. Distances are kept as exact fractions so merge
ties resolve identically on every run; ties break on the lexicographically
smallest pair of cluster ids (a cluster's id is its smallest member id).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .catalog import DatasetMetadata
from .errors import EmptyCollection

DEFAULT_DISTANCE_CUT = 0.6
EXTENDED_SIGNATURE_MIN_FRACTION = 0.75


@dataclass(frozen=True)
class DatasetCluster:
    members: tuple[str, ...]
    core_signature: frozenset[str]
    extended_signature: Mapping[str, float]
    rank_score: tuple[int, int] | None = None

    @property
    def cluster_id(self) -> str:
        return self.members[0]

    def to_doc(self) -> dict:
        return {
            "members": list(self.members),
            "core_signature": sorted(self.core_signature),
            "extended_signature": {
                a: self.extended_signature[a] for a in sorted(self.extended_signature)
            },
            "rank_score": (
                {"qi_overlap": self.rank_score[0], "size": self.rank_score[1]}
                if self.rank_score is not None
                else None
            ),
        }


def attribute_jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    """|a ∩ b| / |a ∪ b|; two empty sets count as identical (1.0)."""
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        return 1.0
    return len(sa & sb) / len(union)


def _jaccard_distance(a: frozenset[str], b: frozenset[str]) -> Fraction:
    union = a | b
    if not union:
        return Fraction(0)
    return 1 - Fraction(len(a & b), len(union))


def _agglomerate(
    items: Sequence[tuple[str, frozenset[str]]], distance_cut: float
) -> list[list[str]]:
    """Merge loop over (id, attribute set) pairs; returns member-id groups."""
    clusters: dict[str, list[str]] = {item_id: [item_id] for item_id, _ in items}
    attr_sets = {item_id: attrs for item_id, attrs in items}
    base = {
        (a, b): _jaccard_distance(attr_sets[a], attr_sets[b])
        for i, (a, _) in enumerate(items)
        for (b, _) in items[i + 1 :]
    }

    def pair_key(x: str, y: str) -> tuple[str, str]:
        return (x, y) if x < y else (y, x)

    dist = dict(base)
    while len(clusters) > 1:
        best = min(dist.items(), key=lambda kv: (kv[1], kv[0]))
        (ca, cb), d = best
        if d > distance_cut:
            break
        merged_id = min(ca, cb)
        other_id = max(ca, cb)
        merged_members = sorted(clusters[ca] + clusters[cb])
        del clusters[other_id]
        clusters[merged_id] = merged_members
        dist = {k: v for k, v in dist.items() if ca not in k and cb not in k}
        for cid, members in clusters.items():
            if cid == merged_id:
                continue
            cross = [
                base[pair_key(m, n)] for m in merged_members for n in members
            ]
            dist[pair_key(merged_id, cid)] = sum(cross) / len(cross)
    return sorted(clusters.values())


def _build_cluster(members: list[str], attr_sets: Mapping[str, frozenset[str]]) -> DatasetCluster:
    sets = [attr_sets[m] for m in members]
    core = frozenset.intersection(*sets)
    counts: dict[str, int] = {}
    for s in sets:
        for attr in s:
            counts[attr] = counts.get(attr, 0) + 1
    extended = {
        attr: n / len(members)
        for attr, n in counts.items()
        if n / len(members) >= EXTENDED_SIGNATURE_MIN_FRACTION
    }
    return DatasetCluster(
        members=tuple(members), core_signature=core, extended_signature=extended
    )


def cluster_datasets(
    collection: Sequence[DatasetMetadata], distance_cut: float = DEFAULT_DISTANCE_CUT
) -> list[DatasetCluster]:
    """Partition the collection into clusters at the given distance cut."""
    if not collection:
        raise EmptyCollection("nothing to cluster")
    if not (0 < distance_cut <= 1):
        raise ValueError("distance_cut must be in (0, 1]")
    items = sorted((meta.ref, meta.attribute_names) for meta in collection)
    attr_sets = dict(items)
    groups = _agglomerate(items, distance_cut)
    return [_build_cluster(members, attr_sets) for members in groups]


def rank_clusters(
    clusters: Sequence[DatasetCluster], selected_qis: Sequence[str]
) -> list[DatasetCluster]:
    """Order clusters by QI presence in the core signature, then size, then id.

    Returns the same clusters with rank_score filled in; a permutation of the
    input.
    """
    selected = set(selected_qis)
    scored = [
        replace(c, rank_score=(len(c.core_signature & selected), len(c.members)))
        for c in clusters
    ]
    scored.sort(key=lambda c: (-c.rank_score[0], -c.rank_score[1], c.cluster_id))
    return scored
