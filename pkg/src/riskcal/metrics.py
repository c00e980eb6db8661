"""Per-dataset disclosure-risk measures.

All measures are built on equivalence-class partitions: rows grouped by the
exact (trimmed) text tuple of a chosen key. k-anonymity is the minimum class
size, l-diversity the minimum per-class count of distinct sensitive values,
t-closeness the maximum total-variation distance between any class's
sensitive-value distribution and the global one. Empty cells (after trim)
form their own category rather than being dropped, since dropping them would
shrink classes and understate risk.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .catalog import RecordTable
from .errors import EmptyTable


@dataclass(frozen=True)
class EquivalenceClassPartition:
    key_attrs: tuple[str, ...]
    classes: Mapping[tuple[str, ...], tuple[int, ...]]
    total_rows: int


@dataclass(frozen=True)
class RiskSummary:
    k: int
    l_per_sensitive: Mapping[str, int]
    t_per_sensitive: Mapping[str, float]
    singleton_classes: int
    skew: Mapping[str, float]

    def to_doc(self) -> dict:
        return {
            "k": self.k,
            "l_per_sensitive": dict(self.l_per_sensitive),
            "t_per_sensitive": dict(self.t_per_sensitive),
            "singleton_classes": self.singleton_classes,
            "skew": dict(self.skew),
        }


@dataclass(frozen=True)
class EntryPointFinding:
    key_attrs: tuple[str, ...]
    key: tuple[str, ...]
    class_size: int
    row_indices: tuple[int, ...]

    def to_doc(self) -> dict:
        return {
            "key_attrs": list(self.key_attrs),
            "key": list(self.key),
            "class_size": self.class_size,
            "row_indices": list(self.row_indices),
        }


def _trimmed_column(table: RecordTable, attr: str) -> tuple[str, ...]:
    return tuple(cell.strip() for cell in table.column(attr))


def partition(table: RecordTable, key_attrs: Sequence[str]) -> EquivalenceClassPartition:
    """Group row indices by their trimmed key-attribute tuples."""
    if not key_attrs:
        raise ValueError("key_attrs must be nonempty")
    columns = [_trimmed_column(table, a) for a in key_attrs]
    groups: dict[tuple[str, ...], list[int]] = {}
    for i in range(len(table)):
        key = tuple(col[i] for col in columns)
        groups.setdefault(key, []).append(i)
    return EquivalenceClassPartition(
        key_attrs=tuple(key_attrs),
        classes={k: tuple(v) for k, v in groups.items()},
        total_rows=len(table),
    )


def k_anonymity(part: EquivalenceClassPartition) -> int:
    """Minimum equivalence-class size; k=1 means some record is unique."""
    if part.total_rows < 1:
        raise EmptyTable("k-anonymity undefined for an empty table")
    return min(len(ix) for ix in part.classes.values())


def l_diversity(part: EquivalenceClassPartition, table: RecordTable, sensitive_attr: str) -> int:
    """Minimum count of distinct sensitive values within any class."""
    if part.total_rows < 1:
        raise EmptyTable("l-diversity undefined for an empty table")
    column = _trimmed_column(table, sensitive_attr)
    return min(len({column[i] for i in ix}) for ix in part.classes.values())


def t_closeness(part: EquivalenceClassPartition, table: RecordTable, sensitive_attr: str) -> float:
    """Max total-variation distance between class and global sensitive distributions."""
    if part.total_rows < 1:
        raise EmptyTable("t-closeness undefined for an empty table")
    column = _trimmed_column(table, sensitive_attr)
    total = len(column)
    global_counts = Counter(column)
    worst = 0.0
    for ix in part.classes.values():
        class_counts = Counter(column[i] for i in ix)
        size = len(ix)
        tvd = 0.5 * sum(
            abs(class_counts.get(v, 0) / size - global_counts[v] / total)
            for v in global_counts
        )
        worst = max(worst, tvd)
    return worst


def _entropy_of_counts(counts: Counter, total: int) -> float:
    return -sum((c / total) * math.log2(c / total) for c in counts.values())


def attribute_entropy(table: RecordTable, attr: str) -> float:
    """Shannon entropy (bits) of the empirical value distribution of `attr`."""
    if len(table) == 0:
        raise EmptyTable("entropy undefined for an empty table")
    column = _trimmed_column(table, attr)
    return _entropy_of_counts(Counter(column), len(column))


def skew_score(table: RecordTable, attr: str) -> float:
    """1 - H/H_max over the value distribution; 0 for uniform or single-valued."""
    if len(table) == 0:
        raise EmptyTable("skew undefined for an empty table")
    column = _trimmed_column(table, attr)
    counts = Counter(column)
    if len(counts) <= 1:
        return 0.0
    h = _entropy_of_counts(counts, len(column))
    h_max = math.log2(len(counts))
    return max(0.0, min(1.0, 1.0 - h / h_max))


def vulnerable_entry_points(
    table: RecordTable,
    qi_attrs: Sequence[str],
    threshold: int,
    subsets: bool = False,
) -> list[EntryPointFinding]:
    """Equivalence classes of size <= threshold over the key (and subsets).

    With `subsets`, every nonempty subset of `qi_attrs` is scanned as well.
    Findings are sorted by ascending class size, then key attrs, then key.
    """
    if not qi_attrs:
        raise ValueError("qi_attrs must be nonempty")
    for attr in qi_attrs:
        table.column_index(attr)
    if subsets:
        keys = [
            combo
            for size in range(1, len(qi_attrs) + 1)
            for combo in combinations(qi_attrs, size)
        ]
    else:
        keys = [tuple(qi_attrs)]
    findings = []
    for key_attrs in keys:
        part = partition(table, key_attrs)
        for key, ix in part.classes.items():
            if len(ix) <= threshold:
                findings.append(
                    EntryPointFinding(
                        key_attrs=key_attrs, key=key, class_size=len(ix), row_indices=ix
                    )
                )
    findings.sort(key=lambda f: (f.class_size, f.key_attrs, f.key))
    return findings


def risk_summary(
    table: RecordTable, key_attrs: Sequence[str], sensitive_attrs: Sequence[str] = ()
) -> RiskSummary:
    """Bundle of k, per-sensitive l and t, singleton count, and key-attr skew."""
    part = partition(table, key_attrs)
    k = k_anonymity(part)
    singletons = sum(1 for ix in part.classes.values() if len(ix) == 1)
    return RiskSummary(
        k=k,
        l_per_sensitive={a: l_diversity(part, table, a) for a in sensitive_attrs},
        t_per_sensitive={a: t_closeness(part, table, a) for a in sensitive_attrs},
        singleton_classes=singletons,
        skew={a: skew_score(table, a) for a in key_attrs},
    )
