"""Join-key selection, joinability scoring, equality joins, and disclosure detection.

Joins are exact inner equality joins over trimmed text key tuples. Key
tuples containing an empty cell never match anything and are excluded from
distinct-tuple sets, since empty-to-empty joins manufacture false links.

Joinability risk couples linkability with identifying power:
risk = containment x unique-match fraction, where containment is the overlap
of distinct key-tuple domains relative to the smaller side, and the unique
fraction counts matched tuples that occur exactly once in both tables.

For attributes present in both tables but not in the join key, the joined
schema exposes a single column whose value is the shared cell when the two
sides agree and the transition "left→right" when they differ; a record whose
status flipped between releases therefore surfaces as its own category.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .catalog import DatasetMetadata, RecordTable
from .errors import EmptyResult, InsufficientMembers, NoSharedAttributes
from .metrics import attribute_entropy
from .qi import QuasiIdentifierDictionary, SemanticClass

DEFAULT_MAX_KEY_ATTRS = 4
DEFAULT_JOIN_ROW_CAP = 100_000

_CLASS_RANK = {
    SemanticClass.QUASI_IDENTIFIER: 0,
    SemanticClass.LINKING: 1,
}


@dataclass(frozen=True)
class JoinSpec:
    left_id: str
    right_id: str
    key_attrs: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.key_attrs:
            raise ValueError("key_attrs must be nonempty")
        if len(set(self.key_attrs)) != len(self.key_attrs):
            raise ValueError("key_attrs must not repeat")

    def to_doc(self) -> dict:
        return {"left": self.left_id, "right": self.right_id, "key": list(self.key_attrs)}


@dataclass(frozen=True)
class JoinabilityScore:
    containment: float
    matched_distinct_keys: int
    unique_match_fraction: float
    risk: float

    def to_doc(self) -> dict:
        return {
            "containment": self.containment,
            "matched_distinct_keys": self.matched_distinct_keys,
            "unique_match_fraction": self.unique_match_fraction,
            "risk": self.risk,
        }


@dataclass(frozen=True)
class JoinResult:
    spec: JoinSpec
    left_table: RecordTable
    right_table: RecordTable
    matches: Mapping[tuple[str, ...], tuple[tuple[int, ...], tuple[int, ...]]]
    pair_indices: tuple[tuple[int, int], ...]
    truncated: bool = False

    @property
    def joined_row_count(self) -> int:
        return len(self.pair_indices)

    def full_pair_count(self) -> int:
        """Σ left-multiplicity x right-multiplicity, ignoring the cap."""
        return sum(len(l) * len(r) for l, r in self.matches.values())


@dataclass(frozen=True)
class DisclosureCandidate:
    kind: str  # "identity" | "attribute"
    key: tuple[str, ...]
    left_index: int
    right_index: int
    revealed_attrs: tuple[str, ...] = ()

    def to_doc(self) -> dict:
        return {
            "kind": self.kind,
            "key": list(self.key),
            "left_index": self.left_index,
            "right_index": self.right_index,
            "revealed_attrs": list(self.revealed_attrs),
        }


@dataclass(frozen=True)
class SharedAttributeInfo:
    name: str
    semantic_class: SemanticClass
    entropy_left: float
    entropy_right: float

    @property
    def entropy_min(self) -> float:
        return min(self.entropy_left, self.entropy_right)

    def to_doc(self) -> dict:
        return {
            "name": self.name,
            "semantic_class": self.semantic_class.value,
            "entropy_left": self.entropy_left,
            "entropy_right": self.entropy_right,
            "entropy_min": self.entropy_min,
        }


@dataclass(frozen=True)
class PairRanking:
    left_id: str
    right_id: str
    spec: JoinSpec
    score: JoinabilityScore
    shared: tuple[SharedAttributeInfo, ...]

    def to_doc(self) -> dict:
        return {
            "left": self.left_id,
            "right": self.right_id,
            "key": list(self.spec.key_attrs),
            "score": self.score.to_doc(),
            "shared_attributes": [s.to_doc() for s in self.shared],
        }


@dataclass(frozen=True)
class TransitiveCandidate:
    endpoint_a: str
    endpoint_c: str
    bridge_b: str
    key_ab: tuple[str, ...]
    key_bc: tuple[str, ...]
    score_ab: JoinabilityScore
    score_bc: JoinabilityScore

    def to_doc(self) -> dict:
        return {
            "endpoint_a": self.endpoint_a,
            "endpoint_c": self.endpoint_c,
            "bridge_b": self.bridge_b,
            "key_ab": list(self.key_ab),
            "key_bc": list(self.key_bc),
            "score_ab": self.score_ab.to_doc(),
            "score_bc": self.score_bc.to_doc(),
        }


@dataclass(frozen=True)
class FeatureSuggestion:
    attr: str
    separation_gain: float
    overconstraining: bool = False

    def to_doc(self) -> dict:
        return {
            "attr": self.attr,
            "separation_gain": self.separation_gain,
            "overconstraining": self.overconstraining,
        }


def shared_attributes(a_meta: DatasetMetadata, b_meta: DatasetMetadata) -> set[str]:
    """Intersection of the two datasets' normalized attribute names."""
    return set(a_meta.attribute_names) & set(b_meta.attribute_names)


def pair_count(members: int) -> int:
    """Number of unordered pairs among `members` datasets."""
    return members * (members - 1) // 2


def auto_join_key(
    a_table: RecordTable,
    b_table: RecordTable,
    dictionary: QuasiIdentifierDictionary,
    max_attrs: int = DEFAULT_MAX_KEY_ATTRS,
) -> list[str]:
    """Initial join key over shared attributes.

    Quasi-identifiers come first, then linking attributes, then the rest;
    within a class, higher minimum per-dataset entropy wins, with name as
    the final tie-break. Up to `max_attrs` attributes are taken.
    """
    shared = sorted(set(a_table.attribute_names) & set(b_table.attribute_names))
    if not shared:
        raise NoSharedAttributes(f"{a_table.attribute_names} / {b_table.attribute_names}")
    ranked = sorted(
        shared,
        key=lambda attr: (
            _CLASS_RANK.get(dictionary.classify(attr), 2),
            -min(attribute_entropy(a_table, attr), attribute_entropy(b_table, attr)),
            attr,
        ),
    )
    return ranked[:max_attrs]


def _key_tuples(table: RecordTable, key: Sequence[str]) -> dict[tuple[str, ...], list[int]]:
    """Row indices grouped by trimmed key tuple; tuples with empty cells dropped."""
    columns = [tuple(c.strip() for c in table.column(a)) for a in key]
    groups: dict[tuple[str, ...], list[int]] = {}
    for i in range(len(table)):
        tup = tuple(col[i] for col in columns)
        if any(cell == "" for cell in tup):
            continue
        groups.setdefault(tup, []).append(i)
    return groups


def containment(a_table: RecordTable, b_table: RecordTable, key: Sequence[str]) -> float:
    """Distinct-key overlap relative to the smaller side; 0 when either side is empty."""
    a_keys = set(_key_tuples(a_table, key))
    b_keys = set(_key_tuples(b_table, key))
    if not a_keys or not b_keys:
        return 0.0
    return len(a_keys & b_keys) / min(len(a_keys), len(b_keys))


def joinability_risk(
    a_table: RecordTable, b_table: RecordTable, key: Sequence[str]
) -> JoinabilityScore:
    a_groups = _key_tuples(a_table, key)
    b_groups = _key_tuples(b_table, key)
    matched = set(a_groups) & set(b_groups)
    if a_groups and b_groups:
        cont = len(matched) / min(len(a_groups), len(b_groups))
    else:
        cont = 0.0
    if matched:
        unique = sum(1 for t in matched if len(a_groups[t]) == 1 and len(b_groups[t]) == 1)
        umf = unique / len(matched)
    else:
        umf = 0.0
    return JoinabilityScore(
        containment=cont,
        matched_distinct_keys=len(matched),
        unique_match_fraction=umf,
        risk=cont * umf,
    )


def execute_join(
    a_table: RecordTable,
    b_table: RecordTable,
    spec: JoinSpec,
    row_cap: int | None = DEFAULT_JOIN_ROW_CAP,
) -> JoinResult:
    """Inner equality join on exact text-equal key tuples.

    Match multiplicities are always complete; the materialized row pairs are
    truncated at `row_cap` with the `truncated` flag set.
    """
    key = spec.key_attrs
    a_groups = _key_tuples(a_table, key)
    b_groups = _key_tuples(b_table, key)
    matches = {
        t: (tuple(a_groups[t]), tuple(b_groups[t]))
        for t in sorted(set(a_groups) & set(b_groups))
    }
    pairs: list[tuple[int, int]] = []
    truncated = False
    for t, (left_ix, right_ix) in matches.items():
        for li in left_ix:
            for ri in right_ix:
                if row_cap is not None and len(pairs) >= row_cap:
                    truncated = True
                    break
                pairs.append((li, ri))
            if truncated:
                break
        if truncated:
            break
    return JoinResult(
        spec=spec,
        left_table=a_table,
        right_table=b_table,
        matches=matches,
        pair_indices=tuple(pairs),
        truncated=truncated,
    )


def joined_schema(result: JoinResult) -> list[tuple[str, str]]:
    """Column plan for the joined view: (attr, origin) with origin in
    key/left/right/both. Shared non-key attrs appear once with origin `both`."""
    key = result.spec.key_attrs
    left_names = result.left_table.attribute_names
    right_names = set(result.right_table.attribute_names)
    plan = [(a, "key") for a in key]
    for a in left_names:
        if a in key:
            continue
        plan.append((a, "both" if a in right_names else "left"))
    for a in result.right_table.attribute_names:
        if a in key or a in left_names:
            continue
        plan.append((a, "right"))
    return plan


def joined_value(result: JoinResult, pair: tuple[int, int], attr: str, origin: str) -> str:
    li, ri = pair
    if origin in ("key", "left"):
        return result.left_table.rows[li][result.left_table.column_index(attr)].strip()
    if origin == "right":
        return result.right_table.rows[ri][result.right_table.column_index(attr)].strip()
    left = result.left_table.rows[li][result.left_table.column_index(attr)].strip()
    right = result.right_table.rows[ri][result.right_table.column_index(attr)].strip()
    return left if left == right else f"{left}→{right}"


def _revealing_attrs(
    anchor: DatasetMetadata, other: DatasetMetadata, dictionary: QuasiIdentifierDictionary
) -> tuple[str, ...]:
    anchor_names = set(anchor.attribute_names)
    return tuple(
        sorted(
            name
            for name in other.attribute_names
            if name not in anchor_names
            and dictionary.classify(name) in (SemanticClass.SENSITIVE, SemanticClass.LINKING)
        )
    )


def detect_disclosures(
    result: JoinResult,
    a_meta: DatasetMetadata,
    b_meta: DatasetMetadata,
    dictionary: QuasiIdentifierDictionary,
) -> list[DisclosureCandidate]:
    """Identity and attribute disclosure candidates from a join result.

    Identity: the key tuple occurs exactly once in both tables. Attribute:
    at least one side is unique and the other side's schema contributes
    sensitive or linking attributes the unique side lacks; one candidate per
    matched row pair, with the union of revelations across directions.
    """
    reveal_from_right = _revealing_attrs(a_meta, b_meta, dictionary)
    reveal_from_left = _revealing_attrs(b_meta, a_meta, dictionary)
    identity: list[DisclosureCandidate] = []
    attribute: list[DisclosureCandidate] = []
    for key in sorted(result.matches):
        left_ix, right_ix = result.matches[key]
        if len(left_ix) == 1 and len(right_ix) == 1:
            identity.append(
                DisclosureCandidate(
                    kind="identity", key=key, left_index=left_ix[0], right_index=right_ix[0]
                )
            )
        revealed: set[str] = set()
        if len(left_ix) == 1:
            revealed.update(reveal_from_right)
        if len(right_ix) == 1:
            revealed.update(reveal_from_left)
        if revealed:
            for li in left_ix:
                for ri in right_ix:
                    attribute.append(
                        DisclosureCandidate(
                            kind="attribute",
                            key=key,
                            left_index=li,
                            right_index=ri,
                            revealed_attrs=tuple(sorted(revealed)),
                        )
                    )
    return identity + attribute


def rank_pairs(
    members: Sequence[str],
    tables: Mapping[str, RecordTable],
    dictionary: QuasiIdentifierDictionary,
    max_key_attrs: int = DEFAULT_MAX_KEY_ATTRS,
) -> list[PairRanking]:
    """Score every unordered pair of cluster members, highest risk first."""
    ids = sorted(members)
    missing = [m for m in ids if m not in tables]
    if len(ids) - len(missing) < 2:
        raise InsufficientMembers(f"need >= 2 members with tables, missing: {missing}")
    rankings = []
    for left, right in combinations(ids, 2):
        if left in missing or right in missing:
            continue
        lt, rt = tables[left], tables[right]
        shared = sorted(set(lt.attribute_names) & set(rt.attribute_names))
        if not shared:
            continue
        key = auto_join_key(lt, rt, dictionary, max_attrs=max_key_attrs)
        spec = JoinSpec(left_id=left, right_id=right, key_attrs=tuple(key))
        score = joinability_risk(lt, rt, key)
        info = tuple(
            SharedAttributeInfo(
                name=a,
                semantic_class=dictionary.classify(a),
                entropy_left=attribute_entropy(lt, a),
                entropy_right=attribute_entropy(rt, a),
            )
            for a in shared
        )
        rankings.append(
            PairRanking(left_id=left, right_id=right, spec=spec, score=score, shared=info)
        )
    rankings.sort(key=lambda p: (-p.score.risk, p.left_id, p.right_id))
    return rankings


def _shared_qi(
    a_meta: DatasetMetadata, b_meta: DatasetMetadata, dictionary: QuasiIdentifierDictionary
) -> set[str]:
    return {
        name
        for name in shared_attributes(a_meta, b_meta)
        if dictionary.classify(name) is SemanticClass.QUASI_IDENTIFIER
    }


def transitive_candidates(
    collection: Sequence[DatasetMetadata],
    tables: Mapping[str, RecordTable],
    dictionary: QuasiIdentifierDictionary,
    min_risk: float = 0.2,
) -> list[TransitiveCandidate]:
    """Bridge candidates linking dataset pairs that share no quasi-identifiers.

    For every pair (a, c) with an empty shared-QI set, every third dataset b
    whose hops (a,b) and (b,c) both share QIs and clear `min_risk` on their
    auto-selected keys yields one candidate. Single-bridge paths only.
    """
    if len(collection) < 3:
        return []
    metas = {m.ref: m for m in collection}
    ids = sorted(metas)
    hop_cache: dict[tuple[str, str], tuple[tuple[str, ...], JoinabilityScore] | None] = {}

    def hop(x: str, y: str) -> tuple[tuple[str, ...], JoinabilityScore] | None:
        pk = (x, y) if x < y else (y, x)
        if pk not in hop_cache:
            result = None
            if (
                pk[0] in tables
                and pk[1] in tables
                and _shared_qi(metas[pk[0]], metas[pk[1]], dictionary)
            ):
                key = auto_join_key(tables[pk[0]], tables[pk[1]], dictionary)
                score = joinability_risk(tables[pk[0]], tables[pk[1]], key)
                if score.risk >= min_risk:
                    result = (tuple(key), score)
            hop_cache[pk] = result
        return hop_cache[pk]

    out = []
    for a, c in combinations(ids, 2):
        if _shared_qi(metas[a], metas[c], dictionary):
            continue
        for b in ids:
            if b in (a, c):
                continue
            hop_ab = hop(a, b)
            hop_bc = hop(b, c)
            if hop_ab is None or hop_bc is None:
                continue
            out.append(
                TransitiveCandidate(
                    endpoint_a=a,
                    endpoint_c=c,
                    bridge_b=b,
                    key_ab=hop_ab[0],
                    key_bc=hop_bc[0],
                    score_ab=hop_ab[1],
                    score_bc=hop_bc[1],
                )
            )
    return out


def suggest_features(
    result: JoinResult,
    unused_shared_attrs: Iterable[str],
    a_table: RecordTable,
    b_table: RecordTable,
) -> list[FeatureSuggestion]:
    """Rank candidate key extensions by how much they sharpen the join.

    separation_gain = (mean match multiplicity before - after) / before,
    clipped to [0, 1], where mean multiplicity is materialized row pairs per
    matched key. Attributes that empty the join rank last, tagged
    overconstraining.
    """
    if not result.matches:
        raise EmptyResult("cannot suggest features for an empty join result")
    before = result.full_pair_count() / len(result.matches)
    sharp: list[FeatureSuggestion] = []
    dead: list[FeatureSuggestion] = []
    for attr in unused_shared_attrs:
        if attr in result.spec.key_attrs:
            raise ValueError(f"{attr} is already part of the join key")
        extended = JoinSpec(
            left_id=result.spec.left_id,
            right_id=result.spec.right_id,
            key_attrs=result.spec.key_attrs + (attr,),
        )
        trial = execute_join(a_table, b_table, extended, row_cap=None)
        if not trial.matches:
            dead.append(FeatureSuggestion(attr=attr, separation_gain=0.0, overconstraining=True))
            continue
        after = trial.full_pair_count() / len(trial.matches)
        gain = max(0.0, min(1.0, (before - after) / before)) if before > 0 else 0.0
        sharp.append(FeatureSuggestion(attr=attr, separation_gain=gain))
    sharp.sort(key=lambda s: (-s.separation_gain, s.attr))
    dead.sort(key=lambda s: s.attr)
    return sharp + dead
