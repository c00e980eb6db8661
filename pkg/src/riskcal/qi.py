"""Attribute-name normalization and the quasi-identifier dictionary.

Attribute names arriving from different portals only become comparable after
normalization: lowercase, punctuation and underscores turned into single
spaces, whitespace collapsed and trimmed. The dictionary maps normalized
names to semantic classes, resolves synonyms, and carries named
background-knowledge profiles (ordered quasi-identifier lists).
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import ConflictingClassification, EmptyProfile, InvalidDictionary

ENV_DICT_PATH = "RISKCAL_QI_DICT"

#: Terms every dictionary must carry, all quasi-identifiers.
SEED_TERMS = ("age", "sex", "race", "age group")


class SemanticClass(str, Enum):
    QUASI_IDENTIFIER = "quasi-identifier"
    DIRECT_IDENTIFIER = "direct-identifier"
    SENSITIVE = "sensitive"
    LINKING = "linking"
    OTHER = "other"


class ValueKind(str, Enum):
    CATEGORICAL = "categorical"
    NUMERIC = "numeric"
    DATE = "date"
    FREE_TEXT = "free-text"


_NON_ALNUM = re.compile(r"[^a-z0-9]+")


def normalize_attribute(raw: str) -> str:
    """Canonicalize a raw attribute name for cross-portal comparison.

    Lowercases, replaces every run of punctuation/underscores/whitespace with
    a single space, and trims. Total and idempotent; empty input stays empty.
    """
    return _NON_ALNUM.sub(" ", raw.lower()).strip()


@dataclass(frozen=True)
class AttributeDescriptor:
    raw_name: str
    normalized_name: str
    semantic_class: SemanticClass
    value_kind: ValueKind = ValueKind.CATEGORICAL

    def __post_init__(self) -> None:
        if not self.normalized_name:
            raise ValueError("normalized_name must be nonempty")
        if self.normalized_name != normalize_attribute(self.normalized_name):
            raise ValueError(f"not a normalized name: {self.normalized_name!r}")

    @classmethod
    def from_raw(
        cls,
        raw: str,
        dictionary: "QuasiIdentifierDictionary",
        value_kind: ValueKind = ValueKind.CATEGORICAL,
    ) -> "AttributeDescriptor":
        normalized = normalize_attribute(raw)
        return cls(
            raw_name=raw,
            normalized_name=normalized,
            semantic_class=dictionary.classify(normalized),
            value_kind=value_kind,
        )

    def to_doc(self) -> dict:
        return {
            "raw_name": self.raw_name,
            "normalized_name": self.normalized_name,
            "semantic_class": self.semantic_class.value,
            "value_kind": self.value_kind.value,
        }

    @classmethod
    def from_doc(cls, doc: Mapping) -> "AttributeDescriptor":
        return cls(
            raw_name=doc["raw_name"],
            normalized_name=doc["normalized_name"],
            semantic_class=SemanticClass(doc["semantic_class"]),
            value_kind=ValueKind(doc["value_kind"]),
        )


@dataclass(frozen=True)
class QuasiIdentifierDictionary:
    """Immutable term dictionary with synonym and profile tables.

    Invariants enforced at construction: every synonym target is a term,
    every profile member resolves to a term, and the seed quasi-identifiers
    (age, sex, race, age group) are always present.
    """

    terms: Mapping[str, SemanticClass] = field(default_factory=dict)
    synonyms: Mapping[str, str] = field(default_factory=dict)
    profiles: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for seed in SEED_TERMS:
            if self.terms.get(seed) != SemanticClass.QUASI_IDENTIFIER:
                raise InvalidDictionary(f"missing seed quasi-identifier term: {seed!r}")
        for alias, target in self.synonyms.items():
            if target not in self.terms:
                raise InvalidDictionary(f"synonym {alias!r} points at unknown term {target!r}")
        for name, members in self.profiles.items():
            for member in members:
                if self.canonical(member) not in self.terms:
                    raise InvalidDictionary(f"profile {name!r} member {member!r} not in terms")

    def canonical(self, normalized: str) -> str:
        """Resolve a synonym alias to its canonical term name (single hop)."""
        return self.synonyms.get(normalized, normalized)

    def classify(self, normalized: str) -> SemanticClass:
        """Class of a normalized name; `other` when absent from the dictionary."""
        return self.terms.get(self.canonical(normalized), SemanticClass.OTHER)

    def expand(
        self,
        additions: Iterable[tuple[str, SemanticClass]],
        override: bool = False,
    ) -> "QuasiIdentifierDictionary":
        """Return a new dictionary with `additions` merged in.

        Re-adding a term with its existing class is a no-op. A class change
        raises ConflictingClassification unless `override` is set.
        """
        terms = dict(self.terms)
        for raw, cls in additions:
            name = normalize_attribute(raw)
            if not name:
                raise InvalidDictionary(f"addition normalizes to empty: {raw!r}")
            cls = SemanticClass(cls)
            existing = terms.get(name)
            if existing is not None and existing != cls and not override:
                raise ConflictingClassification(
                    f"{name!r} already classified {existing.value}, refusing {cls.value}"
                )
            terms[name] = cls
        return QuasiIdentifierDictionary(
            terms=terms, synonyms=dict(self.synonyms), profiles=dict(self.profiles)
        )

    def profile(self, name: str) -> tuple[str, ...]:
        return self.profiles[name]

    def quasi_identifier_hits(self, normalized_names: Iterable[str]) -> tuple[str, ...]:
        """Distinct canonical QI terms found among the given names, sorted."""
        hits = {
            self.canonical(n)
            for n in normalized_names
            if self.classify(n) is SemanticClass.QUASI_IDENTIFIER
        }
        return tuple(sorted(hits))

    @classmethod
    def seed(cls) -> "QuasiIdentifierDictionary":
        """Bare dictionary holding only the seed quasi-identifiers."""
        return cls(terms={t: SemanticClass.QUASI_IDENTIFIER for t in SEED_TERMS})

    @classmethod
    def from_doc(cls, doc: Mapping) -> "QuasiIdentifierDictionary":
        try:
            terms = {
                normalize_attribute(k): SemanticClass(v) for k, v in doc.get("terms", {}).items()
            }
            synonyms = {
                normalize_attribute(k): normalize_attribute(v)
                for k, v in doc.get("synonyms", {}).items()
            }
            profiles = {
                k: tuple(normalize_attribute(m) for m in v)
                for k, v in doc.get("profiles", {}).items()
            }
        except (ValueError, AttributeError) as exc:
            raise InvalidDictionary(str(exc)) from exc
        return cls(terms=terms, synonyms=synonyms, profiles=profiles)

    @classmethod
    def load(cls, path: str | Path) -> "QuasiIdentifierDictionary":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidDictionary(f"cannot load dictionary from {path}: {exc}") from exc
        return cls.from_doc(doc)


def load_default_dictionary(path: str | Path | None = None) -> QuasiIdentifierDictionary:
    """Load the dictionary from `path`, $RISKCAL_QI_DICT, or the bundled default."""
    if path is None:
        path = os.environ.get(ENV_DICT_PATH) or None
    if path is not None:
        return QuasiIdentifierDictionary.load(path)
    data = resources.files("riskcal.data").joinpath("qi_dictionary.json").read_text("utf-8")
    return QuasiIdentifierDictionary.from_doc(json.loads(data))


def profile_coverage(attrs: Sequence[AttributeDescriptor], profile: Sequence[str]) -> float:
    """Fraction of profile members present among the attributes' normalized names."""
    if not profile:
        raise EmptyProfile("profile has zero members")
    names = {a.normalized_name for a in attrs}
    members = set(profile)
    return len(members & names) / len(members)
