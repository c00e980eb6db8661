"""Portal discovery, metadata harvesting, and record retrieval.

Two source drivers share one protocol: `FixtureSource` reads a committed
directory tree (`portals/<domain>/catalog.json` plus
`portals/<domain>/data/<dataset_id>.csv`) and is bit-reproducible;
`SocrataDiscoverySource` speaks the public discovery/row API of
Socrata-backed portals with pagination and retry. Tests and the bundled
corpus use the fixture driver exclusively; the live driver is an
operational feature.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import re
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from itertools import islice
from pathlib import Path
from typing import Callable, Iterable, Mapping, Protocol

from .errors import (
    MalformedCatalog,
    NetworkFailure,
    NotTabular,
    RowSchemaMismatch,
    UnknownAttribute,
    UnknownPortal,
)
from .qi import AttributeDescriptor, QuasiIdentifierDictionary, ValueKind, normalize_attribute

DEFAULT_ROW_CAP = 50_000
PAGE_SIZE = 1000
RETRY_ATTEMPTS = 3
RETRY_BASE_DELAY = 0.5


class ResourceKind(str, Enum):
    DATASET = "dataset"
    MAP = "map"
    DATA_DICTIONARY = "data-dictionary"
    OTHER = "other"


_KIND_ALIASES = {
    "dataset": ResourceKind.DATASET,
    "map": ResourceKind.MAP,
    "data_dictionary": ResourceKind.DATA_DICTIONARY,
    "data-dictionary": ResourceKind.DATA_DICTIONARY,
    "datadictionary": ResourceKind.DATA_DICTIONARY,
    "dictionary": ResourceKind.DATA_DICTIONARY,
}

_VALUE_KIND_ALIASES = {
    "number": ValueKind.NUMERIC,
    "numeric": ValueKind.NUMERIC,
    "calendar_date": ValueKind.DATE,
    "date": ValueKind.DATE,
    "freetext": ValueKind.FREE_TEXT,
    "free-text": ValueKind.FREE_TEXT,
    "text": ValueKind.CATEGORICAL,
    "categorical": ValueKind.CATEGORICAL,
}


def resource_kind_from(asset_type: str) -> ResourceKind:
    return _KIND_ALIASES.get(str(asset_type).strip().lower(), ResourceKind.OTHER)


def value_kind_from(column_type: str | None) -> ValueKind:
    if column_type is None:
        return ValueKind.CATEGORICAL
    return _VALUE_KIND_ALIASES.get(str(column_type).strip().lower(), ValueKind.CATEGORICAL)


@dataclass(frozen=True)
class PortalDescriptor:
    domain: str
    display_name: str
    resource_count: int

    def __post_init__(self) -> None:
        if not self.domain:
            raise ValueError("portal domain must be nonempty")
        if self.resource_count < 0:
            raise ValueError("resource_count must be >= 0")


@dataclass(frozen=True)
class DatasetMetadata:
    portal: str
    dataset_id: str
    title: str
    description: str
    resource_kind: ResourceKind
    attributes: tuple[AttributeDescriptor, ...]
    row_count: int | None
    fetched_at: str  # ISO-8601 UTC timestamp

    @property
    def ref(self) -> str:
        """Globally unique composite id, `<portal>:<dataset_id>`."""
        return f"{self.portal}:{self.dataset_id}"

    @property
    def attribute_names(self) -> frozenset[str]:
        return frozenset(a.normalized_name for a in self.attributes)

    def to_doc(self) -> dict:
        return {
            "portal": self.portal,
            "dataset_id": self.dataset_id,
            "title": self.title,
            "description": self.description,
            "resource_kind": self.resource_kind.value,
            "attributes": [a.to_doc() for a in self.attributes],
            "row_count": self.row_count,
            "fetched_at": self.fetched_at,
        }

    @classmethod
    def from_doc(cls, doc: Mapping) -> "DatasetMetadata":
        return cls(
            portal=doc["portal"],
            dataset_id=doc["dataset_id"],
            title=doc["title"],
            description=doc.get("description", ""),
            resource_kind=ResourceKind(doc["resource_kind"]),
            attributes=tuple(AttributeDescriptor.from_doc(a) for a in doc["attributes"]),
            row_count=doc.get("row_count"),
            fetched_at=doc["fetched_at"],
        )


@dataclass(frozen=True)
class RecordTable:
    """Rectangular table of text cells; the substrate for metrics and joins."""

    attributes: tuple[AttributeDescriptor, ...]
    rows: tuple[tuple[str, ...], ...]
    dropped_rows: int = 0

    def __post_init__(self) -> None:
        width = len(self.attributes)
        names = [a.normalized_name for a in self.attributes]
        if len(set(names)) != width:
            raise ValueError("attribute normalized names must be unique")
        for row in self.rows:
            if len(row) != width:
                raise ValueError("table must be rectangular")

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(a.normalized_name for a in self.attributes)

    def column_index(self, normalized_name: str) -> int:
        try:
            return self.attribute_names.index(normalized_name)
        except ValueError:
            raise UnknownAttribute(normalized_name) from None

    def column(self, normalized_name: str) -> tuple[str, ...]:
        idx = self.column_index(normalized_name)
        return tuple(row[idx] for row in self.rows)

    def descriptor(self, normalized_name: str) -> AttributeDescriptor:
        return self.attributes[self.column_index(normalized_name)]

    def __len__(self) -> int:
        return len(self.rows)


class CatalogSource(Protocol):
    def list_portals(self) -> list[PortalDescriptor]: ...

    def list_items(self, domain: str) -> list[dict]: ...

    def iter_rows(self, domain: str, dataset_id: str) -> tuple[list[str], Iterable[list[str]]]: ...


class FixtureSource:
    """Offline corpus rooted at a directory of per-portal catalog documents."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def _portal_dirs(self) -> list[Path]:
        base = self.root / "portals"
        if not base.is_dir():
            return []
        return sorted(p for p in base.iterdir() if p.is_dir())

    def _catalog_doc(self, portal_dir: Path) -> dict:
        path = portal_dir / "catalog.json"
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise UnknownPortal(f"no catalog for {portal_dir.name}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise MalformedCatalog(f"{path}: {exc}") from exc
        if not isinstance(doc, dict) or "portal" not in doc or "items" not in doc:
            raise MalformedCatalog(f"{path}: missing portal/items sections")
        return doc

    def list_portals(self) -> list[PortalDescriptor]:
        portals = []
        for portal_dir in self._portal_dirs():
            doc = self._catalog_doc(portal_dir)["portal"]
            try:
                portals.append(
                    PortalDescriptor(
                        domain=doc["domain"],
                        display_name=doc.get("display_name", doc["domain"]),
                        resource_count=int(doc["resource_count"]),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise MalformedCatalog(f"{portal_dir}: bad portal document: {exc}") from exc
        return portals

    def list_items(self, domain: str) -> list[dict]:
        portal_dir = self.root / "portals" / domain
        if not portal_dir.is_dir():
            raise UnknownPortal(domain)
        doc = self._catalog_doc(portal_dir)
        items = doc["items"]
        if not isinstance(items, list):
            raise MalformedCatalog(f"{portal_dir}: items must be a list")
        return items

    def iter_rows(self, domain: str, dataset_id: str) -> tuple[list[str], Iterable[list[str]]]:
        path = self.root / "portals" / domain / "data" / f"{dataset_id}.csv"
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise NetworkFailure(f"fixture rows missing for {domain}:{dataset_id}") from exc
        reader = csv.reader(io.StringIO(text))
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedCatalog(f"{path}: empty csv") from None
        return header, reader


class SocrataDiscoverySource:
    """Live driver for the Socrata discovery API and per-dataset row endpoints.

    `http_get` is injectable for tests; the default uses `requests` with
    exponential-backoff retry (3 attempts) and a 1000-item page size.
    """

    def __init__(self, base_url: str, http_get: Callable[..., dict] | None = None):
        self.base_url = base_url.rstrip("/")
        self._http_get = http_get or self._requests_get

    @staticmethod
    def _requests_get(url: str, params: Mapping | None = None, as_text: bool = False):
        import requests

        last_exc: Exception | None = None
        for attempt in range(RETRY_ATTEMPTS):
            try:
                resp = requests.get(url, params=params, timeout=30)
                resp.raise_for_status()
                return resp.text if as_text else resp.json()
            except Exception as exc:  # noqa: BLE001 - any transport failure retries
                last_exc = exc
                time.sleep(RETRY_BASE_DELAY * (2**attempt))
        raise NetworkFailure(f"GET {url} failed after {RETRY_ATTEMPTS} attempts: {last_exc}")

    def _paged(self, url: str, params: dict, results_key: str) -> list[dict]:
        out: list[dict] = []
        offset = 0
        while True:
            page = self._http_get(url, params={**params, "offset": offset, "limit": PAGE_SIZE})
            if not isinstance(page, dict) or results_key not in page:
                raise MalformedCatalog(f"{url}: missing {results_key!r} in payload")
            batch = page[results_key]
            out.extend(batch)
            if len(batch) < PAGE_SIZE:
                return out
            offset += PAGE_SIZE

    def list_portals(self) -> list[PortalDescriptor]:
        rows = self._paged(f"{self.base_url}/catalog/v1/domains", {}, "results")
        portals = []
        for row in rows:
            try:
                portals.append(
                    PortalDescriptor(
                        domain=row["domain"],
                        display_name=row.get("display_name", row["domain"]),
                        resource_count=int(row["count"]),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise MalformedCatalog(f"bad domain document: {exc}") from exc
        return portals

    def list_items(self, domain: str) -> list[dict]:
        rows = self._paged(
            f"{self.base_url}/catalog/v1", {"search_context": domain}, "results"
        )
        items = []
        for row in rows:
            res = row.get("resource", row)
            try:
                items.append(
                    {
                        "dataset_id": res["id"],
                        "title": res.get("name", res["id"]),
                        "description": res.get("description", ""),
                        "asset_type": res.get("type", "other"),
                        "columns": res.get("columns_name", []),
                        "column_types": res.get("columns_datatype"),
                        "row_count": res.get("row_count"),
                        "updated_at": res.get("updatedAt"),
                    }
                )
            except KeyError as exc:
                raise MalformedCatalog(f"bad catalog item for {domain}: {exc}") from exc
        return items

    def iter_rows(self, domain: str, dataset_id: str) -> tuple[list[str], Iterable[list[str]]]:
        text = self._http_get(
            f"https://{domain}/resource/{dataset_id}.csv",
            params={"$limit": DEFAULT_ROW_CAP},
            as_text=True,
        )
        reader = csv.reader(io.StringIO(text))
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedCatalog(f"{domain}:{dataset_id}: empty csv") from None
        return header, reader


def bundled_corpus_path() -> Path:
    """Directory of the fixture corpus shipped inside the package."""
    from importlib import resources

    return Path(str(resources.files("riskcal").joinpath("fixtures")))


def open_source(source: str | Path | CatalogSource) -> CatalogSource:
    """Resolve a CLI-style source argument: URL for live, directory for fixtures."""
    if isinstance(source, (str, Path)):
        text = str(source)
        if re.match(r"^https?://", text):
            return SocrataDiscoverySource(text)
        return FixtureSource(text)
    return source


def discover_portals(source: str | Path | CatalogSource) -> list[PortalDescriptor]:
    """All portals known to the source; deterministic for fixture directories."""
    return open_source(source).list_portals()


def _item_metadata(
    portal: PortalDescriptor, item: Mapping, dictionary: QuasiIdentifierDictionary
) -> DatasetMetadata:
    try:
        dataset_id = item["dataset_id"]
        title = item.get("title", dataset_id)
        kind = resource_kind_from(item.get("asset_type", "other"))
        columns = item.get("columns") or []
        column_types = item.get("column_types") or [None] * len(columns)
    except (KeyError, TypeError) as exc:
        raise MalformedCatalog(f"bad item in {portal.domain}: {exc}") from exc
    if len(column_types) != len(columns):
        raise MalformedCatalog(f"{portal.domain}:{dataset_id}: column/type length mismatch")
    attrs = []
    seen: set[str] = set()
    for raw, ctype in zip(columns, column_types):
        desc = AttributeDescriptor.from_raw(raw, dictionary, value_kind_from(ctype))
        if desc.normalized_name in seen:
            raise MalformedCatalog(
                f"{portal.domain}:{dataset_id}: duplicate attribute {desc.normalized_name!r}"
            )
        seen.add(desc.normalized_name)
        attrs.append(desc)
    fetched_at = item.get("updated_at") or datetime.now(timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%SZ"
    )
    row_count = item.get("row_count")
    return DatasetMetadata(
        portal=portal.domain,
        dataset_id=dataset_id,
        title=title,
        description=item.get("description", ""),
        resource_kind=kind,
        attributes=tuple(attrs),
        row_count=int(row_count) if row_count is not None else None,
        fetched_at=fetched_at,
    )


def harvest_metadata(
    portal: PortalDescriptor,
    source: str | Path | CatalogSource,
    dictionary: QuasiIdentifierDictionary,
) -> list[DatasetMetadata]:
    """One DatasetMetadata per catalog item of the portal, attributes classified."""
    items = open_source(source).list_items(portal.domain)
    harvested = [_item_metadata(portal, item, dictionary) for item in items]
    seen: set[str] = set()
    for meta in harvested:
        if meta.dataset_id in seen:
            raise MalformedCatalog(f"{portal.domain}: duplicate dataset id {meta.dataset_id!r}")
        seen.add(meta.dataset_id)
    return harvested


def fetch_records(
    meta: DatasetMetadata,
    source: str | Path | CatalogSource,
    limit: int | None = None,
    row_cap: int | None = DEFAULT_ROW_CAP,
    strict: bool = False,
) -> RecordTable:
    """Rows for a dataset resource, verbatim text cells, rectangular.

    Ragged rows are dropped and counted (`dropped_rows`) unless `strict`,
    which raises RowSchemaMismatch instead. `limit` truncates; `row_cap` is
    the safety ceiling applied when `limit` is absent (None disables it).
    """
    if meta.resource_kind is not ResourceKind.DATASET:
        raise NotTabular(f"{meta.ref} is a {meta.resource_kind.value}")
    if limit is not None and limit <= 0:
        raise ValueError("limit must be positive")
    header, reader = open_source(source).iter_rows(meta.portal, meta.dataset_id)
    by_name = {a.normalized_name: a for a in meta.attributes}
    attrs = []
    for raw in header:
        name = normalize_attribute(raw)
        if name not in by_name:
            raise RowSchemaMismatch(f"{meta.ref}: column {raw!r} not in catalog metadata")
        attrs.append(by_name[name])
    if len(attrs) != len(meta.attributes):
        missing = sorted(set(by_name) - {a.normalized_name for a in attrs})
        raise RowSchemaMismatch(f"{meta.ref}: columns missing from data: {missing}")
    effective = limit if limit is not None else row_cap
    width = len(attrs)
    rows: list[tuple[str, ...]] = []
    dropped = 0
    for row in reader:
        if len(row) != width:
            if strict:
                raise RowSchemaMismatch(f"{meta.ref}: row width {len(row)} != {width}")
            dropped += 1
            continue
        rows.append(tuple(row))
        if effective is not None and len(rows) >= effective:
            break
    return RecordTable(attributes=tuple(attrs), rows=tuple(rows), dropped_rows=dropped)


def cache_key(meta: DatasetMetadata) -> str:
    """Deterministic content key from portal, dataset id, and fetch date."""
    day = meta.fetched_at[:10]
    basis = f"{meta.portal}\x1f{meta.dataset_id}\x1f{day}"
    digest = hashlib.sha256(basis.encode("utf-8")).hexdigest()[:16]
    slug = re.sub(r"[^a-z0-9]+", "-", f"{meta.portal}-{meta.dataset_id}".lower()).strip("-")
    return f"{slug}-{digest}"


class CacheStore:
    """One JSON document per cache key under a root directory.

    Writes go through a temp file and an atomic rename, so concurrent
    readers never observe partial entries.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def contains(self, key: str) -> bool:
        return self._path(key).exists()

    def load(self, key: str) -> dict | None:
        path = self._path(key)
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    def store(self, key: str, doc: Mapping) -> None:
        path = self._path(key)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")
        tmp.replace(path)


def fetch_records_cached(
    meta: DatasetMetadata,
    source: str | Path | CatalogSource,
    cache: CacheStore,
    limit: int | None = None,
    row_cap: int | None = DEFAULT_ROW_CAP,
    refresh: bool = False,
) -> RecordTable:
    """fetch_records backed by the cache; stale keys refresh only on request."""
    key = cache_key(meta)
    if not refresh:
        doc = cache.load(key)
        if doc is not None:
            attrs = tuple(AttributeDescriptor.from_doc(a) for a in doc["attributes"])
            rows = tuple(tuple(r) for r in doc["rows"])
            if limit is not None:
                rows = tuple(islice(rows, limit))
            return RecordTable(attributes=attrs, rows=rows, dropped_rows=doc["dropped_rows"])
    table = fetch_records(meta, source, limit=limit, row_cap=row_cap)
    cache.store(
        key,
        {
            "attributes": [a.to_doc() for a in table.attributes],
            "rows": [list(r) for r in table.rows],
            "dropped_rows": table.dropped_rows,
        },
    )
    return table
