"""riskcal: disclosure-risk calibration workbench for open-data catalogs."""

from .catalog import (
    DatasetMetadata,
    PortalDescriptor,
    RecordTable,
    ResourceKind,
    cache_key,
    discover_portals,
    fetch_records,
    harvest_metadata,
)
from .clustering import DatasetCluster, attribute_jaccard, cluster_datasets, rank_clusters
from .curation import (
    CollectionManifest,
    CurationLabel,
    Granularity,
    Relevance,
    build_collection,
    build_manifest,
    filter_by_qi,
    filter_tabular,
    funnel_report,
    label_dataset,
)
from .joins import (
    DisclosureCandidate,
    JoinResult,
    JoinSpec,
    JoinabilityScore,
    TransitiveCandidate,
    auto_join_key,
    containment,
    detect_disclosures,
    execute_join,
    joinability_risk,
    pair_count,
    rank_pairs,
    shared_attributes,
    suggest_features,
    transitive_candidates,
)
from .metrics import (
    EquivalenceClassPartition,
    attribute_entropy,
    k_anonymity,
    l_diversity,
    partition,
    risk_summary,
    skew_score,
    t_closeness,
    vulnerable_entry_points,
)
from .qi import (
    AttributeDescriptor,
    QuasiIdentifierDictionary,
    SemanticClass,
    ValueKind,
    load_default_dictionary,
    normalize_attribute,
    profile_coverage,
)
from .workflow import (
    DefenderSession,
    ParallelSetsModel,
    WorkflowContext,
    create_session,
    export_report,
    parallel_sets_model,
    run_step,
    set_quasi_identifiers,
)

__version__ = "0.1.0"
