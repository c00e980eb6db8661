"""Exception types shared across the toolkit.

Each error exposes a stable machine-readable code (its class name) so the
CLI and the HTTP service report identical identifiers.
"""


class RiskcalError(Exception):
    @property
    def code(self) -> str:
        return type(self).__name__


class InvalidDictionary(RiskcalError):
    """Dictionary document violates its structural invariants."""


class ConflictingClassification(RiskcalError):
    """An addition re-classifies an existing term without override."""


class EmptyProfile(RiskcalError):
    """Profile coverage requested against a zero-member profile."""


class NetworkFailure(RiskcalError):
    """A live source could not be reached; retryable."""


class MalformedCatalog(RiskcalError):
    """Catalog payload does not match the expected schema."""


class UnknownPortal(RiskcalError):
    """Portal domain not present in the source."""


class NotTabular(RiskcalError):
    """Row fetch requested for a non-dataset resource."""


class RowSchemaMismatch(RiskcalError):
    """Row or header width disagrees with the catalog schema."""


class UnknownDataset(RiskcalError):
    """Dataset id not present in the manifest or source."""


class IncompleteLabeling(RiskcalError):
    """Strict collection build found undecided entries."""


class UnknownAttribute(RiskcalError):
    """Attribute name not present in the table."""


class EmptyTable(RiskcalError):
    """Metric requested over a table with no rows."""


class EmptyCollection(RiskcalError):
    """Clustering requested over an empty collection."""


class NoSharedAttributes(RiskcalError):
    """Join key selection impossible: the pair shares no attributes."""


class InsufficientMembers(RiskcalError):
    """Pair ranking needs at least two members with tables."""


class UnknownCollection(RiskcalError):
    """Session creation pointed at a missing collection manifest."""


class UnknownProfile(RiskcalError):
    """Named background-knowledge profile does not exist."""


class EmptySelection(RiskcalError):
    """Quasi-identifier selection must be nonempty."""


class StepOutOfOrder(RiskcalError):
    """Workflow step invoked before its prerequisites completed."""


class EmptyResult(RiskcalError):
    """Operation requires a nonempty join result."""


class NothingToReport(RiskcalError):
    """Report export requires a completed disclosures step."""


class RedactionNotAcknowledged(RiskcalError):
    """Unredacted export requires the explicit acknowledgment gate."""
