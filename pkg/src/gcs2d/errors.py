"""Exception hierarchy shared by all gcs2d modules."""

from __future__ import annotations


class GcsError(Exception):
    """Base class for every error raised by this package."""


# ---------------------------------------------------------------- graph model


class DuplicateIdError(GcsError):
    """An entity id occurs more than once in a graph."""


class UnknownEndpointError(GcsError):
    """A constraint or subgraph selection references a missing entity id."""


class SelfLoopError(GcsError):
    """A constraint joins an entity to itself."""


class KindMismatchError(GcsError):
    """Entity kinds are not admissible for the requested operation."""


class BadValueError(GcsError):
    """A numeric parameter is outside its legal range."""


class TooSmallError(GcsError):
    """Structural analysis needs at least two entities."""


class ParseError(GcsError):
    """Input text is not a well-formed graph or solution document."""


# ------------------------------------------------------------------ henneberg


class MissingEdgeError(GcsError):
    """A vertex-split operation names an edge that is not present."""


class UnknownFixtureError(GcsError):
    """No fixture with the requested name exists."""


# ------------------------------------------------------------- decomposition


class NotReducibleError(GcsError):
    """Plan extraction requires a fully reducible, well-constrained graph."""


class UnsupportedStepError(GcsError):
    """A merge or placement falls outside the supported geometric cases."""


# ------------------------------------------------------------------ geometry


class ParallelError(GcsError):
    """Two lines are parallel (or coincident) where an intersection is needed."""


class EmptyIntersectionError(GcsError):
    """The requested loci do not intersect."""


class CoincidentError(GcsError):
    """Two circles coincide, so their intersection is not finite."""


class CoincidentPointsError(GcsError):
    """Two points expected to be distinct coincide."""


class LengthMismatchError(GcsError):
    """A rigid alignment was asked to map segments of different lengths."""


# ----------------------------------------------------------- plan execution


class BadBranchError(GcsError):
    """A branch selector entry does not name an available root."""


class UnderDeterminedError(GcsError):
    """A construction step leaves its target with free degrees of freedom."""

    def __init__(self, entity: str, message: str | None = None):
        super().__init__(message or f"entity {entity!r} is under-determined")
        self.entity = entity


class MissingPlacementError(GcsError):
    """A solution does not place every entity the operation needs."""


class VerificationError(GcsError):
    """A computed placement violates a constraint beyond tolerance."""
