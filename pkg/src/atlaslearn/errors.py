"""Exception types shared across the package.

Every error raised by library code derives from :class:`AtlasError` so
callers (and the CLI) can distinguish domain failures from programming
bugs.  Parameter validation raises :class:`ParameterError`; violated
structural assumptions about graphs or atlases raise
:class:`StructuralError`; numerically degenerate geometry raises
:class:`DegeneracyError`.
"""

from __future__ import annotations


class AtlasError(Exception):
    """Base class for all library errors."""


class ParameterError(AtlasError, ValueError):
    """An argument is out of range or inconsistent with the others."""


class StructuralError(AtlasError):
    """A graph, chart, or atlas violates a required structural property."""


class DegeneracyError(AtlasError):
    """Geometry too degenerate to process (e.g. coincident points)."""


class OutOfDomainError(AtlasError):
    """A query point lies outside the domain a chart covers."""


class ParseError(AtlasError, ValueError):
    """Malformed input text (CSV clouds, CLI point literals)."""


class ArtifactError(AtlasError):
    """Base class for artifact (de)serialization failures."""


class ArtifactFormatError(ArtifactError):
    """Artifact text is not structurally valid."""


class ArtifactVersionError(ArtifactError):
    """Artifact was written by an incompatible schema version."""
