"""Exception hierarchy shared across the package.

The server maps these onto HTTP status codes; the CLI maps anything derived
from DriftwatchError onto exit code 1 with the message on stderr.
"""

from __future__ import annotations


class DriftwatchError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(DriftwatchError):
    """Bad configuration: unknown key, out-of-range value, broken invariant."""


class IngestError(DriftwatchError):
    """Malformed input dataset (ragged CSV row, duplicate header, bad UTF-8)."""


class NotFoundError(DriftwatchError):
    """Entity id, model name, or version that does not exist in the store."""


class ConflictError(DriftwatchError):
    """Registry write conflict, e.g. a parent version that does not exist."""


class SemanticError(DriftwatchError):
    """Structurally valid input that cannot be processed: mixed metric
    shapes, summaries binned against different edges, missing metrics."""
