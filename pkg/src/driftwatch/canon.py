"""Canonical JSON serialization and content-addressed ids.

Every persisted document in the store (baselines, reports, model versions)
is written in one canonical form: object keys sorted lexicographically, no
whitespace, UTF-8 text, floats in shortest round-trip notation. Ids are the
first 16 hex chars of the SHA-256 of that form, so identical content always
hashes to the identical id regardless of key order in the source.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .errors import DriftwatchError

ID_HEX_LEN = 16


def canonical_json(doc: Any) -> str:
    """Serialize ``doc`` to canonical JSON text.

    Raises DriftwatchError for values JSON cannot carry (NaN, infinities,
    non-serializable objects); non-finite numbers must be mapped to sentinels
    by the caller before serialization.
    """
    try:
        return json.dumps(
            doc,
            sort_keys=True,
            separators=(",", ":"),
            ensure_ascii=False,
            allow_nan=False,
        )
    except (TypeError, ValueError) as exc:
        raise DriftwatchError(f"document is not canonically serializable: {exc}") from exc


def canonical_bytes(doc: Any) -> bytes:
    return canonical_json(doc).encode("utf-8")


def canonical_hash(doc: Any) -> str:
    """16-char lowercase hex id of the canonical serialization of ``doc``."""
    return hashlib.sha256(canonical_bytes(doc)).hexdigest()[:ID_HEX_LEN]


def hash_without(doc: dict, *volatile: str) -> str:
    """Content id of ``doc`` with the named top-level keys removed.

    Used to keep ids independent of the id field itself and of timestamps.
    """
    trimmed = {k: v for k, v in doc.items() if k not in volatile}
    return canonical_hash(trimmed)
