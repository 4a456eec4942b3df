"""File-backed persistence.

Layout under one root directory:

    config.json                       optional run config
    baselines/<id>.json               dataset summaries (content-addressed)
    baselines/names.json              friendly-name -> baseline id index
    reports/<id>.json                 drift reports (content-addressed)
    registry/<model>/versions/<n>.json  model version records

Every file holds canonical JSON. Writes go through a temp file plus
os.replace so readers never observe a torn document, and version files are
claimed with an exclusive hard link so two writers can never allocate the
same version number even across processes. Content-addressed entities are
idempotent: putting an identical document twice leaves one file.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from pathlib import Path
from typing import Any, Optional

from .canon import canonical_bytes, hash_without
from .errors import DriftwatchError, NotFoundError
from .summarize import Summary, summary_doc, summary_from_doc


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.parent / f".{path.name}.{uuid.uuid4().hex}.tmp"
    tmp.write_bytes(data)
    os.replace(tmp, path)


def _read_doc(path: Path, missing_message: str) -> Any:
    try:
        raw = path.read_bytes()
    except FileNotFoundError:
        raise NotFoundError(missing_message) from None
    try:
        return json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DriftwatchError(f"corrupt store file {path}: {exc}") from exc


class Store:
    """One store root; locks serialize writers per entity family."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._baseline_lock = threading.Lock()
        self._report_lock = threading.Lock()
        self._model_locks: dict[str, threading.Lock] = {}
        self._model_locks_guard = threading.Lock()

    # -- paths ---------------------------------------------------------

    @property
    def baselines_dir(self) -> Path:
        return self.root / "baselines"

    @property
    def reports_dir(self) -> Path:
        return self.root / "reports"

    def versions_dir(self, model_name: str) -> Path:
        return self.root / "registry" / model_name / "versions"

    @property
    def config_path(self) -> Path:
        return self.root / "config.json"

    def model_lock(self, model_name: str) -> threading.Lock:
        with self._model_locks_guard:
            lock = self._model_locks.get(model_name)
            if lock is None:
                lock = self._model_locks[model_name] = threading.Lock()
            return lock

    # -- baselines -----------------------------------------------------

    def put_baseline(self, summary: Summary, name: Optional[str] = None) -> str:
        doc = summary_doc(summary)
        summary_id = doc["summary_id"]
        path = self.baselines_dir / f"{summary_id}.json"
        with self._baseline_lock:
            if not path.exists():
                _atomic_write(path, canonical_bytes(doc))
            if name:
                names = self._names_index()
                names[name] = summary_id
                _atomic_write(self.baselines_dir / "names.json", canonical_bytes(names))
        return summary_id

    def get_baseline(self, summary_id: str) -> Summary:
        path = self.baselines_dir / f"{summary_id}.json"
        doc = _read_doc(path, f"unknown baseline id: {summary_id}")
        if hash_without(doc, "summary_id", "created_at") != summary_id:
            raise DriftwatchError(f"corrupt baseline {summary_id}: content does not match id")
        return summary_from_doc(doc)

    def list_baselines(self) -> list[dict[str, Any]]:
        names = {v: k for k, v in sorted(self._names_index().items(), reverse=True)}
        entries = []
        if self.baselines_dir.is_dir():
            for path in sorted(self.baselines_dir.glob("*.json")):
                if path.name == "names.json":
                    continue
                doc = _read_doc(path, path.name)
                entries.append(
                    {
                        "baseline_id": doc["summary_id"],
                        "name": names.get(doc["summary_id"]),
                        "record_count": doc["record_count"],
                        "created_at": doc["created_at"],
                    }
                )
        return entries

    def _names_index(self) -> dict[str, str]:
        path = self.baselines_dir / "names.json"
        if not path.exists():
            return {}
        return _read_doc(path, "names.json")

    # -- reports ---------------------------------------------------------

    def put_report(self, report: dict[str, Any]) -> str:
        report_id = report["report_id"]
        path = self.reports_dir / f"{report_id}.json"
        with self._report_lock:
            if not path.exists():
                _atomic_write(path, canonical_bytes(report))
        return report_id

    def get_report(self, report_id: str) -> dict[str, Any]:
        path = self.reports_dir / f"{report_id}.json"
        doc = _read_doc(path, f"unknown report id: {report_id}")
        if hash_without(doc, "report_id", "created_at") != report_id:
            raise DriftwatchError(f"corrupt report {report_id}: content does not match id")
        return doc

    # -- registry ----------------------------------------------------------

    def model_exists(self, model_name: str) -> bool:
        return self.versions_dir(model_name).is_dir()

    def version_numbers(self, model_name: str) -> list[int]:
        directory = self.versions_dir(model_name)
        if not directory.is_dir():
            return []
        numbers = []
        for path in directory.glob("*.json"):
            try:
                numbers.append(int(path.stem))
            except ValueError:
                raise DriftwatchError(f"unexpected file in version directory: {path}") from None
        return sorted(numbers)

    def get_version(self, model_name: str, version: int) -> dict[str, Any]:
        path = self.versions_dir(model_name) / f"{version}.json"
        doc = _read_doc(path, f"unknown version {version} for model {model_name!r}")
        if doc.get("version") != version or doc.get("model_name") != model_name:
            raise DriftwatchError(
                f"corrupt version file {path}: record does not match its location"
            )
        return doc

    def claim_version(self, model_name: str, version: int, doc: dict[str, Any]) -> bool:
        """Write a version file only if the number is still free.

        The temp document is hard-linked to its final name, which fails
        atomically when another writer claimed the number first.
        """
        directory = self.versions_dir(model_name)
        directory.mkdir(parents=True, exist_ok=True)
        tmp = directory / f".claim.{uuid.uuid4().hex}.tmp"
        tmp.write_bytes(canonical_bytes(doc))
        try:
            os.link(tmp, directory / f"{version}.json")
            return True
        except FileExistsError:
            return False
        finally:
            tmp.unlink(missing_ok=True)

    # -- generic entity surface ---------------------------------------------

    def put(self, kind: str, entity: Any) -> str:
        """Persist one entity of the named kind; returns its content id."""
        if kind == "baseline":
            return self.put_baseline(entity)
        if kind == "report":
            return self.put_report(entity)
        raise DriftwatchError(f"unknown entity kind: {kind!r}")

    def get(self, kind: str, entity_id: str) -> Any:
        if kind == "baseline":
            return self.get_baseline(entity_id)
        if kind == "report":
            return self.get_report(entity_id)
        raise DriftwatchError(f"unknown entity kind: {kind!r}")

    # -- config -----------------------------------------------------------

    def read_config_text(self) -> Optional[str]:
        try:
            return self.config_path.read_text(encoding="utf-8")
        except FileNotFoundError:
            return None
