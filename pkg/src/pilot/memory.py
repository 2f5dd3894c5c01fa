"""Fast-thinking store: durable task/script records with threshold lookup.

A lookup is a Hit iff the minimum cosine distance between the query key
and any stored record is <= tau (default 0.4). Writes happen on explicit
user request, or after every successful slow-thinking completion when
``auto_store`` is enabled by config.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .core import MemoryRecord, Script, new_id, now
from .embedding import EmbeddingVector, ReferenceEmbedder, cosine_distance, nearest
from .errors import CorruptStore, PersistenceFailure

STORE_VERSION = 1


@dataclass(frozen=True)
class Hit:
    record: MemoryRecord
    distance: float


@dataclass(frozen=True)
class Miss:
    min_distance: float | None = None


def _records_checksum(dimension: int, records: list[dict]) -> str:
    canonical = json.dumps({"dimension": dimension, "records": records}, sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _record_to_dict(record: MemoryRecord) -> dict:
    return {
        "record_id": record.record_id,
        "main_task": record.main_task,
        "embedding": record.embedding.to_list(),
        "script": record.script.to_dict(),
        "created_at": record.created_at,
        "hit_count": record.hit_count,
    }


def _record_from_dict(data: dict) -> MemoryRecord:
    from .gateway import decode_structured

    return MemoryRecord(
        record_id=data["record_id"],
        main_task=data["main_task"],
        embedding=EmbeddingVector.from_list(data["embedding"]),
        script=decode_structured("script", data["script"]),
        created_at=data["created_at"],
        hit_count=data["hit_count"],
    )


class MemoryStore:
    """Single-writer record store; lookups scan a snapshot linearly."""

    def __init__(
        self,
        embedder: ReferenceEmbedder | None = None,
        tau: float = 0.4,
        path: str | Path | None = None,
        on_hit: Callable[[MemoryRecord, float], None] | None = None,
    ) -> None:
        if not 0.0 < tau < 2.0:
            raise ValueError("tau must be in (0, 2)")
        self.embedder = embedder or ReferenceEmbedder()
        self.tau = tau
        self.path = Path(path) if path is not None else None
        self.on_hit = on_hit
        self.records: list[MemoryRecord] = []
        self.total_hits = 0
        self._lock = threading.Lock()

    # -- persistence -----------------------------------------------------

    def load(self) -> None:
        """Replace in-memory records from the persistence file.

        A missing file means an empty store; anything unreadable or failing
        the checksum is fatal (never silently reset).
        """
        if self.path is None or not self.path.exists():
            self.records = []
            return
        try:
            with open(self.path, "r", encoding="utf-8") as handle:
                doc = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise CorruptStore(f"memory store unreadable: {self.path}: {exc}") from exc
        if not isinstance(doc, dict) or doc.get("version") != STORE_VERSION:
            raise CorruptStore(f"memory store has unsupported version: {self.path}")
        records_raw = doc.get("records")
        dimension = doc.get("dimension")
        if not isinstance(records_raw, list) or not isinstance(dimension, int):
            raise CorruptStore(f"memory store missing fields: {self.path}")
        if doc.get("checksum") != _records_checksum(dimension, records_raw):
            raise CorruptStore(f"memory store checksum mismatch: {self.path}")
        if dimension != self.embedder.dimension:
            raise CorruptStore(
                f"memory store dimension {dimension} != configured {self.embedder.dimension}"
            )
        try:
            self.records = [_record_from_dict(entry) for entry in records_raw]
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptStore(f"memory store record malformed: {self.path}: {exc}") from exc

    def save(self) -> None:
        """Durably write all records (write-temp-then-rename)."""
        if self.path is None:
            return
        records_raw = [_record_to_dict(rec) for rec in self.records]
        doc = {
            "version": STORE_VERSION,
            "dimension": self.embedder.dimension,
            "checksum": _records_checksum(self.embedder.dimension, records_raw),
            "records": records_raw,
        }
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(tmp, "w", encoding="utf-8") as handle:
                json.dump(doc, handle)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, self.path)
        except OSError as exc:
            raise PersistenceFailure(f"cannot persist memory store: {exc}") from exc

    # -- operations --------------------------------------------------------

    def lookup(self, main_task: str) -> Hit | Miss:
        """Hit iff the closest stored record is within tau of the query key."""
        query = self.embedder.embed(main_task)
        if query.degenerate:
            return Miss(min_distance=None)
        snapshot = list(self.records)
        best = nearest(query, snapshot)
        if best is None:
            return Miss(min_distance=None)
        record, distance = best
        if distance <= self.tau:
            with self._lock:
                record.hit_count += 1
                self.total_hits += 1
                self.save()
            if self.on_hit is not None:
                self.on_hit(record, distance)
            return Hit(record=record, distance=distance)
        return Miss(min_distance=distance)

    def store(self, main_task: str, script: Script) -> str:
        """Append a record and persist before returning its id."""
        if not main_task.strip():
            raise ValueError("main_task must be non-empty")
        record = MemoryRecord(
            record_id=new_id("mem-"),
            main_task=main_task,
            embedding=self.embedder.embed(main_task),
            script=script,
            created_at=now(),
        )
        with self._lock:
            self.records.append(record)
            self.save()
        return record.record_id

    def distance_to(self, main_task: str, record: MemoryRecord) -> float:
        return cosine_distance(self.embedder.embed(main_task), record.embedding)

    def stats(self) -> dict:
        return {
            "records": len(self.records),
            "total_hits": self.total_hits,
            "tau": self.tau,
            "dimension": self.embedder.dimension,
            "path": str(self.path) if self.path else None,
        }
