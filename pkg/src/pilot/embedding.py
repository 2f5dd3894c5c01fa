"""Text embeddings and the cosine-distance retrieval primitives.

The reference embedder is a hashed bag of whole tokens plus character
3-grams, L2-normalized. It is fully deterministic for a fixed dimension
and hash seed, which keeps retrieval testable offline.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from .core import MemoryRecord
from .errors import DegenerateVector, DimensionMismatch

DEFAULT_DIMENSION = 256
DEFAULT_SEED = 7

_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")


@dataclass(frozen=True)
class EmbeddingVector:
    """Fixed-dimension vector; unit L2 norm unless degenerate (all-zero)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", arr)
        if arr.ndim != 1:
            raise ValueError("embedding must be one-dimensional")

    @property
    def dimension(self) -> int:
        return int(self.values.shape[0])

    @property
    def degenerate(self) -> bool:
        return not np.any(self.values)

    def to_list(self) -> list[float]:
        return [float(v) for v in self.values]

    @classmethod
    def from_list(cls, values: Sequence[float]) -> "EmbeddingVector":
        return cls(np.asarray(list(values), dtype=np.float64))


def tokenize(text: str) -> list[str]:
    """Case-fold and split on non-alphanumerics, dropping empty pieces."""
    return [t for t in _TOKEN_SPLIT.split(text.casefold()) if t]


def features_of(text: str) -> list[str]:
    """Whole tokens plus character 3-grams of each token (one namespace)."""
    feats: list[str] = []
    for token in tokenize(text):
        feats.append(token)
        for i in range(len(token) - 2):
            feats.append(token[i : i + 3])
    return feats


class ReferenceEmbedder:
    """Deterministic hashed-feature embedder; the offline default provider."""

    def __init__(self, dimension: int = DEFAULT_DIMENSION, seed: int = DEFAULT_SEED) -> None:
        if dimension <= 0:
            raise ValueError("dimension must be positive")
        self.dimension = dimension
        self.seed = seed
        self._salt = str(seed).encode("utf-8")

    def bucket_of(self, feature: str) -> int:
        digest = hashlib.blake2b(feature.encode("utf-8"), digest_size=8, salt=self._salt[:16]).digest()
        return int.from_bytes(digest, "big") % self.dimension

    def embed(self, text: str) -> EmbeddingVector:
        counts = np.zeros(self.dimension, dtype=np.float64)
        for feature in features_of(text):
            counts[self.bucket_of(feature)] += 1.0
        norm = float(np.linalg.norm(counts))
        if norm == 0.0:
            return EmbeddingVector(counts)  # degenerate: no features
        return EmbeddingVector(counts / norm)


def embed_reference(
    text: str, dimension: int = DEFAULT_DIMENSION, seed: int = DEFAULT_SEED
) -> EmbeddingVector:
    return ReferenceEmbedder(dimension, seed).embed(text)


def cosine_distance(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """1 - cos(a, b); in [0, 1] for the non-negative reference vectors."""
    if a.dimension != b.dimension:
        raise DimensionMismatch(f"dimensions differ: {a.dimension} vs {b.dimension}")
    if a.degenerate or b.degenerate:
        raise DegenerateVector("cosine distance undefined for a zero vector")
    na = float(np.linalg.norm(a.values))
    nb = float(np.linalg.norm(b.values))
    distance = 1.0 - float(np.dot(a.values, b.values)) / (na * nb)
    return 0.0 if abs(distance) < 1e-12 else distance


def ranked_distances(
    query: EmbeddingVector, records: Sequence[MemoryRecord], k: int | None = None
) -> list[tuple[MemoryRecord, float]]:
    """All (record, distance) pairs sorted ascending; ties by earliest created_at."""
    scored = [(rec, cosine_distance(query, rec.embedding)) for rec in records]
    scored.sort(key=lambda pair: (pair[1], pair[0].created_at))
    return scored if k is None else scored[:k]


def nearest(
    query: EmbeddingVector, records: Sequence[MemoryRecord]
) -> tuple[MemoryRecord, float] | None:
    """Argmin record and its distance, or None for an empty store."""
    if not records:
        return None
    return ranked_distances(query, records, k=1)[0]


class ExternalEmbedder:
    """HTTP embedding provider: POST {text} -> {vector}."""

    def __init__(self, endpoint: str, dimension: int, client: Any = None, timeout_s: float = 10.0) -> None:
        import httpx

        self.endpoint = endpoint
        self.dimension = dimension
        self._client = client or httpx.Client(timeout=timeout_s)

    def embed(self, text: str) -> EmbeddingVector:
        import httpx

        from .errors import ProviderUnavailable

        try:
            response = self._client.post(self.endpoint, json={"text": text})
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise ProviderUnavailable(f"embedding endpoint failed: {exc}") from exc
        vector = response.json().get("vector")
        if not isinstance(vector, list) or len(vector) != self.dimension:
            raise DimensionMismatch(
                f"endpoint returned dimension {len(vector) if isinstance(vector, list) else '?'}, "
                f"configured {self.dimension}"
            )
        return EmbeddingVector.from_list(vector)
