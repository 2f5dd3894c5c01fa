"""One configuration document governing every subsystem."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .gateway import ProviderConfig

DEFAULT_API_PORT = 8750


@dataclass
class EmbeddingConfig:
    mode: str = "reference"  # reference | external
    dimension: int = 256
    seed: int = 7
    endpoint: str | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("reference", "external"):
            raise ValueError(f"unknown embedding mode: {self.mode!r}")
        if self.mode == "external" and not self.endpoint:
            raise ValueError("external embedding mode requires an endpoint")


@dataclass
class MemoryConfig:
    tau: float = 0.4
    auto_store: bool = False
    path: str | None = None


@dataclass
class SchedulerSection:
    period_ms: float = 1000.0
    burst: int = 5
    path: str | None = None


@dataclass
class PilotConfig:
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    embedding: EmbeddingConfig = field(default_factory=EmbeddingConfig)
    memory: MemoryConfig = field(default_factory=MemoryConfig)
    scheduler: SchedulerSection = field(default_factory=SchedulerSection)
    skills_dir: str | None = None
    robot_url: str = "sim://local"
    api_port: int = DEFAULT_API_PORT

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "PilotConfig":
        return cls(
            provider=ProviderConfig(**doc.get("provider", {})),
            embedding=EmbeddingConfig(**doc.get("embedding", {})),
            memory=MemoryConfig(**doc.get("memory", {})),
            scheduler=SchedulerSection(**doc.get("scheduler", {})),
            skills_dir=doc.get("skills_dir"),
            robot_url=doc.get("robot_url", "sim://local"),
            api_port=int(doc.get("api_port", DEFAULT_API_PORT)),
        )

    @classmethod
    def load(cls, path: str | Path) -> "PilotConfig":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))
