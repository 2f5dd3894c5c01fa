"""Benchmark reports: mean±std conditions plus a published JSON schema."""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence


@dataclass(frozen=True)
class Condition:
    name: str
    metric: str
    mean: float
    std: float

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "metric": self.metric, "mean": self.mean, "std": self.std}


@dataclass
class Report:
    suite: str
    runs: int
    seed: int
    conditions: list[Condition] = field(default_factory=list)
    artifacts: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "runs": self.runs,
            "seed": self.seed,
            "conditions": [c.to_dict() for c in self.conditions],
            "artifacts": self.artifacts,
        }

    def condition(self, name: str) -> Condition:
        for cond in self.conditions:
            if cond.name == name:
                return cond
        raise KeyError(name)


REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["suite", "runs", "seed", "conditions", "artifacts"],
    "properties": {
        "suite": {"type": "string"},
        "runs": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
        "conditions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "metric", "mean", "std"],
                "properties": {
                    "name": {"type": "string"},
                    "metric": {"type": "string"},
                    "mean": {"type": "number"},
                    "std": {"type": "number"},
                },
                "additionalProperties": False,
            },
        },
        "artifacts": {"type": "object"},
    },
    "additionalProperties": False,
}


def condition_over_runs(name: str, metric: str, values: Sequence[float]) -> Condition:
    """Aggregate one per-run value list into mean ± population std."""
    mean = statistics.fmean(values)
    std = statistics.pstdev(values) if len(values) > 1 else 0.0
    return Condition(name=name, metric=metric, mean=round(mean, 6), std=round(std, 6))


def format_report(report: Report) -> str:
    lines = [f"suite: {report.suite}   runs: {report.runs}   seed: {report.seed}"]
    if not report.conditions:
        lines.append("(no conditions)")
        return "\n".join(lines)
    name_w = max(len(c.name) for c in report.conditions)
    metric_w = max(len(c.metric) for c in report.conditions)
    for cond in report.conditions:
        lines.append(
            f"{cond.name:<{name_w}}  {cond.metric:<{metric_w}}  {cond.mean:>10.4f} ± {cond.std:.4f}"
        )
    return "\n".join(lines)


def report_emit(report: Report, path: str | Path) -> list[Path]:
    """Write the JSON report plus an aligned plain-text table next to it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    json_path = path if path.suffix == ".json" else path.with_suffix(".json")
    with open(json_path, "w", encoding="utf-8") as handle:
        json.dump(report.to_dict(), handle, indent=2, sort_keys=True)
        handle.write("\n")
    text_path = json_path.with_suffix(".txt")
    with open(text_path, "w", encoding="utf-8") as handle:
        handle.write(format_report(report) + "\n")
    return [json_path, text_path]
