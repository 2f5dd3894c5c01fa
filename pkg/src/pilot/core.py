"""Domain types shared by every module, plus the emotion/arousal/rate mapping."""

from __future__ import annotations

import time
import uuid
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping, Sequence

from .errors import UnknownSensor


def now() -> float:
    return time.time()


def new_id(prefix: str = "") -> str:
    return f"{prefix}{uuid.uuid4().hex[:12]}"


# ---------------------------------------------------------------------------
# Emotions, arousal classes and speaking rates
# ---------------------------------------------------------------------------

class EmotionLabel(str, Enum):
    HAPPINESS = "Happiness"
    SADNESS = "Sadness"
    ANGER = "Anger"
    FEAR = "Fear"
    DISGUST = "Disgust"
    SURPRISE = "Surprise"
    CONTEMPT = "Contempt"
    NEUTRAL = "Neutral"

    @classmethod
    def parse(cls, value: "str | EmotionLabel") -> "EmotionLabel":
        if isinstance(value, cls):
            return value
        for member in cls:
            if member.value.lower() == str(value).strip().lower():
                return member
        raise ValueError(f"unknown emotion label: {value!r}")


class Arousal(str, Enum):
    LOW = "low"
    BASELINE = "baseline"
    HIGH = "high"


_AROUSAL_TABLE: dict[EmotionLabel, Arousal] = {
    EmotionLabel.HAPPINESS: Arousal.HIGH,
    EmotionLabel.ANGER: Arousal.HIGH,
    EmotionLabel.FEAR: Arousal.HIGH,
    EmotionLabel.SURPRISE: Arousal.HIGH,
    EmotionLabel.SADNESS: Arousal.LOW,
    EmotionLabel.CONTEMPT: Arousal.LOW,
    EmotionLabel.NEUTRAL: Arousal.BASELINE,
    EmotionLabel.DISGUST: Arousal.BASELINE,
}

_RATE_TABLE: dict[Arousal, float] = {
    Arousal.LOW: 0.95,
    Arousal.BASELINE: 1.00,
    Arousal.HIGH: 1.05,
}


def arousal_of(emotion: EmotionLabel) -> Arousal:
    """Arousal class of an emotion; total over the 8 labels."""
    return _AROUSAL_TABLE[emotion]


def rate_of(emotion: EmotionLabel) -> float:
    """Speaking-rate multiplier for an emotion: 0.95 / 1.00 / 1.05 by arousal."""
    return _RATE_TABLE[arousal_of(emotion)]


# ---------------------------------------------------------------------------
# Sensors
# ---------------------------------------------------------------------------

class SensorId(str, Enum):
    """Canonical namespace of the ten touch sensors."""

    HEAD_TOP = "head_top"
    HEAD_FRONT = "head_front"
    HEAD_BACK = "head_back"
    HEAD_LEFT = "head_left"
    HEAD_RIGHT = "head_right"
    CHIN = "chin"
    BUMPER_FRONT_LEFT = "bumper_front_left"
    BUMPER_FRONT_RIGHT = "bumper_front_right"
    BUMPER_REAR_LEFT = "bumper_rear_left"
    BUMPER_REAR_RIGHT = "bumper_rear_right"

    @classmethod
    def parse(cls, value: "str | SensorId") -> "SensorId":
        if isinstance(value, cls):
            return value
        name = str(value).strip().lower()
        for member in cls:
            if member.value == name:
                return member
        raise UnknownSensor(f"not a canonical sensor: {value!r}")


ALL_SENSORS: tuple[SensorId, ...] = tuple(SensorId)


# ---------------------------------------------------------------------------
# Instructions and routing
# ---------------------------------------------------------------------------

class AgentTarget(str, Enum):
    PIA = "PIA"
    SIA = "SIA"


@dataclass(frozen=True)
class TaskInstruction:
    """One user turn as received by the dispatcher."""

    id: str
    session_id: str
    text: str
    received_at: float

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError("instruction text must be non-empty")

    @classmethod
    def create(cls, session_id: str, text: str) -> "TaskInstruction":
        return cls(id=new_id("turn-"), session_id=session_id, text=text, received_at=now())


@dataclass(frozen=True)
class RouteDecision:
    target: AgentTarget
    rationale: str = ""


# ---------------------------------------------------------------------------
# Social-agent actions and task state
# ---------------------------------------------------------------------------

class SiaActionKind(str, Enum):
    NEW = "NEW"
    UPDATE = "UPDATE"
    DELETE = "DELETE"
    UPGRADE = "UPGRADE"
    DOWNGRADE = "DOWNGRADE"
    MEMORY = "MEMORY"


def _check_detail_unit(unit: str) -> str:
    if not unit.strip():
        raise ValueError("detail unit must be non-empty")
    if ";" in unit:
        raise ValueError(f"detail unit may not contain ';': {unit!r}")
    return unit


@dataclass(frozen=True)
class SiaAction:
    """One parsed task-state action (six keyword variants)."""

    kind: SiaActionKind
    main_task: str | None = None
    details: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind is SiaActionKind.NEW:
            if not (self.main_task or "").strip():
                raise ValueError("NEW requires a non-empty main_task")
        elif self.main_task is not None:
            raise ValueError(f"{self.kind.value} does not take a main_task")
        if self.kind in (SiaActionKind.NEW, SiaActionKind.UPDATE, SiaActionKind.DELETE):
            for unit in self.details:
                _check_detail_unit(unit)
            if self.kind is not SiaActionKind.NEW and not self.details:
                raise ValueError(f"{self.kind.value} requires at least one detail unit")
        elif self.details:
            raise ValueError(f"{self.kind.value} does not take details")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"action": self.kind.value}
        if self.kind is SiaActionKind.NEW:
            out["main_task"] = self.main_task
        if self.kind in (SiaActionKind.NEW, SiaActionKind.UPDATE, SiaActionKind.DELETE):
            out["details"] = list(self.details)
        return out


class ModelTier(str, Enum):
    LIGHT = "light"
    HEAVY = "heavy"


@dataclass(frozen=True)
class TaskState:
    """Current task: one main_task plus ordered atomic detail units."""

    main_task: str
    details: tuple[str, ...] = ()
    model_tier: ModelTier = ModelTier.LIGHT

    def __post_init__(self) -> None:
        if not self.main_task.strip():
            raise ValueError("main_task must be non-empty")
        seen: set[str] = set()
        for unit in self.details:
            _check_detail_unit(unit)
            folded = unit.casefold()
            if folded in seen:
                raise ValueError(f"duplicate detail unit after case-folding: {unit!r}")
            seen.add(folded)

    def to_dict(self) -> dict[str, Any]:
        return {
            "main_task": self.main_task,
            "details": list(self.details),
            "model_tier": self.model_tier.value,
        }


# ---------------------------------------------------------------------------
# Physical-agent commands and skills
# ---------------------------------------------------------------------------

class PiaCommandKind(str, Enum):
    BIND = "BIND"
    UPDATE = "UPDATE"
    UNBIND = "UNBIND"
    INVOKE = "INVOKE"


@dataclass(frozen=True)
class PiaCommand:
    """One parsed sensor/tool command."""

    kind: PiaCommandKind
    sensor: SensorId | None = None
    skill: str | None = None
    args: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        needs_sensor = self.kind in (PiaCommandKind.BIND, PiaCommandKind.UPDATE, PiaCommandKind.UNBIND)
        needs_skill = self.kind in (PiaCommandKind.BIND, PiaCommandKind.UPDATE, PiaCommandKind.INVOKE)
        if needs_sensor and self.sensor is None:
            raise ValueError(f"{self.kind.value} requires a sensor")
        if not needs_sensor and self.sensor is not None:
            raise ValueError(f"{self.kind.value} does not take a sensor")
        if needs_skill and not (self.skill or "").strip():
            raise ValueError(f"{self.kind.value} requires a skill name")
        if not needs_skill and self.skill is not None:
            raise ValueError(f"{self.kind.value} does not take a skill")
        if self.args and self.kind is not PiaCommandKind.INVOKE:
            raise ValueError("only INVOKE carries args")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"command": self.kind.value}
        if self.sensor is not None:
            out["sensor"] = self.sensor.value
        if self.skill is not None:
            out["skill"] = self.skill
        if self.kind is PiaCommandKind.INVOKE:
            out["args"] = dict(self.args)
        return out


class RobotOp(str, Enum):
    SPEAK = "speak"
    MOVE_HEAD = "move_head"
    MOVE_ARMS = "move_arms"
    LED = "led"
    DISPLAY_EMOTION = "display_emotion"
    PLAY_AUDIO = "play_audio"
    CAPTURE_PHOTO = "capture_photo"


@dataclass(frozen=True)
class ParamSpec:
    type: str
    required: bool = False


@dataclass(frozen=True)
class ActionSpec:
    op: RobotOp
    args: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class SkillDescriptor:
    """Inventory entry built from one scanned skill manifest."""

    name: str
    description: str
    parameter_schema: Mapping[str, ParamSpec] = field(default_factory=dict)
    actions: tuple[ActionSpec, ...] = ()

    def __post_init__(self) -> None:
        if not self.name.strip():
            raise ValueError("skill name must be non-empty")
        if not self.description.strip():
            raise ValueError("skill description must be non-empty")

    def required_params(self) -> list[str]:
        return [name for name, spec in self.parameter_schema.items() if spec.required]


# ---------------------------------------------------------------------------
# Scripts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Utterance:
    """One text segment with its emotion label and derived speaking rate."""

    text: str
    emotion: EmotionLabel
    rate: float | None = None

    def __post_init__(self) -> None:
        expected = rate_of(self.emotion)
        if self.rate is None:
            object.__setattr__(self, "rate", expected)
        elif abs(self.rate - expected) > 1e-9:
            raise ValueError(
                f"rate {self.rate} inconsistent with {self.emotion.value} (expected {expected})"
            )

    def to_dict(self) -> dict[str, Any]:
        return {"text": self.text, "emotion": self.emotion.value, "rate": self.rate}


@dataclass(frozen=True)
class Script:
    utterances: tuple[Utterance, ...]

    def __post_init__(self) -> None:
        if not self.utterances:
            raise ValueError("a script must contain at least one utterance")

    def to_dict(self) -> dict[str, Any]:
        return {"utterances": [u.to_dict() for u in self.utterances]}

    def total_chars(self) -> int:
        return sum(len(u.text) for u in self.utterances)


# ---------------------------------------------------------------------------
# Execution traces
# ---------------------------------------------------------------------------

class StepOutcome(str, Enum):
    OK = "ok"
    ERROR = "error"


@dataclass(frozen=True)
class TraceStep:
    function_name: str
    params: Mapping[str, Any]
    outcome: StepOutcome
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "function_name": self.function_name,
            "params": dict(self.params),
            "outcome": self.outcome.value,
            "detail": self.detail,
        }


class ExecutionTrace:
    """Ordered record of the parameterized calls made while serving a turn."""

    def __init__(self) -> None:
        self.steps: list[TraceStep] = []

    def record(
        self,
        function_name: str,
        params: Mapping[str, Any] | None = None,
        outcome: StepOutcome = StepOutcome.OK,
        detail: str = "",
    ) -> TraceStep:
        step = TraceStep(function_name, dict(params or {}), outcome, detail)
        self.steps.append(step)
        return step

    def function_names(self) -> list[str]:
        return [s.function_name for s in self.steps]

    def to_dict(self) -> list[dict[str, Any]]:
        return [s.to_dict() for s in self.steps]


# ---------------------------------------------------------------------------
# Sensor-tool process table and memory records
# ---------------------------------------------------------------------------

class WorkerStatus(str, Enum):
    ACTIVE = "Active"
    INACTIVE = "Inactive"


@dataclass(frozen=True)
class ProcessTableEntry:
    sensor: SensorId
    worker_id: str
    bound_skill: str
    status: WorkerStatus
    heartbeat_at: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "sensor": self.sensor.value,
            "worker_id": self.worker_id,
            "skill": self.bound_skill,
            "status": self.status.value,
            "heartbeat_at": self.heartbeat_at,
        }


@dataclass
class MemoryRecord:
    """One stored task: canonical key text, its embedding and the reusable script."""

    record_id: str
    main_task: str
    embedding: "EmbeddingVector"  # noqa: F821 - see embedding module
    script: Script
    created_at: float
    hit_count: int = 0
