"""Multi-agent tool orchestrator for a simulated social robot.

An instruction enters through the router and is dispatched to one of two
agents: the physical agent (sensor bindings and direct tool invocation,
backed by a supervised worker pool) or the social agent (task-state
tracking, retrieve-and-reuse memory, and emotion-aligned scripts).
"""

from .config import PilotConfig
from .core import (
    AgentTarget,
    EmotionLabel,
    RouteDecision,
    Script,
    SensorId,
    SiaAction,
    SiaActionKind,
    TaskInstruction,
    TaskState,
    Utterance,
    arousal_of,
    rate_of,
)
from .orchestrator import Orchestrator, TurnResult

__version__ = "0.1.0"

__all__ = [
    "AgentTarget",
    "EmotionLabel",
    "Orchestrator",
    "PilotConfig",
    "RouteDecision",
    "Script",
    "SensorId",
    "SiaAction",
    "SiaActionKind",
    "TaskInstruction",
    "TaskState",
    "TurnResult",
    "Utterance",
    "arousal_of",
    "rate_of",
    "__version__",
]
