"""Orchestrator assembly: lifecycle wiring and the public turn API.

Startup order is load skills, load memory, recover the process table,
then start the scheduler. Per-session turns are serialized; different
sessions may run concurrently.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

from .config import PilotConfig
from .core import (
    AgentTarget,
    ExecutionTrace,
    RouteDecision,
    Script,
    SensorId,
    TaskInstruction,
    TaskState,
    new_id,
)
from .embedding import ExternalEmbedder, ReferenceEmbedder
from .errors import PilotError
from .events import EventBus
from .gateway import Gateway
from .memory import MemoryStore
from .pia import CommandResult, PhysicalAgent, scan_skills
from .robotsim import HttpRobotClient, LocalRobotClient, RobotSimulator
from .router import Router
from .sia import SocialAgent
from .stm import Scheduler, SchedulerConfig

logger = logging.getLogger(__name__)


def default_rules_path() -> str:
    return str(resources.files("pilot") / "data" / "default_rules.json")


def default_skills_dir() -> str:
    return str(resources.files("pilot") / "data" / "skills")


@dataclass
class TurnResult:
    turn_id: str
    session_id: str
    text: str
    route: RouteDecision | None = None
    path: str | None = None  # fast | slow | control (SIA turns)
    script: Script | None = None
    commands: list[CommandResult] | None = None
    trace: ExecutionTrace = field(default_factory=ExecutionTrace)
    error: str | None = None
    latency_ms: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "turn_id": self.turn_id,
            "session_id": self.session_id,
            "text": self.text,
            "route": None
            if self.route is None
            else {"target": self.route.target.value, "rationale": self.route.rationale},
            "path": self.path,
            "script": self.script.to_dict() if self.script else None,
            "commands": [c.to_dict() for c in self.commands] if self.commands is not None else None,
            "trace": self.trace.to_dict(),
            "error": self.error,
            "latency_ms": self.latency_ms,
        }


class _Session:
    def __init__(self, session_id: str, agent: SocialAgent) -> None:
        self.session_id = session_id
        self.agent = agent
        self.lock = threading.Lock()


class Orchestrator:
    """Everything behind the console API and the REPL."""

    def __init__(self, config: PilotConfig | None = None, rules=None) -> None:
        self.config = config or PilotConfig()
        self.events = EventBus()

        embedding = self.config.embedding
        if embedding.mode == "external":
            self.embedder = ExternalEmbedder(embedding.endpoint or "", embedding.dimension)
        else:
            self.embedder = ReferenceEmbedder(embedding.dimension, embedding.seed)

        provider_config = self.config.provider
        if provider_config.mode == "scripted" and rules is None and not provider_config.rule_table:
            provider_config.rule_table = default_rules_path()
        self.gateway = Gateway.from_config(provider_config, rules=rules)
        self.router = Router(self.gateway)

        if self.config.robot_url.startswith("sim://"):
            self.sim: RobotSimulator | None = RobotSimulator()
            self.robot = LocalRobotClient(self.sim)
            self.sim.add_action_listener(
                lambda action: self.events.publish("robot_action", **action.to_dict())
            )
            self.sim.add_event_listener(
                lambda event: self.events.publish("sensor", **event.to_dict())
            )
        else:
            self.sim = None
            self.robot = HttpRobotClient(self.config.robot_url)

        self.memory = MemoryStore(
            embedder=self.embedder,
            tau=self.config.memory.tau,
            path=self.config.memory.path,
            on_hit=lambda record, distance: self.events.publish(
                "memory_hit", main_task=record.main_task, distance=distance
            ),
        )

        skills_dir = self.config.skills_dir or default_skills_dir()
        self.inventory, self.skill_warnings = scan_skills(skills_dir)
        self._inventory_map = {skill.name: skill for skill in self.inventory}

        self.scheduler = Scheduler(
            robot=self.robot,
            skill_lookup=self._inventory_map.get,
            config=SchedulerConfig(
                period_ms=self.config.scheduler.period_ms,
                persistence_path=self.config.scheduler.path,
                max_restart_burst=self.config.scheduler.burst,
            ),
        )
        def _publish_supervision(event) -> None:
            data = event.to_dict()
            self.events.publish(data.pop("type"), **data)

        self.scheduler.add_event_listener(_publish_supervision)

        self.pia = PhysicalAgent(self.gateway, self.scheduler, self.robot, self.inventory)
        self._sessions: dict[str, _Session] = {}
        self._sessions_lock = threading.Lock()
        self._started = False

    # -- lifecycle -----------------------------------------------------------

    def start(self) -> "Orchestrator":
        """load memory -> recover bindings -> start periodic supervision."""
        self.memory.load()
        remounted = self.scheduler.recover()
        for entry in remounted:
            self.events.publish("remount", **entry.to_dict())
        self.scheduler.start()
        self._started = True
        return self

    def shutdown(self) -> None:
        self.scheduler.stop()
        self._started = False

    def ready(self) -> dict[str, Any]:
        return {
            "ready": self._started,
            "subsystems": {
                "provider": self.config.provider.mode,
                "embedding": {"mode": self.config.embedding.mode, "dimension": self.embedder.dimension},
                "memory": self.memory.stats(),
                "skills": len(self.inventory),
                "skill_warnings": len(self.skill_warnings),
                "bindings": len(self.scheduler.snapshot()),
                "robot": "sim" if self.sim is not None else self.config.robot_url,
            },
        }

    # -- sessions ---------------------------------------------------------------

    def _session(self, session_id: str) -> _Session:
        with self._sessions_lock:
            session = self._sessions.get(session_id)
            if session is None:
                agent = SocialAgent(
                    self.gateway, self.memory, self.robot, auto_store=self.config.memory.auto_store
                )
                session = _Session(session_id, agent)
                self._sessions[session_id] = session
            return session

    # -- the turn --------------------------------------------------------------

    def submit(self, session_id: str, text: str) -> TurnResult:
        """Route and dispatch one instruction; errors land in the result."""
        import time as _time

        started = _time.perf_counter()
        if not text.strip():
            raise ValueError("instruction text must be non-empty")
        instruction = TaskInstruction.create(session_id, text)
        result = TurnResult(turn_id=instruction.id, session_id=session_id, text=text)
        session = self._session(session_id)
        with session.lock:  # two submits on one session never interleave
            try:
                decision = self.router.route(instruction)
                result.route = decision
                if decision.target is AgentTarget.SIA:
                    sia_result = session.agent.respond(instruction)
                    result.path = sia_result.path
                    result.script = sia_result.script
                    result.trace = sia_result.trace
                else:
                    commands = self.pia.parse_commands(instruction.text)
                    trace, outcomes = self.pia.execute(commands)
                    result.commands = outcomes
                    result.trace = trace
            except PilotError as exc:
                result.error = f"{type(exc).__name__}: {exc}"
                carried = getattr(exc, "trace", None)
                if isinstance(carried, ExecutionTrace):
                    result.trace = carried
        result.latency_ms = (_time.perf_counter() - started) * 1000.0
        self.events.publish(
            "turn",
            turn_id=result.turn_id,
            session_id=session_id,
            target=result.route.target.value if result.route else None,
            path=result.path,
            error=result.error,
        )
        return result

    # -- snapshots ---------------------------------------------------------------

    def tsm_snapshot(self, session_id: str) -> dict[str, Any]:
        with self._sessions_lock:
            session = self._sessions.get(session_id)
        state: TaskState | None = session.agent.state if session else None
        return {
            "session_id": session_id,
            "state": state.to_dict() if state is not None else None,
        }

    def process_table_snapshot(self) -> list[dict[str, Any]]:
        return [entry.to_dict() for entry in self.scheduler.snapshot()]

    def memory_snapshot(self) -> dict[str, Any]:
        stats = self.memory.stats()
        stats["keys"] = [record.main_task for record in self.memory.records]
        return stats

    def trigger_sensor(self, sensor: str | SensorId) -> str:
        return self.robot.inject_sensor_event(sensor)
