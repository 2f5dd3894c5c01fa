"""Physically interactive agent: skill inventory, command parsing, execution.

Skills are declarative manifests (one ``*.skill.json`` file per skill)
discovered at startup. The inventory (name + description) is injected into
the agent's system prompt, so a parsed skill name that is not in the
inventory is a validation failure, not an execution failure.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from .core import (
    ActionSpec,
    ExecutionTrace,
    ParamSpec,
    PiaCommand,
    PiaCommandKind,
    RobotOp,
    SkillDescriptor,
    StepOutcome,
)
from .errors import (
    AlreadyBound,
    NotBound,
    RobotUnreachable,
    SchemaViolation,
    SpawnFailure,
    UnknownSkill,
)
from .gateway import SCHEMA_PIA, CompletionRequest, Gateway
from .stm import Scheduler, run_skill

logger = logging.getLogger(__name__)

SKILL_SUFFIX = ".skill.json"

PIA_SYSTEM_PROMPT = (
    "You manage sensor bindings and tools for a social robot. Map the user's "
    "instruction to an ordered list of commands: BIND(sensor, skill), "
    "UPDATE(sensor, skill), UNBIND(sensor), INVOKE(skill, args). Sensors must "
    "come from the canonical namespace; skills must come from the inventory "
    "below. Answer as JSON.\n\nSkill inventory:\n"
)


@dataclass(frozen=True)
class SkillWarning:
    path: str
    reason: str


def _parse_skill_file(path: Path) -> SkillDescriptor:
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    if not isinstance(doc, dict):
        raise ValueError("manifest must be a JSON object")
    name = doc.get("name")
    description = doc.get("description")
    if not isinstance(name, str) or not name.strip():
        raise ValueError("missing skill name")
    if not isinstance(description, str) or not description.strip():
        raise ValueError("missing description")
    params_raw = doc.get("params", {})
    if not isinstance(params_raw, dict):
        raise ValueError("params must be an object")
    params: dict[str, ParamSpec] = {}
    for pname, spec in params_raw.items():
        if not isinstance(spec, dict) or "type" not in spec:
            raise ValueError(f"param {pname!r} needs a type")
        params[pname] = ParamSpec(type=str(spec["type"]), required=bool(spec.get("required", False)))
    actions_raw = doc.get("actions", [])
    if not isinstance(actions_raw, list) or not actions_raw:
        raise ValueError("actions must be a non-empty list")
    actions: list[ActionSpec] = []
    for item in actions_raw:
        if not isinstance(item, dict) or "op" not in item:
            raise ValueError("each action needs an op")
        try:
            op = RobotOp(item["op"])
        except ValueError:
            raise ValueError(f"unknown action op: {item['op']!r}") from None
        args = item.get("args", {})
        if not isinstance(args, dict):
            raise ValueError("action args must be an object")
        actions.append(ActionSpec(op=op, args=args))
    return SkillDescriptor(
        name=name, description=description, parameter_schema=params, actions=tuple(actions)
    )


def scan_skills(directory: str | Path) -> tuple[list[SkillDescriptor], list[SkillWarning]]:
    """Build the inventory from a skill directory.

    Malformed files are skipped with a warning record; duplicates keep the
    first descriptor seen (files scanned in name order for determinism).
    """
    directory = Path(directory)
    inventory: list[SkillDescriptor] = []
    warnings: list[SkillWarning] = []
    seen: set[str] = set()
    if not directory.is_dir():
        return inventory, [SkillWarning(str(directory), "not a directory")]
    for path in sorted(directory.glob(f"*{SKILL_SUFFIX}")):
        try:
            skill = _parse_skill_file(path)
        except (ValueError, json.JSONDecodeError, OSError) as exc:
            warnings.append(SkillWarning(str(path), str(exc)))
            logger.warning("skipping skill file %s: %s", path, exc)
            continue
        if skill.name in seen:
            warnings.append(SkillWarning(str(path), f"duplicate skill name {skill.name!r}"))
            continue
        seen.add(skill.name)
        inventory.append(skill)
    return inventory, warnings


def render_inventory(inventory: list[SkillDescriptor]) -> str:
    if not inventory:
        return "(no skills installed)"
    return "\n".join(f"- {skill.name}: {skill.description}" for skill in inventory)


@dataclass
class CommandResult:
    command: PiaCommand
    outcome: StepOutcome
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        out = self.command.to_dict()
        out["outcome"] = self.outcome.value
        out["detail"] = self.detail
        return out


class PhysicalAgent:
    """Parses the command set and executes it through the sensor-tool manager."""

    def __init__(self, gateway: Gateway, scheduler: Scheduler, robot, inventory: list[SkillDescriptor]) -> None:
        self.gateway = gateway
        self.scheduler = scheduler
        self.robot = robot
        self.inventory = {skill.name: skill for skill in inventory}

    def skill_lookup(self, name: str) -> SkillDescriptor | None:
        return self.inventory.get(name)

    def system_prompt(self) -> str:
        return PIA_SYSTEM_PROMPT + render_inventory(list(self.inventory.values()))

    def _validate(self, commands: list[PiaCommand]) -> None:
        for command in commands:
            if command.skill is not None and command.skill not in self.inventory:
                raise UnknownSkill(f"skill not in inventory: {command.skill!r}")
            if command.kind is PiaCommandKind.INVOKE:
                skill = self.inventory[command.skill]  # type: ignore[index]
                missing = [p for p in skill.required_params() if p not in command.args]
                if missing:
                    raise SchemaViolation(
                        f"INVOKE {command.skill} missing required args: {', '.join(missing)}"
                    )

    def parse_commands(self, utterance: str) -> list[PiaCommand]:
        """One or more schema-valid commands; skill names must exist in the inventory."""
        request = CompletionRequest(
            system_prompt=self.system_prompt(),
            user_content=utterance,
            schema_id=SCHEMA_PIA,
            tier="light",
        )
        return self.gateway.complete_structured(request, extra_validate=self._validate)

    def execute(self, commands: list[PiaCommand]) -> tuple[ExecutionTrace, list[CommandResult]]:
        """Run commands in order; a failed command never stops the rest."""
        trace = ExecutionTrace()
        results: list[CommandResult] = []
        for command in commands:
            params: dict[str, Any] = {}
            if command.sensor is not None:
                params["sensor"] = command.sensor.value
            if command.skill is not None:
                params["skill"] = command.skill
            if command.kind is PiaCommandKind.INVOKE and command.args:
                params["args"] = dict(command.args)
            try:
                if command.kind is PiaCommandKind.BIND:
                    self.scheduler.bind(command.sensor, command.skill)  # type: ignore[arg-type]
                elif command.kind is PiaCommandKind.UPDATE:
                    self.scheduler.update(command.sensor, command.skill)  # type: ignore[arg-type]
                elif command.kind is PiaCommandKind.UNBIND:
                    self.scheduler.unbind(command.sensor)  # type: ignore[arg-type]
                else:  # INVOKE: run once, no binding involved
                    skill = self.inventory.get(command.skill or "")
                    if skill is None:
                        raise UnknownSkill(f"skill not in inventory: {command.skill!r}")
                    run_skill(skill, self.robot, command.args)
                outcome, detail = StepOutcome.OK, ""
            except (AlreadyBound, NotBound, UnknownSkill, SpawnFailure, RobotUnreachable) as exc:
                outcome, detail = StepOutcome.ERROR, f"{type(exc).__name__}: {exc}"
            trace.record(command.kind.value.lower(), params, outcome, detail)
            results.append(CommandResult(command=command, outcome=outcome, detail=detail))
        return trace, results
