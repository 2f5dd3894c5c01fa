"""Socially intelligent agent: action parsing, task-state management,
fast/slow thinking, and emotion-aligned script delivery.

The task state is an explicit, editable store disentangled into one
``main_task`` plus ordered atomic detail units. Every update is local:
an incoming unit replaces the existing unit with the highest token-Jaccard
overlap when that overlap reaches the matching threshold, otherwise it is
appended; all untouched units stay byte-identical.

Fast thinking (retrieve & reuse) is the default: the canonical main_task
is the retrieval key, and a memory hit replays the stored script with no
script-writer call. Slow thinking (generate from scratch) is the fallback.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from .core import (
    EmotionLabel,
    ExecutionTrace,
    ModelTier,
    Script,
    SiaAction,
    SiaActionKind,
    StepOutcome,
    TaskInstruction,
    TaskState,
    Utterance,
)
from .errors import NoActiveTask, NoMatchingDetail, RobotUnreachable
from .gateway import SCHEMA_SCRIPT, SCHEMA_SIA, CompletionRequest, Gateway
from .memory import Hit, MemoryStore

logger = logging.getLogger(__name__)

JACCARD_MATCH_THRESHOLD = 0.5

PARSER_SYSTEM_PROMPT = (
    "You manage the task state of a social robot. Map the user's utterance to "
    "exactly one action keyword: NEW (start a task: extract a concise main_task "
    "plus atomic detail units, no semicolons inside a unit), UPDATE (modify or "
    "add detail units), DELETE (remove detail units), UPGRADE / DOWNGRADE "
    "(switch reasoning model capacity), MEMORY (persist the current task for "
    "reuse). Answer as JSON."
)

WRITER_SYSTEM_PROMPT = (
    "You are the script writer. Produce an ordered list of spoken utterances "
    "for the current task. Label every utterance with one emotion out of "
    "Happiness, Sadness, Anger, Fear, Disgust, Surprise, Contempt, Neutral. "
    "Answer as JSON."
)


def token_jaccard(a: str, b: str) -> float:
    """Jaccard overlap of case-folded whitespace tokens."""
    ta = set(a.casefold().split())
    tb = set(b.casefold().split())
    if not ta and not tb:
        return 1.0
    if not ta or not tb:
        return 0.0
    return len(ta & tb) / len(ta | tb)


def _best_match(unit: str, details: tuple[str, ...]) -> tuple[int, float]:
    """Index and overlap of the existing unit closest to ``unit`` (ties: earliest)."""
    best_index, best_overlap = -1, -1.0
    for i, existing in enumerate(details):
        overlap = token_jaccard(unit, existing)
        if overlap > best_overlap:
            best_index, best_overlap = i, overlap
    return best_index, best_overlap


def _dedupe(details: list[str]) -> tuple[str, ...]:
    seen: set[str] = set()
    out: list[str] = []
    for unit in details:
        folded = unit.casefold()
        if folded not in seen:
            seen.add(folded)
            out.append(unit)
    return tuple(out)


def apply_action(state: TaskState | None, action: SiaAction) -> TaskState | None:
    """Apply one parsed action to the task state; each edit is atomic and local."""
    if action.kind is SiaActionKind.NEW:
        tier = state.model_tier if state is not None else ModelTier.LIGHT
        return TaskState(
            main_task=action.main_task or "",
            details=_dedupe(list(action.details)),
            model_tier=tier,
        )
    if action.kind in (SiaActionKind.UPDATE, SiaActionKind.DELETE) and state is None:
        raise NoActiveTask(f"{action.kind.value} requires an active task")
    if action.kind is SiaActionKind.UPDATE:
        assert state is not None
        details = list(state.details)
        for unit in action.details:
            index, overlap = _best_match(unit, tuple(details))
            if index >= 0 and overlap >= JACCARD_MATCH_THRESHOLD:
                details[index] = unit
            else:
                details.append(unit)
        return TaskState(state.main_task, _dedupe(details), state.model_tier)
    if action.kind is SiaActionKind.DELETE:
        assert state is not None
        details = list(state.details)
        for unit in action.details:
            index, overlap = _best_match(unit, tuple(details))
            if index < 0 or overlap < JACCARD_MATCH_THRESHOLD:
                raise NoMatchingDetail(f"no stored detail matches {unit!r}")
            del details[index]
        return TaskState(state.main_task, tuple(details), state.model_tier)
    if action.kind is SiaActionKind.UPGRADE:
        if state is None:
            return None
        return TaskState(state.main_task, state.details, ModelTier.HEAVY)
    if action.kind is SiaActionKind.DOWNGRADE:
        if state is None:
            return None
        return TaskState(state.main_task, state.details, ModelTier.LIGHT)
    return state  # MEMORY: state untouched; persistence handled by the memory store


def render_state(state: TaskState) -> str:
    """Canonical prompt rendering of a task state for the script writer."""
    details = "; ".join(state.details)
    return f"task: {state.main_task}; details: {details}" if details else f"task: {state.main_task}"


@dataclass
class UtteranceDelivery:
    index: int
    ok: bool
    detail: str = ""


@dataclass
class DeliveryReport:
    utterances: list[UtteranceDelivery] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(u.ok for u in self.utterances)


@dataclass
class SiaTurnResult:
    action: SiaAction
    state: TaskState | None
    script: Script | None
    trace: ExecutionTrace
    path: str  # fast | slow | control
    delivery: DeliveryReport | None = None


_ACK_TEXT = {
    SiaActionKind.UPGRADE: "Switching to the larger model.",
    SiaActionKind.DOWNGRADE: "Switching back to the lightweight model.",
    SiaActionKind.MEMORY: "Got it, I will remember this task.",
}


class SocialAgent:
    """Per-session social agent; turns within a session are serialized."""

    def __init__(self, gateway: Gateway, memory: MemoryStore, robot, auto_store: bool = False) -> None:
        self.gateway = gateway
        self.memory = memory
        self.robot = robot
        self.auto_store = auto_store
        self.state: TaskState | None = None
        self.last_script: Script | None = None

    # -- operations -------------------------------------------------------

    def parse_action(self, utterance: str, current_state: TaskState | None) -> SiaAction:
        context = f"\n[current task: {current_state.main_task}]" if current_state else ""
        request = CompletionRequest(
            system_prompt=PARSER_SYSTEM_PROMPT + context,
            user_content=utterance,
            schema_id=SCHEMA_SIA,
            tier="light",
        )
        return self.gateway.complete_structured(request)

    def write_script(self, state: TaskState, context: str = "") -> Script:
        request = CompletionRequest(
            system_prompt=WRITER_SYSTEM_PROMPT,
            user_content=render_state(state) + (f"\nrecent: {context}" if context else ""),
            schema_id=SCHEMA_SCRIPT,
            tier=state.model_tier.value,
        )
        return self.gateway.complete_structured(request)

    def deliver(self, script: Script) -> DeliveryReport:
        """Per utterance: speak and motion-bundle dispatched concurrently;
        the next utterance starts only after both complete."""
        report = DeliveryReport()
        with ThreadPoolExecutor(max_workers=2, thread_name_prefix="deliver") as pool:
            for i, utterance in enumerate(script.utterances):
                speak_f = pool.submit(
                    self.robot.speak, utterance.text, utterance.rate, utterance.emotion
                )
                motion_f = pool.submit(self.robot.motion_bundle, utterance.emotion)
                errors: list[str] = []
                for future in (speak_f, motion_f):
                    try:
                        future.result()
                    except RobotUnreachable as exc:
                        errors.append(str(exc))
                report.utterances.append(
                    UtteranceDelivery(index=i, ok=not errors, detail="; ".join(errors))
                )
        return report

    # -- the turn ---------------------------------------------------------------

    def respond(self, instruction: TaskInstruction) -> SiaTurnResult:
        trace = ExecutionTrace()
        try:
            return self._respond(instruction, trace)
        except Exception as exc:
            from .errors import PilotError

            if isinstance(exc, PilotError) and not hasattr(exc, "trace"):
                exc.trace = trace  # partial trace travels with the error
            raise

    def _respond(self, instruction: TaskInstruction, trace: ExecutionTrace) -> SiaTurnResult:
        action = self.parse_action(instruction.text, self.state)
        trace.record("parse_action", {"utterance": instruction.text}, detail=action.kind.value)

        try:
            new_state = apply_action(self.state, action)
        except (NoActiveTask, NoMatchingDetail) as exc:
            trace.record("apply_action", action.to_dict(), StepOutcome.ERROR, detail=str(exc))
            raise
        self.state = new_state
        trace.record("apply_action", action.to_dict())

        script: Script | None = None
        path = "control"

        if action.kind in (SiaActionKind.NEW, SiaActionKind.UPDATE, SiaActionKind.DELETE):
            assert self.state is not None
            found = self.memory.lookup(self.state.main_task)
            if isinstance(found, Hit):
                trace.record(
                    "memory_lookup",
                    {"main_task": self.state.main_task},
                    detail=f"hit distance={found.distance:.6f}",
                )
                script = found.record.script
                path = "fast"
            else:
                miss_detail = (
                    "miss (empty store)"
                    if found.min_distance is None
                    else f"miss min_distance={found.min_distance:.6f}"
                )
                trace.record("memory_lookup", {"main_task": self.state.main_task}, detail=miss_detail)
                script = self.write_script(self.state, context=instruction.text)
                trace.record(
                    "write_script",
                    {"main_task": self.state.main_task, "tier": self.state.model_tier.value},
                    detail=f"{len(script.utterances)} utterances",
                )
                path = "slow"
                if self.auto_store:
                    record_id = self.memory.store(self.state.main_task, script)
                    trace.record("memory_store", {"main_task": self.state.main_task}, detail=record_id)
        elif action.kind is SiaActionKind.MEMORY:
            if self.state is None or self.last_script is None:
                trace.record("memory_store", {}, StepOutcome.ERROR, detail="no active task to store")
                raise NoActiveTask("MEMORY requires a previously scripted task")
            record_id = self.memory.store(self.state.main_task, self.last_script)
            trace.record("memory_store", {"main_task": self.state.main_task}, detail=record_id)
            script = Script((Utterance(_ACK_TEXT[action.kind], EmotionLabel.NEUTRAL),))
        else:  # UPGRADE / DOWNGRADE acknowledgment
            script = Script((Utterance(_ACK_TEXT[action.kind], EmotionLabel.NEUTRAL),))

        assert script is not None
        if path in ("fast", "slow"):
            self.last_script = script

        delivery = self.deliver(script)
        trace.record(
            "deliver",
            {"utterances": len(script.utterances)},
            StepOutcome.OK if delivery.ok else StepOutcome.ERROR,
            detail="" if delivery.ok else "; ".join(u.detail for u in delivery.utterances if not u.ok),
        )

        return SiaTurnResult(
            action=action, state=self.state, script=script, trace=trace, path=path, delivery=delivery
        )
